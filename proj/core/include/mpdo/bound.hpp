// Copyright 2026 The mpdo-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mpdo/evaluate.hpp"
#include "mpdo/grid.hpp"
#include "mpdo/lattice.hpp"
#include "mpdo/stats.hpp"
#include "mpdo/symbol.hpp"
#include "mpdo/weights.hpp"

namespace mpdo {

// Random trigonometric polynomial with standard complex Gaussian coefficients
// on the wavenumbers |k| <= band_fraction * M / 2.
Field random_trig_polynomial(const Grid& g, double band_fraction, Rng& rng);

// sigma(xi) = sum_nu V(nu) prod_j bump(xi_j - nu_j) with the bump equal to 1
// on [-1/4, 1/4]^n and vanishing outside [-1/2, 1/2]^n.
SymbolSpec build_lattice_symbol(const LatticeSeq& V, const Grid& g);

// Bump of the test functions below: supported in [-1/4, 1/4]^n, 1 at 0.
double test_bump(const Vec& xi, int n);

// f(x) = sum_nu A(nu) e^{i nu.x} F^{-1}[bump](x), built on the frequency side
// so that it is exact on any period.
Field build_lattice_test_function(const LatticeSeq& A, const Grid& g);

// d_k = sum over nu_1 + ... + nu_N = k of V(nu) prod_j A_j(nu_j), on radius
// N times the radius of the A_j.
LatticeSeq lattice_output_coefficients(const LatticeSeq& V, std::span<const LatticeSeq> A);

struct TestFamily {
  double band_fraction = 0.5;
  std::uint64_t seed = 0;
};

struct BoundednessReport {
  std::vector<double> q;
  double r = 1.0;
  std::vector<double> ratios;  // one per trial, NaN for skipped trials
  int skipped = 0;
  double sup_ratio = 0.0;
  double bound_factor = 0.0;   // R_0^{n/2} prod_j R_j^{n/min(2, q_j)}, band-limited symbols only
  double symbol_norm = 0.0;    // || W^{-1} sigma ||_{L^2_ul}
  double bound_value = 0.0;    // bound_factor * symbol_norm
  double constant = 0.0;       // sup_ratio / bound_value
  std::string family;
};

// Sampled ratios || T(f) ||_{(L^2, l^r)} / prod_j || f_j ||_{(L^2, l^{q_j})}
// over seeded random inputs. Trials run concurrently with per-trial seeds.
BoundednessReport empirical_bound(const SymbolSpec& sigma, std::span<const double> q, double r, const Grid& g,
                                  const TestFamily& family, int trials, const WeightSpec* W = nullptr,
                                  const EvalOptions& opt = {});

// || W^{-1} sigma ||_{L^2_ul} on explicit sampling grids.
double weighted_symbol_norm(const SymbolSpec& sigma, const WeightSpec& W, const Grid& gx, const Grid& gxi);
// Same with grids sized from the band radii: x period 8, xi period 32, at
// least 4 samples per unit and one per unit of radius.
double weighted_symbol_norm(const SymbolSpec& sigma, const WeightSpec& W);

double prop51_bound_factor(int n, std::span<const double> radii, std::span<const double> q);
double prop62_bound_factor(int n, std::span<const double> radii, std::span<const double> p);

struct ExponentCheck {
  bool pass = true;
  std::string witness;  // first violated constraint, empty on pass
};

// Exponent system: q_j in [2, inf], r >= 2/N, s_0 = n/2,
// n/2 - n/q_j <= s_j <= n/2, sum_j s_j = sum_j (n/2 - n/q_j) + n/r,
// sum_j 1/q_j >= 1/r. s holds s_0, ..., s_N.
ExponentCheck theorem61_exponent_check(int n, std::span<const double> q, double r, std::span<const double> s);

}  // namespace mpdo
