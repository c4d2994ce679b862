// Copyright 2026 The mpdo-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "mpdo/evaluate.hpp"
#include "mpdo/grid.hpp"
#include "mpdo/lattice.hpp"
#include "mpdo/stats.hpp"
#include "mpdo/symbol.hpp"

namespace mpdo {

struct WaingerParams {
  double a = 0.5;  // phase exponent, in (0, 1)
  double b = 0.6;  // decay exponent, in (0, n)
  double t = 1.0;  // exponential regularization
  int K = 8;       // lattice truncation radius (max norm)
};

// sum_{0 < |k| <= K} e^{-t|k|} |k|^{-b} e^{i|k|^a} e^{ik.x} phi(x).
Field wainger_function(const WaingerParams& prm, const Field& phi);

// d_k = sum over k_1 + ... + k_N = k, k_j != 0, |k_j|_inf <= inner of
// <(k_1, ..., k_N)>^m prod_j |k_j|^{-b_j}, for |k|_inf <= K.
// inner = 0 selects 8K, which keeps the truncation out of the fit window.
LatticeSeq compute_dk(double m, std::span<const double> b, int K, int n, int N, int inner = 0,
                      double cost_cap = 2e8);

// Log-log slope of d_k against |k| over K/4 <= |k| <= K.
SlopeFit dk_slope(const LatticeSeq& d);

// Radial profiles of the growth experiments: phi(y) = psi_0(2y) supported in
// |y| <= 1, psi(y) = psi_0(y) - psi_0(2y) and psi_a(y) = psi(2^{-a} y).
double sharp_phi(double y);
double sharp_psi(int a, double y);

enum class SlotFamily { single_slot, all_slots };

struct GrowthCase {
  SymbolSpec sigma;
  std::vector<Field> f;
};

// Symbol and inputs for one dilation a. Profiles are the lattice samples of
// the inverse transforms of psi_a and phi.
GrowthCase prop74_case(int a, SlotFamily family, int N, const Grid& g);

// Largest radius on the first axis within which |(phi * phi)(x)| stays at or
// above half its value at 0.
double halfmax_radius(const Grid& g);

struct GrowthPoint {
  int a = 0;
  double norm = 0.0;
  cplx T0 = 0.0;
};

struct GrowthReport {
  SlotFamily family = SlotFamily::single_slot;
  int N = 2;
  double r = 1.0;
  double delta = 0.0;  // restriction radius for single_slot, 0 for all_slots
  std::vector<GrowthPoint> points;
  SlopeFit fit;        // slope of log2 norm against a
  double expected_slope = 0.0;
};

// single_slot measures || T ||_{L^r(|x| <= delta)}, all_slots the L^r norm
// over the whole torus.
GrowthReport prop74_growth_experiment(std::span<const int> a_values, SlotFamily family, int N, double r,
                                      const Grid& g, const EvalOptions& opt = {});

// a (s_1 + n/2 + n/q_1) for single_slot, a (sum_j (s_j + n/2) + sum_j n/q_j)
// for all_slots. s and q hold s_1..s_N and q_1..q_N.
double prop74_budget(int a, std::span<const double> s, std::span<const double> q, int n, SlotFamily family);

// b_j = n - a_j n/2 - n/q_j + a_j n/q_j + eps_j.
double wainger_decay(double a, double q, double eps, int n);

// sum over 0 < |l_j|_inf <= K of <(l_1, ..., l_N)>^{m - s0} prod_j |l_j|^{-b_j}.
double prop73_coefficient_sum(double m, double s0, std::span<const double> b, int K, int n);

// Growth exponent of the partial sums: m - s0 - b_1 + sum_{j >= 2} (n - b_j) + n.
double prop73_exponent(double m, double s0, std::span<const double> b, int n);

// Slope of log2(S_{K_i} - S_{K_{i-1}}) against log2 K_i for the partial sums
// S_K above. Differencing removes the constant offset of the sums, whose
// pre-asymptotic drift otherwise biases a fit of log2 S_K. `sums` receives S_K.
SlopeFit prop73_increment_slope(double m, double s0, std::span<const double> b, int n, std::span<const int> K,
                                std::vector<double>* sums = nullptr);

struct Prop73Case {
  SymbolSpec sigma;
  std::vector<Field> f;
  Field amp;                 // phi(x) on the grid
  double coefficient = 0.0;  // prop73_coefficient_sum
  double bump_l2sq = 0.0;    // lattice quadrature of the integral of phi^2
  // T = predicted * amp.
  double predicted = 0.0;
};

// x-modulated lattice symbol and lacunary inputs with phase exponents a_j and
// decay exponents b_j, truncated at K. The period must be 2 pi times an
// integer so that integer frequencies are lattice points.
Prop73Case prop73_symbol(int K, double s0, const Grid& g, double m, std::span<const double> a,
                         std::span<const double> b);

}  // namespace mpdo
