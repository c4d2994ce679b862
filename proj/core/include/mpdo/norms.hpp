// Copyright 2026 The mpdo-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "mpdo/grid.hpp"
#include "mpdo/lattice.hpp"

namespace mpdo {

class WeightSpec;

struct AmalgamParams {
  double p = 2.0;
  double q = 2.0;
};

struct KernelParams {
  double L_exp = 4.0;
  static KernelParams defaults(int dim) { return {2.0 * dim + 2.0}; }
};

// (L^p, l^q) norm over the unit cubes nu + [-1/2, 1/2)^n of the torus.
double amalgam_norm(const Field& f, const AmalgamParams& prm);
double l2_ul_norm(const Field& f);

// Dense samples of sigma(x, xi_1, ..., xi_N) on x_grid x xi_grid^N. The xi
// variables are sampled at the physical points of xi_grid. The x block is the
// slowest index, then xi_1, ..., xi_N; each block is laid out like a Field.
struct SampledSymbol {
  Grid x_grid;
  Grid xi_grid;
  int N = 1;
  std::vector<cplx> values;

  SampledSymbol() = default;
  SampledSymbol(const Grid& gx, const Grid& gxi, int n_inputs);

  using Fn = std::function<cplx(const Vec& x, std::span<const Vec> xi)>;
  static SampledSymbol sample(const Grid& gx, const Grid& gxi, int n_inputs, const Fn& fn);

  // Per-axis resolutions and periods of the product grid.
  std::vector<int> dims() const;
  std::vector<double> periods() const;
  std::size_t block_size(int block) const;
};

// Sup over unit product cubes of the local L^2 quadrature, in all (N+1)n
// variables.
double symbol_l2ul_norm(const SampledSymbol& s);

// sup_t t * #{k : |a_k| > t}^{1/q}, exact over the distinct values.
double lorentz_weak_norm(std::span<const double> a, double q);
double lorentz_weak_norm(const LatticeSeq& a, double q);

// Periodic convolution of |f| with the kernel <x>^{-L} summed over the 3^n
// nearest period translates.
Field s_kernel_apply(const Field& f, const KernelParams& prm);
Field s_kernel(const Grid& g, const KernelParams& prm);

// || S(|f|^2)^{1/2} ||_{L^p}.
double sqrt_s_square_norm(const Field& f, double p, const KernelParams& prm);

struct RatioRange {
  double min = 0.0;
  double max = 0.0;
};

// min / max over fs of || g(x - nu) f(x) ||_{L^p_x l^q_nu} / amalgam_norm(f).
// Zero fields are skipped; if all are zero both ends are 0.
RatioRange equivalent_amalgam_check(std::span<const Field> fs, const Field& g,
                                    const AmalgamParams& prm, double decay);

// l^t aggregate over dyadic blocks k of 2^{s.k} || W^{-1} Delta_k sigma ||_{L^2_ul}.
double besov_symbol_norm(const SampledSymbol& sigma, const WeightSpec& W,
                         std::span<const double> s, double t);

// Sup of mean oscillation over dyadic cubes of side <= 1 and of mean modulus
// over aligned cubes of side >= 1.
double bmo_discrete_norm(const Field& f);

// || || a(outer, inner) ||_{l^p_inner} ||_{l^q_outer} for a row-major array
// a[outer * n_inner + inner].
double mixed_sequence_norm(std::span<const double> a, std::size_t n_outer, std::size_t n_inner,
                           double p_inner, double q_outer);

// (sum |v|^p)^{1/p}, max for p = inf.
double lp_sequence_norm(std::span<const double> v, double p);

}  // namespace mpdo
