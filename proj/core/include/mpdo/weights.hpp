// Copyright 2026 The mpdo-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mpdo/grid.hpp"
#include "mpdo/lattice.hpp"

namespace mpdo {

// Weight function W(xi_1, ..., xi_N) on (R^n)^N.
class WeightSpec {
 public:
  enum class Kind { constant, power, product, lorentz_sample, lifted, tabulated };

  // W = 1.
  static WeightSpec constant();
  // (1 + |xi_1| + ... + |xi_N|)^m with m <= 0.
  static WeightSpec power(double m);
  // prod_j (1 + |xi_j|)^{-a_j}; one exponent per input.
  static WeightSpec product(std::vector<double> a);
  // Lattice data extended by nearest-lattice-point lookup, zero outside.
  static WeightSpec lorentz_sample(LatticeSeq v);
  static WeightSpec tabulated(LatticeSeq v);
  // sum_mu V(mu) <xi - mu>^{-M}.
  static WeightSpec lifted(LatticeSeq v, double m_lift);

  // The weight with V(nu) = (1 + |nu_1| + ... + |nu_N|)^{-(N-1)n/2}.
  static WeightSpec example_decay(int n, int N);

  // Config ids: "const", "power:m", "product:a1,...,aN", "lorentz-sample:file",
  // "table:file". Files hold a JSON object {dim, radius, blocks, values}.
  static WeightSpec parse(const std::string& id);

  Kind kind() const { return kind_; }
  std::string id() const;

  // Number of inputs the weight is pinned to, or 0 when any N is accepted.
  int arity() const;

  double operator()(std::span<const Vec> xi, int n) const;

  // Values at the integer points of ([-R, R]^n)^N.
  LatticeSeq restrict_to_lattice(int n, int N, int radius) const;

  const std::vector<double>& exponents() const { return exps_; }
  const LatticeSeq& lattice() const { return lat_; }
  double lift_exponent() const { return m_lift_; }

 private:
  Kind kind_ = Kind::constant;
  double m_ = 0.0;
  std::vector<double> exps_;
  LatticeSeq lat_;
  double m_lift_ = 0.0;
  std::string source_;
};

LatticeSeq load_lattice_json(const std::string& path);
void save_lattice_json(const LatticeSeq& v, const std::string& path);

// sum_nu V(nu) A_0(nu_1 + ... + nu_N) prod_j A_j(nu_j). A holds A_0, ..., A_N.
double bn_form_value(const LatticeSeq& V, std::span<const LatticeSeq> A);

enum class BnMethod { alternating, brute };

struct BnEstimate {
  int radius = 0;
  BnMethod method = BnMethod::alternating;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  bool infinite = false;
  std::vector<double> trace;  // value after each sweep (alternating) or polish step (brute)
};

struct BnOptions {
  int max_sweeps = 200;
  double rel_tol = 1e-9;
  int brute_levels = 8;
  double brute_cap = 2e6;
};

// Best constant of the form on the truncation of V to radius M, over
// l^2-normalized nonnegative A_1, ..., A_N on [-M, M]^n and A_0 on
// [-NM, NM]^n (the range of nu_1 + ... + nu_N).
BnEstimate bn_constant_estimate(const LatticeSeq& V, int radius, BnMethod method, const BnOptions& opt = {});

struct ModerateResult {
  double C_est = 0.0;
  double M_est = 0.0;
  bool pass = false;
};

// Smallest exponent M on a 0.01 grid for which the sampled constant
// C(M) = max F(xi + eta) / (F(xi) <eta>^M) satisfies C(M) <= 2^{M+1}.
ModerateResult moderate_check(const WeightSpec& W, int n, int N, int sample_count, double box_radius,
                              std::uint64_t seed);

WeightSpec v_star_lift(const LatticeSeq& V, double m_lift);

// V_j(nu) = V(-nu_1, ..., nu_1 + ... + nu_N, ..., -nu_N), the sum sitting in
// slot j (1-based). Arguments outside the truncation of V read as zero.
LatticeSeq block_transform(const LatticeSeq& V, int j);

// Ratio of the alternating estimates for V_j and V at the given radius.
double transform_closure_check(const LatticeSeq& V, int j, int radius);
// Same for a weight function: restricted to radius N * radius first so the
// transform is exact on the target truncation.
double transform_closure_check(const WeightSpec& W, int n, int N, int j, int radius);

// (V x V')(nu, nu') = V(nu) V'(nu') on Z^{d + d'}, blockwise.
LatticeSeq tensor_product(const LatticeSeq& V, const LatticeSeq& Vp);

}  // namespace mpdo
