// Copyright 2026 The mpdo-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mpdo/grid.hpp"
#include "mpdo/lattice.hpp"

namespace mpdo {

// One-variable frequency profile m(xi) on R^n.
class Profile {
 public:
  enum class Kind { one, gaussian, bumps, field, lp_shell, function };

  static Profile one();
  // exp(-|xi|^2 / (2 w^2)).
  static Profile gaussian(double width);
  // Seeded mixture of three complex-weighted Gaussians centred in [-band, band]^n.
  static Profile bumps(std::uint64_t seed, double band, int n);
  // Nearest-sample lookup in a frequency-side field; zero off the lattice range.
  static Profile field(Field values);
  // Dyadic shell psi_k(|xi|).
  static Profile lp_shell(int k);
  static Profile function(std::function<cplx(const Vec&)> fn, std::string label);

  Kind kind() const { return kind_; }
  const std::string& label() const { return label_; }
  cplx operator()(const Vec& xi) const;

 private:
  Kind kind_ = Kind::one;
  double width_ = 1.0;
  std::vector<cplx> coef_;
  std::vector<Vec> centers_;
  std::vector<double> widths_;
  std::shared_ptr<const Field> field_;
  int shell_ = 0;
  std::function<cplx(const Vec&)> fn_;
  std::string label_ = "one";
};

// Description of a symbol sigma(x, xi_1, ..., xi_N).
struct SymbolSpec {
  enum class Kind { constant, separable, band_limited, lattice, x_modulated, general };

  Kind kind = Kind::constant;
  int N = 1;
  int n = 1;
  std::string family = "const";

  cplx c = 1.0;                   // constant
  std::vector<Profile> profiles;  // separable: m_j(xi_j)

  // Band-limited: sum_i coef_i exp(i (alpha_i0 . x + sum_j alpha_ij . xi_j)) prod_j G(xi_j).
  std::vector<double> radii;           // R_0, ..., R_N
  std::vector<cplx> coef;              // one per term
  std::vector<std::vector<Vec>> alpha; // alpha[i][0..N]
  std::uint64_t seed = 0;

  // Lattice: V(round xi) prod_j bump(xi_j - round xi_j).
  LatticeSeq V;

  // x-modulated: amp(x) exp(-i x . (xi_1 + ... + xi_N)) tau(xi_1, ..., xi_N).
  std::function<cplx(const Vec&)> amp;
  std::function<cplx(std::span<const Vec>)> tau;

  // General pointwise symbol.
  std::function<cplx(const Vec&, std::span<const Vec>)> fn;
  bool x_independent_fn = false;

  static SymbolSpec constant(cplx value, int N, int n);
  static SymbolSpec separable(std::vector<Profile> m, int n);
  // J terms, seeded; the same seed fixes the shape for every choice of radii.
  static SymbolSpec band_limited(std::vector<double> radii, int n, std::uint64_t seed, int terms = 8);
  static SymbolSpec lattice(LatticeSeq V);
  static SymbolSpec x_modulated(std::function<cplx(const Vec&)> amp, std::function<cplx(std::span<const Vec>)> tau,
                                int N, int n, std::string family);
  static SymbolSpec general(std::function<cplx(const Vec&, std::span<const Vec>)> fn, int N, int n,
                            bool x_independent, std::string family);

  bool x_independent() const;
  cplx operator()(const Vec& x, std::span<const Vec> xi) const;
};

// Smoothing window of band-limited symbols in one variable; its transform is
// supported in the ball of radius 1/2.
double band_window(const Vec& xi, int n);

// Cutoff used by lattice symbols: 1 on [-1/4, 1/4]^n, 0 outside [-1/2, 1/2]^n.
double lattice_bump(const Vec& t, int n);

}  // namespace mpdo
