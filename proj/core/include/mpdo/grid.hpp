// Copyright 2026 The mpdo-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace mpdo {

using cplx = std::complex<double>;

// A point of R^n for n <= 2. Unused trailing components are zero.
using Vec = std::array<double, 2>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Periodic sampling lattice on the torus [-L/2, L/2)^n with M points per
// axis. Sample points are x_j = -L/2 + jL/M and the dual lattice is
// xi_k = (2 pi / L) k with k in [-M/2, M/2).
class Grid {
 public:
  Grid() = default;
  Grid(int dim, double period, int res);

  int dim() const { return dim_; }
  double period() const { return period_; }
  int res() const { return res_; }

  double spacing() const { return period_ / res_; }
  double freq_spacing() const { return 2.0 * kPi / period_; }
  std::size_t size() const;

  double point(int j) const { return -0.5 * period_ + j * spacing(); }
  int wavenumber(int i) const { return i - res_ / 2; }
  double frequency(int i) const { return freq_spacing() * wavenumber(i); }
  // Largest |xi| on the dual lattice.
  double max_frequency() const;

  std::array<int, 2> unflatten(std::size_t idx) const;
  std::size_t flatten(int i0, int i1 = 0) const;

  Vec physical_coord(std::size_t idx) const;
  Vec frequency_coord(std::size_t idx) const;

  // True when the period is a positive integer dividing the resolution, so
  // unit cubes nu + [-1/2, 1/2)^n are unions of whole cells.
  bool cube_aligned() const;
  int points_per_unit() const;

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.dim_ == b.dim_ && a.period_ == b.period_ && a.res_ == b.res_;
  }

 private:
  int dim_ = 1;
  double period_ = 2.0 * kPi;
  int res_ = 64;
};

enum class Side { physical, frequency };

struct Field {
  Grid grid;
  Side side = Side::physical;
  std::vector<cplx> values;

  Field() = default;
  Field(const Grid& g, Side s) : grid(g), side(s), values(g.size()) {}

  static Field sample(const Grid& g, const std::function<cplx(const Vec&)>& fn);
  static Field sample_frequency(const Grid& g, const std::function<cplx(const Vec&)>& fn);

  Vec coord(std::size_t idx) const {
    return side == Side::physical ? grid.physical_coord(idx) : grid.frequency_coord(idx);
  }
};

// Riemann-sum Fourier transform h^n sum_j e^{-i x_j.xi_k} f(x_j).
Field forward_transform(const Field& f);
// (2 pi)^{-n} (2 pi / L)^n sum_k e^{i x_j.xi_k} F(xi_k).
Field inverse_transform(const Field& F);

// (h^n sum |f|^p)^{1/p}; max |f| for p = inf.
double lebesgue_norm(const Field& f, double p);

// m(D) f on the dual lattice.
Field apply_multiplier(const Field& f, const std::function<cplx(const Vec&)>& m);

// Periodic convolution h^n sum_j k(x_p - x_j) f(x_j) with k sampled on the
// same centered grid (k's sample at index M/2 is the value at the origin).
Field periodic_convolve(const Field& kernel, const Field& f);

// Coordinatewise helpers for arbitrary dimension lists (used by product
// grids of sampled symbols).
std::vector<double> axis_points(const Grid& g);

}  // namespace mpdo
