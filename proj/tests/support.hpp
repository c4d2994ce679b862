// Copyright 2026 The mpdo-lab Authors
// SPDX-License-Identifier: Apache-2.0

// Shared helpers and brute-force oracles for the unit tests.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "mpdo/grid.hpp"
#include "mpdo/stats.hpp"

namespace mpdo::test {

inline Field random_field(const Grid& g, Rng& rng) {
  Field f(g, Side::physical);
  for (auto& v : f.values) v = complex_normal(rng);
  return f;
}

inline Field random_nonneg_field(const Grid& g, Rng& rng) {
  Field f(g, Side::physical);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (auto& v : f.values) v = u(rng);
  return f;
}

// Smooth random field: a few Gaussian bumps with random complex weights.
inline Field random_smooth_field(const Grid& g, Rng& rng, int bumps = 4) {
  std::uniform_real_distribution<double> pos(-0.5 * g.period(), 0.5 * g.period());
  std::uniform_real_distribution<double> wid(0.5, 2.0);
  std::vector<Vec> c(bumps);
  std::vector<double> w(bumps);
  std::vector<cplx> a(bumps);
  for (int b = 0; b < bumps; ++b) {
    c[b] = {pos(rng), g.dim() == 2 ? pos(rng) : 0.0};
    w[b] = wid(rng);
    a[b] = complex_normal(rng);
  }
  return Field::sample(g, [&](const Vec& x) {
    cplx acc = 0.0;
    for (int b = 0; b < bumps; ++b) {
      double r2 = 0.0;
      for (int k = 0; k < g.dim(); ++k) {
        double d = x[k] - c[b][k];
        d -= g.period() * std::round(d / g.period());
        r2 += d * d;
      }
      acc += a[b] * std::exp(-0.5 * r2 / (w[b] * w[b]));
    }
    return acc;
  });
}

// Riemann-sum transform h^n sum_j e^{-i x_j . xi_k} f(x_j), evaluated term by term.
inline Field direct_forward(const Field& f) {
  const Grid& g = f.grid;
  Field out(g, Side::frequency);
  const double h = std::pow(g.spacing(), g.dim());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Vec xi = g.frequency_coord(k);
    cplx acc = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
      const Vec x = g.physical_coord(j);
      acc += std::polar(1.0, -(x[0] * xi[0] + x[1] * xi[1])) * f.values[j];
    }
    out.values[k] = h * acc;
  }
  return out;
}

inline Field direct_inverse(const Field& F) {
  const Grid& g = F.grid;
  Field out(g, Side::physical);
  const double c = std::pow(g.freq_spacing() / (2.0 * kPi), g.dim());
  for (std::size_t j = 0; j < g.size(); ++j) {
    const Vec x = g.physical_coord(j);
    cplx acc = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      const Vec xi = g.frequency_coord(k);
      acc += std::polar(1.0, x[0] * xi[0] + x[1] * xi[1]) * F.values[k];
    }
    out.values[j] = c * acc;
  }
  return out;
}

inline double max_abs_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

inline double max_abs(const Field& a) {
  double m = 0.0;
  for (const auto& v : a.values) m = std::max(m, std::abs(v));
  return m;
}

// Unit cube index of a coordinate: cube c covers [c - 1/2, c + 1/2) modulo the period.
inline int cube_of(double x, int units) {
  const int c = static_cast<int>(std::floor(x + 0.5));
  return ((c % units) + units) % units;
}

}  // namespace mpdo::test
