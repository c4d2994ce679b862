// Copyright 2026 The mpdo-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpdo/bound.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "mpdo/decomp.hpp"
#include "mpdo/error.hpp"
#include "mpdo/norms.hpp"
#include "mpdo/parallel.hpp"

namespace mpdo {

Field random_trig_polynomial(const Grid& g, double band_fraction, Rng& rng) {
  if (!(band_fraction > 0.0) || band_fraction > 1.0) throw Error(Errc::parameter, "band fraction must lie in (0, 1]");
  const int M = g.res();
  const double band = band_fraction * (M / 2);
  Field F(g, Side::frequency);
  for (std::size_t i = 0; i < F.values.size(); ++i) {
    const auto ij = g.unflatten(i);
    const double w0 = ij[0] - M / 2;
    const double w1 = g.dim() == 2 ? ij[1] - M / 2 : 0.0;
    if (std::hypot(w0, w1) <= band) F.values[i] = complex_normal(rng);
  }
  return inverse_transform(F);
}

SymbolSpec build_lattice_symbol(const LatticeSeq& V, const Grid& g) {
  if (V.dim() != g.dim()) throw Error(Errc::shape, "lattice weight dimension does not match the grid");
  const double top = g.freq_spacing() * (g.res() / 2 - 1);
  if (V.radius() + 0.5 > top) throw Error(Errc::range, "lattice truncation exceeds the grid frequency range");
  SymbolSpec s = SymbolSpec::lattice(V);
  s.family = "lattice";
  return s;
}

double test_bump(const Vec& xi, int n) {
  double v = 1.0;
  for (int a = 0; a < n; ++a) v *= compact_bump(xi[a], 0.25);
  return v;
}

Field build_lattice_test_function(const LatticeSeq& A, const Grid& g) {
  if (A.blocks() != 1 || A.dim() != g.dim()) throw Error(Errc::shape, "test sequence must be single-block of the grid dim");
  const double top = g.freq_spacing() * (g.res() / 2 - 1);
  if (A.radius() + 0.25 > top) throw Error(Errc::range, "test sequence radius exceeds the grid frequency range");
  const int n = g.dim();
  std::vector<int> c(n);
  Field F(g, Side::frequency);
  for (std::size_t i = 0; i < A.size(); ++i) {
    const double a = A.values()[i];
    if (a == 0.0) continue;
    A.coords_of(i, c);
    for (std::size_t k = 0; k < F.values.size(); ++k) {
      const Vec xi = g.frequency_coord(k);
      const double b = test_bump({xi[0] - c[0], n == 2 ? xi[1] - c[1] : 0.0}, n);
      if (b != 0.0) F.values[k] += a * b;
    }
  }
  return inverse_transform(F);
}

LatticeSeq lattice_output_coefficients(const LatticeSeq& V, std::span<const LatticeSeq> A) {
  const int N = V.blocks();
  const int n = V.dim();
  if (static_cast<int>(A.size()) != N) throw Error(Errc::shape, "need one test sequence per input");
  const int R = A[0].radius();
  for (const auto& a : A)
    if (a.dim() != n || a.blocks() != 1 || a.radius() != R) throw Error(Errc::shape, "test sequences must match");
  LatticeSeq d(n, N * R, 1);
  LatticeSeq box(n, R, N);
  std::vector<int> c(box.coords()), blk(n), sum(n);
  for (std::size_t i = 0; i < box.size(); ++i) {
    box.coords_of(i, c);
    double term = V.get(c);
    std::fill(sum.begin(), sum.end(), 0);
    for (int j = 0; j < N && term != 0.0; ++j) {
      for (int a = 0; a < n; ++a) {
        blk[a] = c[j * n + a];
        sum[a] += blk[a];
      }
      term *= A[j].get(blk);
    }
    if (term == 0.0) continue;
    d.values()[d.index_of(sum)] += term;
  }
  return d;
}

double weighted_symbol_norm(const SymbolSpec& sigma, const WeightSpec& W, const Grid& gx, const Grid& gxi) {
  const int n = sigma.n;
  const auto s = SampledSymbol::sample(gx, gxi, sigma.N, [&](const Vec& x, std::span<const Vec> xi) {
    const double w = W(xi, n);
    if (!(w > 0.0)) throw Error(Errc::parameter, "weight must be positive on the sampling grid");
    return sigma(x, xi) / w;
  });
  return symbol_l2ul_norm(s);
}

double weighted_symbol_norm(const SymbolSpec& sigma, const WeightSpec& W) {
  double r0 = 1.0, rmax = 1.0;
  if (sigma.kind == SymbolSpec::Kind::band_limited) {
    r0 = std::max(1.0, sigma.radii[0]);
    for (std::size_t j = 1; j < sigma.radii.size(); ++j) rmax = std::max(rmax, sigma.radii[j]);
  }
  const int px = std::max(4, static_cast<int>(std::bit_ceil(static_cast<unsigned>(std::ceil(r0)))));
  const int pxi = std::max(4, static_cast<int>(std::bit_ceil(static_cast<unsigned>(std::ceil(rmax)))));
  return weighted_symbol_norm(sigma, W, Grid(sigma.n, 8.0, 8 * px), Grid(sigma.n, 32.0, 32 * pxi));
}

double prop51_bound_factor(int n, std::span<const double> radii, std::span<const double> q) {
  if (radii.size() != q.size() + 1) throw Error(Errc::shape, "need N + 1 radii and N exponents");
  double f = std::pow(radii[0], 0.5 * n);
  for (std::size_t j = 0; j < q.size(); ++j) f *= std::pow(radii[j + 1], n / std::min(2.0, q[j]));
  return f;
}

double prop62_bound_factor(int n, std::span<const double> radii, std::span<const double> p) {
  if (radii.size() != p.size() + 1) throw Error(Errc::shape, "need N + 1 radii and N exponents");
  double f = std::pow(radii[0], 0.5 * n);
  for (std::size_t j = 0; j < p.size(); ++j) f *= std::pow(radii[j + 1], n / p[j]);
  return f;
}

BoundednessReport empirical_bound(const SymbolSpec& sigma, std::span<const double> q, double r, const Grid& g,
                                  const TestFamily& family, int trials, const WeightSpec* W, const EvalOptions& opt) {
  const int N = sigma.N;
  if (static_cast<int>(q.size()) != N) throw Error(Errc::shape, "need one exponent q_j per input");
  if (trials < 1) throw Error(Errc::parameter, "need at least one trial");
  BoundednessReport rep;
  rep.q.assign(q.begin(), q.end());
  rep.r = r;
  rep.family = sigma.family;
  rep.ratios.assign(trials, std::numeric_limits<double>::quiet_NaN());
  parallel_for(static_cast<std::size_t>(trials), [&](std::size_t t) {
    std::vector<Field> f;
    double denom = 1.0;
    for (int j = 0; j < N; ++j) {
      Rng rng(derive_seed(family.seed, t * N + j));
      f.push_back(random_trig_polynomial(g, family.band_fraction, rng));
      denom *= amalgam_norm(f.back(), {2.0, q[j]});
    }
    if (denom == 0.0) return;
    const Field T = evaluate(sigma, f, opt);
    rep.ratios[t] = amalgam_norm(T, {2.0, r}) / denom;
  });
  for (double v : rep.ratios) {
    if (std::isnan(v)) {
      ++rep.skipped;
      continue;
    }
    rep.sup_ratio = std::max(rep.sup_ratio, v);
  }
  if (sigma.kind == SymbolSpec::Kind::band_limited && W != nullptr) {
    rep.bound_factor = prop51_bound_factor(sigma.n, sigma.radii, q);
    rep.symbol_norm = weighted_symbol_norm(sigma, *W);
    rep.bound_value = rep.bound_factor * rep.symbol_norm;
    rep.constant = rep.bound_value > 0.0 ? rep.sup_ratio / rep.bound_value : 0.0;
  }
  return rep;
}

ExponentCheck theorem61_exponent_check(int n, std::span<const double> q, double r, std::span<const double> s) {
  constexpr double tol = 1e-12;
  const int N = static_cast<int>(q.size());
  auto fail = [](std::string w) { return ExponentCheck{false, std::move(w)}; };
  if (N < 1) return fail("N >= 1");
  if (static_cast<int>(s.size()) != N + 1) return fail("s must have N + 1 entries");
  auto inv = [](double v) { return std::isinf(v) ? 0.0 : 1.0 / v; };
  for (int j = 0; j < N; ++j)
    if (!(q[j] >= 2.0)) return fail("q_" + std::to_string(j + 1) + " < 2");
  if (!(r >= 2.0 / N - tol)) return fail("r < 2/N");
  const double half = 0.5 * n;
  if (std::abs(s[0] - half) > tol) return fail("s_0 != n/2");
  for (int j = 1; j <= N; ++j) {
    const std::string id = std::to_string(j);
    if (s[j] < half - n * inv(q[j - 1]) - tol) return fail("s_" + id + " < n/2 - n/q_" + id);
    if (s[j] > half + tol) return fail("s_" + id + " > n/2");
  }
  double lhs = 0.0, rhs = n * inv(r), qsum = 0.0;
  for (int j = 1; j <= N; ++j) {
    lhs += s[j];
    rhs += half - n * inv(q[j - 1]);
    qsum += inv(q[j - 1]);
  }
  if (std::abs(lhs - rhs) > tol) return fail("sum_j s_j != sum_j (n/2 - n/q_j) + n/r");
  if (qsum < inv(r) - tol) return fail("sum_j 1/q_j < 1/r");
  return {};
}

}  // namespace mpdo
