// Copyright 2026 The mpdo-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpdo/decomp.hpp"

#include <algorithm>
#include <cmath>

#include "fft.hpp"
#include "mpdo/error.hpp"
#include "mpdo/parallel.hpp"
#include "mpdo/stats.hpp"
#include "mpdo/weights.hpp"

namespace mpdo {

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

double compact_bump(double t, double r) {
  const double u = t / r;
  return std::abs(u) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - u * u)) : 0.0;
}

double flat_bump(double t, double inner, double outer) {
  return 1.0 - smooth_step((std::abs(t) - inner) / (outer - inner));
}

namespace {

double edge_bump(double t) { return std::abs(t) < 1.0 ? std::exp(-1.0 / (1.0 - t * t)) : 0.0; }

double vec_abs(const Vec& v) { return std::hypot(v[0], v[1]); }

// Wavenumber of index i for an unshifted DFT of length m.
int plain_wavenumber(int i, int m) { return i < m / 2 ? i : i - m; }

}  // namespace

double lp_phi(double y) { return 1.0 - smooth_step(std::abs(y) - 1.0); }

double lp_psi(int k, double y) {
  if (k < 0) throw Error(Errc::range, "shell index must be nonnegative");
  if (k == 0) return lp_phi(y);
  return lp_phi(std::ldexp(y, -k)) - lp_phi(std::ldexp(y, 1 - k));
}

int lp_kmax(const Grid& g) {
  const double m = g.max_frequency();
  return std::max(0, static_cast<int>(std::ceil(std::log2(m) - 1e-12)));
}

Field LPPartition::shell(int k) const {
  if (k < 0 || k > K_max) throw Error(Errc::range, "shell index out of range");
  return Field::sample_frequency(grid, [k](const Vec& xi) { return cplx(lp_psi(k, vec_abs(xi)), 0.0); });
}

LPPartition build_lp_partition(const Grid& g) {
  LPPartition lp;
  lp.grid = g;
  lp.K_max = lp_kmax(g);
  if (lp.K_max < 3) throw Error(Errc::resolution, "grid bandwidth admits fewer than 3 dyadic shells");
  lp.base = Field::sample_frequency(g, [](const Vec& xi) { return cplx(lp_phi(vec_abs(xi)), 0.0); });
  return lp;
}

double UniformPair::chi_at(const Vec& xi) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) acc += masses[i] * std::cos(nodes[i][0] * xi[0] + nodes[i][1] * xi[1]);
  return acc;
}

double UniformPair::part_at(const Vec& xi) const {
  double p = 1.0;
  for (int a = 0; a < grid.dim(); ++a) {
    const double t = xi[a];
    if (std::abs(t) >= 1.0) return 0.0;
    double den = 0.0;
    const int c = static_cast<int>(std::floor(t));
    for (int m = c - 1; m <= c + 2; ++m) den += edge_bump(t - m);
    p *= edge_bump(t) / den;
  }
  return p;
}

double UniformPair::kappa_at(const Vec& xi) const {
  const double p = part_at(xi);
  return p == 0.0 ? 0.0 : p / chi_at(xi);
}

UniformPair build_uniform_pair(const Grid& g, double width) {
  if (g.period() < 8.0) throw Error(Errc::parameter, "uniform pair needs period >= 8");
  if (!(width > 0.0) || width >= 1.0) throw Error(Errc::parameter, "chi width must lie in (0, 1)");
  UniformPair pair;
  pair.grid = g;
  pair.width = width;
  // The dual side of the frequency lattice is the physical grid, so a bump on
  // physical points within B_width gives chi an exactly band-limited transform.
  double total = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec x = g.physical_coord(i);
    const double r = vec_abs(x) / width;
    if (r >= 1.0) continue;
    const double m = edge_bump(r);
    if (m <= 0.0) continue;
    pair.nodes.push_back(x);
    pair.masses.push_back(m);
    total += m;
  }
  if (pair.nodes.empty()) throw Error(Errc::construction, "grid spacing too coarse for the chi bump");
  for (auto& m : pair.masses) m /= total;

  pair.chi = Field::sample_frequency(g, [&](const Vec& xi) { return cplx(pair.chi_at(xi), 0.0); });
  pair.kappa = Field::sample_frequency(g, [&](const Vec& xi) { return cplx(pair.kappa_at(xi), 0.0); });

  // Lower bound of chi on [-1, 1]^n: sampled minimum over a fine lattice and
  // the analytic floor cos(width sqrt(n)).
  double lo = std::cos(width * std::sqrt(static_cast<double>(g.dim())));
  const int steps = 64;
  for (int i = 0; i <= steps; ++i)
    for (int j = 0; j <= (g.dim() == 2 ? steps : 0); ++j) {
      const Vec xi = {-1.0 + 2.0 * i / steps, g.dim() == 2 ? -1.0 + 2.0 * j / steps : 0.0};
      lo = std::min(lo, pair.chi_at(xi));
    }
  pair.c_lower = lo;
  if (!(pair.c_lower > 0.05)) throw Error(Errc::construction, "chi lower bound on the unit box below 0.05");
  return pair;
}

Field box_apply(const UniformPair& pair, std::array<int, 2> nu, const Field& f) {
  if (!(f.grid == pair.grid)) throw Error(Errc::shape, "box_apply grid mismatch");
  const double top = f.grid.freq_spacing() * (f.grid.res() / 2);
  for (int a = 0; a < f.grid.dim(); ++a)
    if (std::abs(nu[a]) > top) throw Error(Errc::range, "box center outside the frequency range");
  if (f.grid.dim() == 1 && nu[1] != 0) throw Error(Errc::range, "box center has a stray second coordinate");
  return apply_multiplier(f, [&](const Vec& xi) {
    return cplx(pair.kappa_at({xi[0] - nu[0], xi[1] - nu[1]}), 0.0);
  });
}

std::vector<int> block_kmax(const SampledSymbol& sigma) {
  std::vector<int> k(sigma.N + 1, lp_kmax(sigma.xi_grid));
  k[0] = lp_kmax(sigma.x_grid);
  return k;
}

namespace {

// Dual frequency of every axis index of the product grid.
std::vector<std::vector<double>> product_frequencies(const SampledSymbol& s) {
  const auto dims = s.dims();
  const auto periods = s.periods();
  std::vector<std::vector<double>> f(dims.size());
  for (std::size_t a = 0; a < dims.size(); ++a) {
    f[a].resize(dims[a]);
    for (int i = 0; i < dims[a]; ++i) f[a][i] = 2.0 * kPi / periods[a] * plain_wavenumber(i, dims[a]);
  }
  return f;
}

// Multiplies the spectrum by prod_b psi_{k_b}(|eta_b|).
void apply_shells(std::vector<cplx>& spec, const SampledSymbol& s, std::span<const int> k,
                  const std::vector<std::vector<double>>& freqs) {
  const int n = s.x_grid.dim();
  const int blocks = s.N + 1;
  const auto dims = s.dims();
  // Shell values per block index.
  std::vector<std::vector<double>> table(blocks);
  for (int b = 0; b < blocks; ++b) {
    const int m = dims[b * n];
    const std::size_t bs = n == 1 ? m : static_cast<std::size_t>(m) * m;
    table[b].resize(bs);
    for (std::size_t i = 0; i < bs; ++i) {
      const double e0 = freqs[b * n][n == 1 ? i : i / m];
      const double e1 = n == 1 ? 0.0 : freqs[b * n + 1][i % m];
      table[b][i] = lp_psi(k[b], std::hypot(e0, e1));
    }
  }
  std::vector<std::size_t> bsize(blocks);
  for (int b = 0; b < blocks; ++b) bsize[b] = table[b].size();
  const std::size_t total = spec.size();
  const std::size_t inner = total / bsize[0];
  parallel_for(bsize[0], [&](std::size_t i0) {
    const double w0 = table[0][i0];
    for (std::size_t r = 0; r < inner; ++r) {
      double w = w0;
      std::size_t rem = r;
      for (int b = blocks - 1; b >= 1 && w != 0.0; --b) {
        w *= table[b][rem % bsize[b]];
        rem /= bsize[b];
      }
      spec[i0 * inner + r] *= w;
    }
  });
}

}  // namespace

SampledSymbol delta_block(const SampledSymbol& sigma, std::span<const int> k) {
  if (static_cast<int>(k.size()) != sigma.N + 1) throw Error(Errc::shape, "shell tuple needs N + 1 entries");
  const auto kmax = block_kmax(sigma);
  for (std::size_t b = 0; b < k.size(); ++b)
    if (k[b] < 0 || k[b] > kmax[b]) throw Error(Errc::range, "shell index out of range");
  const auto dims = sigma.dims();
  const auto freqs = product_frequencies(sigma);
  SampledSymbol out = sigma;
  detail::fft(out.values, dims, -1);
  apply_shells(out.values, sigma, k, freqs);
  detail::fft(out.values, dims, +1);
  const double scale = 1.0 / static_cast<double>(out.values.size());
  for (auto& v : out.values) v *= scale;
  return out;
}

double besov_symbol_norm(const SampledSymbol& sigma, const WeightSpec& W, std::span<const double> s, double t) {
  const int blocks = sigma.N + 1;
  if (static_cast<int>(s.size()) != blocks) throw Error(Errc::shape, "smoothness vector needs N + 1 entries");
  for (double v : s)
    if (!(v >= 0.0)) throw Error(Errc::parameter, "smoothness exponents must be nonnegative");
  if (!(t > 0.0)) throw Error(Errc::parameter, "besov exponent t must be positive");
  const auto kmax = block_kmax(sigma);
  for (int v : kmax)
    if (v < 1) throw Error(Errc::resolution, "grid admits no dyadic shells");

  // Reciprocal weight at every xi sample of the product grid.
  const int n = sigma.x_grid.dim();
  const std::size_t bxi = sigma.xi_grid.size();
  std::size_t inner = 1;
  for (int j = 0; j < sigma.N; ++j) inner *= bxi;
  std::vector<double> winv(inner);
  {
    std::vector<Vec> xi(sigma.N);
    for (std::size_t r = 0; r < inner; ++r) {
      std::size_t rem = r;
      for (int j = sigma.N - 1; j >= 0; --j) {
        xi[j] = sigma.xi_grid.physical_coord(rem % bxi);
        rem /= bxi;
      }
      const double w = W(xi, n);
      if (!(w > 0.0)) throw Error(Errc::parameter, "weight must be positive on the symbol grid");
      winv[r] = 1.0 / w;
    }
  }

  const auto dims = sigma.dims();
  const auto freqs = product_frequencies(sigma);
  std::vector<cplx> spec = sigma.values;
  detail::fft(spec, dims, -1);
  const double scale = 1.0 / static_cast<double>(spec.size());

  std::size_t count = 1;
  for (int v : kmax) count *= static_cast<std::size_t>(v + 1);
  std::vector<double> terms(count);
  std::vector<int> k(blocks);
  for (std::size_t c = 0; c < count; ++c) {
    std::size_t rem = c;
    double expo = 0.0;
    for (int b = blocks - 1; b >= 0; --b) {
      k[b] = static_cast<int>(rem % (kmax[b] + 1));
      rem /= (kmax[b] + 1);
      expo += s[b] * k[b];
    }
    SampledSymbol piece = sigma;
    piece.values = spec;
    apply_shells(piece.values, sigma, k, freqs);
    detail::fft(piece.values, dims, +1);
    for (std::size_t i = 0; i < piece.values.size(); ++i) piece.values[i] *= scale * winv[i % inner];
    terms[c] = std::exp2(expo) * symbol_l2ul_norm(piece);
  }
  return lp_sequence_norm(terms, t);
}

PartitionReport partition_diagnostics(const Grid& g, int samples, std::uint64_t seed) {
  const LPPartition lp = build_lp_partition(g);
  const UniformPair pair = build_uniform_pair(g);
  PartitionReport rep;
  rep.K_max = lp.K_max;
  rep.c_lower = pair.c_lower;

  std::vector<Vec> pts;
  for (std::size_t i = 0; i < g.size(); ++i) pts.push_back(g.frequency_coord(i));
  Rng rng(seed);
  std::uniform_real_distribution<double> u(-g.max_frequency(), g.max_frequency());
  for (int s = 0; s < samples; ++s) pts.push_back({u(rng), g.dim() == 2 ? u(rng) : 0.0});

  const int n = g.dim();
  for (const Vec& xi : pts) {
    const double y = vec_abs(xi);
    double sum = 0.0;
    for (int k = 0; k <= lp.K_max; ++k) {
      const double v = lp_psi(k, y);
      sum += v;
      const bool inside = k == 0 ? y <= 2.0 : (y >= std::ldexp(1.0, k - 1) && y <= std::ldexp(1.0, k + 1));
      if (!inside) rep.lp_support_leak = std::max(rep.lp_support_leak, std::abs(v));
    }
    rep.lp_residual = std::max(rep.lp_residual, std::abs(sum - 1.0));

    double part = 0.0;
    const int c0 = static_cast<int>(std::floor(xi[0]));
    const int c1 = static_cast<int>(std::floor(xi[1]));
    for (int a = c0 - 1; a <= c0 + 2; ++a)
      for (int b = (n == 2 ? c1 - 1 : 0); b <= (n == 2 ? c1 + 2 : 0); ++b) {
        const Vec t = {xi[0] - a, xi[1] - b};
        part += pair.kappa_at(t) * pair.chi_at(t);
      }
    rep.pair_residual = std::max(rep.pair_residual, std::abs(part - 1.0));
    if (std::abs(xi[0]) > 1.0 || std::abs(xi[1]) > 1.0)
      rep.kappa_leak = std::max(rep.kappa_leak, std::abs(pair.kappa_at(xi)));
  }
  double out = 0.0, total = 0.0;
  for (std::size_t i = 0; i < pair.nodes.size(); ++i) {
    total += std::abs(pair.masses[i]);
    if (vec_abs(pair.nodes[i]) >= 1.0) out += std::abs(pair.masses[i]);
  }
  rep.chi_leak = total > 0.0 ? out / total : 0.0;
  return rep;
}

}  // namespace mpdo
