// Copyright 2026 The mpdo-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpdo/norms.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "cubes.hpp"
#include "mpdo/error.hpp"
#include "mpdo/parallel.hpp"

namespace mpdo {

namespace detail {

namespace {
int floor_div(int a, int b) {
  int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}
int wrap(int a, int m) { return ((a % m) + m) % m; }
}  // namespace

AxisCubes axis_cubes(int res, double period) {
  const double r = std::round(period);
  if (std::abs(period - r) > 1e-12 || r < 1.0 || res % static_cast<int>(r) != 0)
    throw Error(Errc::alignment, "period must be a positive integer dividing the resolution");
  AxisCubes ax;
  ax.res = res;
  ax.units = static_cast<int>(r);
  ax.per_unit = res / ax.units;
  ax.spacing = period / res;
  ax.cube.resize(res);
  ax.local.resize(res);
  const int P = ax.per_unit;
  for (int j = 0; j < res; ++j) {
    // x_j + 1/2 = (2j + P - L P) / (2P); the cube index is its floor.
    const int num = 2 * j + P - ax.units * P;
    const int nu = floor_div(num, 2 * P);
    ax.cube[j] = wrap(nu, ax.units);
    // Offset from the cube's left edge in units of the spacing, times 2.
    const int twice = num - 2 * P * nu;
    ax.local[j] = twice / 2;
  }
  return ax;
}

std::vector<double> cube_reduce(const std::vector<std::complex<double>>& values,
                                const std::vector<AxisCubes>& axes, double p) {
  std::size_t ncubes = 1;
  for (const auto& a : axes) ncubes *= static_cast<std::size_t>(a.units);
  std::vector<double> acc(ncubes, 0.0);
  const std::size_t naxes = axes.size();
  std::vector<int> idx(naxes, 0);
  std::vector<std::size_t> cstride(naxes, 1);
  for (int a = static_cast<int>(naxes) - 2; a >= 0; --a) cstride[a] = cstride[a + 1] * axes[a + 1].units;
  const bool inf = std::isinf(p);
  const bool square = (p == 2.0);
  for (std::size_t flat = 0; flat < values.size(); ++flat) {
    std::size_t c = 0;
    for (std::size_t a = 0; a < naxes; ++a) c += static_cast<std::size_t>(axes[a].cube[idx[a]]) * cstride[a];
    const double m = std::abs(values[flat]);
    if (inf) {
      acc[c] = std::max(acc[c], m);
    } else if (square) {
      acc[c] += std::norm(values[flat]);
    } else {
      acc[c] += std::pow(m, p);
    }
    for (int a = static_cast<int>(naxes) - 1; a >= 0; --a) {
      if (++idx[a] < axes[a].res) break;
      idx[a] = 0;
    }
  }
  return acc;
}

std::vector<AxisCubes> field_axes(const Grid& g) {
  return std::vector<AxisCubes>(g.dim(), axis_cubes(g.res(), g.period()));
}

}  // namespace detail

double lp_sequence_norm(std::span<const double> v, double p) {
  if (!(p > 0.0)) throw Error(Errc::parameter, "sequence norm requires p > 0");
  if (std::isinf(p)) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  }
  std::vector<double> t(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) t[i] = std::pow(std::abs(v[i]), p);
  return std::pow(pairwise_sum<double>(t), 1.0 / p);
}

double amalgam_norm(const Field& f, const AmalgamParams& prm) {
  if (!(prm.p > 0.0) || !(prm.q > 0.0)) throw Error(Errc::parameter, "amalgam exponents must be positive");
  const auto axes = detail::field_axes(f.grid);
  const auto acc = detail::cube_reduce(f.values, axes, prm.p);
  std::vector<double> local(acc.size());
  if (std::isinf(prm.p)) {
    local = acc;
  } else {
    const double vol = std::pow(f.grid.spacing(), f.grid.dim());
    for (std::size_t i = 0; i < acc.size(); ++i) local[i] = std::pow(vol * acc[i], 1.0 / prm.p);
  }
  return lp_sequence_norm(local, prm.q);
}

double l2_ul_norm(const Field& f) { return amalgam_norm(f, {2.0, kInf}); }

SampledSymbol::SampledSymbol(const Grid& gx, const Grid& gxi, int n_inputs)
    : x_grid(gx), xi_grid(gxi), N(n_inputs) {
  if (gx.dim() != gxi.dim()) throw Error(Errc::shape, "symbol grids must share the dimension");
  if (n_inputs < 1 || n_inputs > 3) throw Error(Errc::parameter, "symbol arity must be in 1..3");
  std::size_t total = gx.size();
  for (int j = 0; j < N; ++j) total *= gxi.size();
  if (total > (std::size_t{1} << 27)) throw Error(Errc::cost_cap, "sampled symbol exceeds the dense storage cap");
  values.assign(total, cplx{});
}

SampledSymbol SampledSymbol::sample(const Grid& gx, const Grid& gxi, int n_inputs, const Fn& fn) {
  SampledSymbol s(gx, gxi, n_inputs);
  const std::size_t bx = gx.size();
  const std::size_t bxi = gxi.size();
  const std::size_t inner = s.values.size() / bx;
  parallel_for(bx, [&](std::size_t ix) {
    const Vec x = gx.physical_coord(ix);
    std::vector<Vec> xi(n_inputs);
    for (std::size_t r = 0; r < inner; ++r) {
      std::size_t rem = r;
      for (int j = n_inputs - 1; j >= 0; --j) {
        xi[j] = gxi.physical_coord(rem % bxi);
        rem /= bxi;
      }
      s.values[ix * inner + r] = fn(x, xi);
    }
  });
  return s;
}

std::vector<int> SampledSymbol::dims() const {
  std::vector<int> d(x_grid.dim(), x_grid.res());
  for (int j = 0; j < N; ++j)
    for (int a = 0; a < xi_grid.dim(); ++a) d.push_back(xi_grid.res());
  return d;
}

std::vector<double> SampledSymbol::periods() const {
  std::vector<double> d(x_grid.dim(), x_grid.period());
  for (int j = 0; j < N; ++j)
    for (int a = 0; a < xi_grid.dim(); ++a) d.push_back(xi_grid.period());
  return d;
}

std::size_t SampledSymbol::block_size(int block) const {
  return block == 0 ? x_grid.size() : xi_grid.size();
}

double symbol_l2ul_norm(const SampledSymbol& s) {
  const auto dims = s.dims();
  const auto periods = s.periods();
  std::vector<detail::AxisCubes> axes;
  double vol = 1.0;
  for (std::size_t a = 0; a < dims.size(); ++a) {
    axes.push_back(detail::axis_cubes(dims[a], periods[a]));
    vol *= axes.back().spacing;
  }
  const auto acc = detail::cube_reduce(s.values, axes, 2.0);
  double best = 0.0;
  for (double v : acc) best = std::max(best, v);
  return std::sqrt(vol * best);
}

double lorentz_weak_norm(std::span<const double> a, double q) {
  if (!(q > 0.0)) throw Error(Errc::parameter, "lorentz exponent must be positive");
  std::vector<double> m;
  m.reserve(a.size());
  for (double v : a)
    if (v != 0.0) m.push_back(std::abs(v));
  std::sort(m.begin(), m.end(), std::greater<double>());
  double best = 0.0;
  // For t just below a distinct value v the count is #{|a_k| >= v}.
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i + 1 < m.size() && m[i + 1] == m[i]) continue;
    best = std::max(best, m[i] * std::pow(static_cast<double>(i + 1), 1.0 / q));
  }
  return best;
}

double lorentz_weak_norm(const LatticeSeq& a, double q) { return lorentz_weak_norm(a.values(), q); }

Field s_kernel(const Grid& g, const KernelParams& prm) {
  if (!(prm.L_exp > g.dim())) throw Error(Errc::parameter, "kernel exponent must exceed the dimension");
  const double L = g.period();
  return Field::sample(g, [&](const Vec& x) {
    double acc = 0.0;
    const int r1 = g.dim() == 2 ? 1 : 0;
    for (int m0 = -1; m0 <= 1; ++m0)
      for (int m1 = -r1; m1 <= r1; ++m1) {
        const double y0 = x[0] + m0 * L;
        const double y1 = x[1] + m1 * L;
        acc += std::pow(1.0 + y0 * y0 + y1 * y1, -0.5 * prm.L_exp);
      }
    return cplx(acc, 0.0);
  });
}

Field s_kernel_apply(const Field& f, const KernelParams& prm) {
  if (f.side != Side::physical) throw Error(Errc::type, "s_kernel_apply expects a physical field");
  Field a(f.grid, Side::physical);
  for (std::size_t i = 0; i < a.values.size(); ++i) a.values[i] = std::abs(f.values[i]);
  Field out = periodic_convolve(s_kernel(f.grid, prm), a);
  for (auto& v : out.values) v = cplx(std::max(v.real(), 0.0), 0.0);
  return out;
}

double sqrt_s_square_norm(const Field& f, double p, const KernelParams& prm) {
  if (!(std::min(1.0, p / 2.0) * prm.L_exp > f.grid.dim()))
    throw Error(Errc::parameter, "sqrt_s_square_norm requires min(1, p/2) L > n");
  Field sq(f.grid, Side::physical);
  for (std::size_t i = 0; i < sq.values.size(); ++i) sq.values[i] = std::norm(f.values[i]);
  Field s = s_kernel_apply(sq, prm);
  for (auto& v : s.values) v = std::sqrt(v.real());
  return lebesgue_norm(s, p);
}

RatioRange equivalent_amalgam_check(std::span<const Field> fs, const Field& g, const AmalgamParams& prm,
                                    double decay) {
  const Grid& grid = g.grid;
  const int n = grid.dim();
  if (!(decay > n / std::min(prm.p, prm.q)))
    throw Error(Errc::parameter, "envelope decay must exceed n / min(p, q)");
  const auto axes = detail::field_axes(grid);
  const int P = axes[0].per_unit;
  const int U = axes[0].units;
  // Sandwich hypothesis: bounded below on Q, bounded by C <x>^{-L}.
  double lower = kInf, upper = 0.0;
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    auto ij = grid.unflatten(i);
    const bool in_q = axes[0].cube[ij[0]] == 0 && (n == 1 || axes[0].cube[ij[1]] == 0);
    const Vec x = grid.physical_coord(i);
    const double m = std::abs(g.values[i]);
    if (in_q) lower = std::min(lower, m);
    upper = std::max(upper, m * std::pow(1.0 + x[0] * x[0] + x[1] * x[1], 0.5 * decay));
  }
  if (!(lower > 0.0) || !std::isfinite(upper))
    throw Error(Errc::parameter, "envelope violates the sandwich hypothesis");

  const int M = grid.res();
  const std::size_t shifts = n == 1 ? U : static_cast<std::size_t>(U) * U;
  RatioRange out{kInf, 0.0};
  bool any = false;
  for (const Field& f : fs) {
    if (!(f.grid == grid)) throw Error(Errc::shape, "test field grid mismatch");
    const double base = amalgam_norm(f, prm);
    if (base == 0.0) continue;
    std::vector<double> per_shift(shifts);
    for (std::size_t s = 0; s < shifts; ++s) {
      const int s0 = static_cast<int>(n == 1 ? s : s / U) * P;
      const int s1 = n == 1 ? 0 : static_cast<int>(s % U) * P;
      Field prod(grid, Side::physical);
      for (std::size_t i = 0; i < prod.values.size(); ++i) {
        auto ij = grid.unflatten(i);
        const int a0 = ((ij[0] - s0) % M + M) % M;
        const int a1 = n == 1 ? 0 : ((ij[1] - s1) % M + M) % M;
        prod.values[i] = g.values[grid.flatten(a0, a1)] * f.values[i];
      }
      per_shift[s] = lebesgue_norm(prod, prm.p);
    }
    const double ratio = lp_sequence_norm(per_shift, prm.q) / base;
    out.min = std::min(out.min, ratio);
    out.max = std::max(out.max, ratio);
    any = true;
  }
  if (!any) return {0.0, 0.0};
  return out;
}

double bmo_discrete_norm(const Field& f) {
  const Grid& g = f.grid;
  const int n = g.dim();
  const auto ax = detail::axis_cubes(g.res(), g.period());
  const int P = ax.per_unit;
  const int U = ax.units;
  double best = 0.0;

  // Cubes of side 2^{-d} <= 1 nested in the unit cubes.
  for (int sub = 1; sub <= P && P % sub == 0; sub *= 2) {
    const int pts = P / sub;  // samples per axis in one small cube
    std::map<std::size_t, std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
      auto ij = g.unflatten(i);
      std::size_t key = 0;
      for (int a = 0; a < n; ++a) {
        const int c = ax.cube[ij[a]];
        const int s = ax.local[ij[a]] / pts;
        key = key * static_cast<std::size_t>(U * sub) + static_cast<std::size_t>(c * sub + s);
      }
      members[key].push_back(i);
    }
    for (const auto& [key, idx] : members) {
      cplx mean = 0.0;
      for (std::size_t i : idx) mean += f.values[i];
      mean /= static_cast<double>(idx.size());
      double osc = 0.0;
      for (std::size_t i : idx) osc += std::abs(f.values[i] - mean);
      best = std::max(best, osc / static_cast<double>(idx.size()));
    }
  }

  // Aligned cubes of side 2^e >= 1 built from whole unit cubes.
  for (int side = 1; side <= U; side *= 2) {
    const int groups = U / side;
    std::map<std::size_t, std::pair<double, std::size_t>> acc;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
      auto ij = g.unflatten(i);
      std::size_t key = 0;
      bool inside = true;
      for (int a = 0; a < n; ++a) {
        const int gi = ax.cube[ij[a]] / side;
        if (gi >= groups) inside = false;
        key = key * static_cast<std::size_t>(groups) + static_cast<std::size_t>(gi);
      }
      if (!inside) continue;
      auto& e = acc[key];
      e.first += std::abs(f.values[i]);
      e.second += 1;
    }
    for (const auto& [key, e] : acc) best = std::max(best, e.first / static_cast<double>(e.second));
  }
  return best;
}

double mixed_sequence_norm(std::span<const double> a, std::size_t n_outer, std::size_t n_inner, double p_inner,
                           double q_outer) {
  if (a.size() != n_outer * n_inner) throw Error(Errc::shape, "mixed norm array size mismatch");
  std::vector<double> inner(n_outer);
  for (std::size_t o = 0; o < n_outer; ++o) inner[o] = lp_sequence_norm(a.subspan(o * n_inner, n_inner), p_inner);
  return lp_sequence_norm(inner, q_outer);
}

}  // namespace mpdo
