// Copyright 2026 The mpdo-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpdo/grid.hpp"

#include <algorithm>
#include <cmath>

#include "fft.hpp"
#include "mpdo/error.hpp"
#include "mpdo/parallel.hpp"

namespace mpdo {

namespace {

bool is_pow2(int m) { return m > 0 && (m & (m - 1)) == 0; }

std::vector<int> dims_of(const Grid& g) { return std::vector<int>(g.dim(), g.res()); }

// (-1)^(i0 + i1) for the flattened index.
double parity(const Grid& g, std::size_t idx) {
  auto ij = g.unflatten(idx);
  return ((ij[0] + ij[1]) & 1) ? -1.0 : 1.0;
}

}  // namespace

Grid::Grid(int dim, double period, int res) : dim_(dim), period_(period), res_(res) {
  if (dim < 1 || dim > 2) throw Error(Errc::parameter, "grid dim must be 1 or 2");
  if (!(period > 0.0) || !std::isfinite(period))
    throw Error(Errc::parameter, "grid period must be positive");
  if (!is_pow2(res) || res < 2) throw Error(Errc::parameter, "grid res must be a power of two >= 2");
}

std::size_t Grid::size() const {
  std::size_t s = 1;
  for (int d = 0; d < dim_; ++d) s *= static_cast<std::size_t>(res_);
  return s;
}

double Grid::max_frequency() const {
  return freq_spacing() * (res_ / 2) * std::sqrt(static_cast<double>(dim_));
}

std::array<int, 2> Grid::unflatten(std::size_t idx) const {
  if (dim_ == 1) return {static_cast<int>(idx), 0};
  return {static_cast<int>(idx / res_), static_cast<int>(idx % res_)};
}

std::size_t Grid::flatten(int i0, int i1) const {
  if (dim_ == 1) return static_cast<std::size_t>(i0);
  return static_cast<std::size_t>(i0) * res_ + static_cast<std::size_t>(i1);
}

Vec Grid::physical_coord(std::size_t idx) const {
  auto ij = unflatten(idx);
  return {point(ij[0]), dim_ == 2 ? point(ij[1]) : 0.0};
}

Vec Grid::frequency_coord(std::size_t idx) const {
  auto ij = unflatten(idx);
  return {frequency(ij[0]), dim_ == 2 ? frequency(ij[1]) : 0.0};
}

bool Grid::cube_aligned() const {
  const double r = std::round(period_);
  if (std::abs(period_ - r) > 1e-12 || r < 1.0) return false;
  return res_ % static_cast<int>(r) == 0;
}

int Grid::points_per_unit() const {
  if (!cube_aligned()) throw Error(Errc::alignment, "grid period must be an integer dividing res");
  return res_ / static_cast<int>(std::round(period_));
}

Field Field::sample(const Grid& g, const std::function<cplx(const Vec&)>& fn) {
  Field f(g, Side::physical);
  for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] = fn(g.physical_coord(i));
  return f;
}

Field Field::sample_frequency(const Grid& g, const std::function<cplx(const Vec&)>& fn) {
  Field f(g, Side::frequency);
  for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] = fn(g.frequency_coord(i));
  return f;
}

// With k = i - M/2, e^{-i x_j xi_k} = (-1)^{j} (-1)^{k} e^{-2 pi i jk/M} per axis,
// so both transforms are a plain DFT between two parity twists.
Field forward_transform(const Field& f) {
  if (f.side != Side::physical) throw Error(Errc::type, "forward_transform expects a physical field");
  const Grid& g = f.grid;
  Field out(g, Side::frequency);
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = parity(g, i) * f.values[i];
  detail::fft(out.values, dims_of(g), -1);
  const double scale = std::pow(g.spacing(), g.dim());
  const double shift = (g.dim() * (g.res() / 2)) % 2 ? -1.0 : 1.0;
  for (std::size_t i = 0; i < out.values.size(); ++i)
    out.values[i] *= scale * shift * parity(g, i);
  return out;
}

Field inverse_transform(const Field& F) {
  if (F.side != Side::frequency) throw Error(Errc::type, "inverse_transform expects a frequency field");
  const Grid& g = F.grid;
  Field out(g, Side::physical);
  const double shift = (g.dim() * (g.res() / 2)) % 2 ? -1.0 : 1.0;
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = shift * parity(g, i) * F.values[i];
  detail::fft(out.values, dims_of(g), +1);
  const double scale = std::pow(1.0 / g.period(), g.dim());
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] *= scale * parity(g, i);
  return out;
}

double lebesgue_norm(const Field& f, double p) {
  if (!(p > 0.0)) throw Error(Errc::parameter, "lebesgue_norm requires p > 0");
  if (std::isinf(p)) {
    double m = 0.0;
    for (const cplx& v : f.values) m = std::max(m, std::abs(v));
    return m;
  }
  std::vector<double> terms(f.values.size());
  for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = std::pow(std::abs(f.values[i]), p);
  const double vol = std::pow(f.grid.spacing(), f.grid.dim());
  return std::pow(vol * pairwise_sum<double>(terms), 1.0 / p);
}

Field apply_multiplier(const Field& f, const std::function<cplx(const Vec&)>& m) {
  Field F = forward_transform(f);
  for (std::size_t i = 0; i < F.values.size(); ++i) F.values[i] *= m(F.grid.frequency_coord(i));
  return inverse_transform(F);
}

Field periodic_convolve(const Field& kernel, const Field& f) {
  if (!(kernel.grid == f.grid)) throw Error(Errc::shape, "periodic_convolve grid mismatch");
  const Grid& g = f.grid;
  const int M = g.res();
  std::vector<cplx> kd(g.size()), fd(f.values);
  // Re-index the centered kernel so that entry d holds k(d h).
  for (std::size_t idx = 0; idx < kd.size(); ++idx) {
    auto ij = g.unflatten(idx);
    const int s0 = (ij[0] + M / 2) % M;
    const int s1 = g.dim() == 2 ? (ij[1] + M / 2) % M : 0;
    kd[idx] = kernel.values[g.flatten(s0, s1)];
  }
  const auto dims = dims_of(g);
  detail::fft(kd, dims, -1);
  detail::fft(fd, dims, -1);
  for (std::size_t i = 0; i < kd.size(); ++i) kd[i] *= fd[i];
  detail::fft(kd, dims, +1);
  Field out(g, Side::physical);
  const double scale = std::pow(g.spacing(), g.dim()) / static_cast<double>(g.size());
  for (std::size_t i = 0; i < kd.size(); ++i) out.values[i] = kd[i] * scale;
  return out;
}

std::vector<double> axis_points(const Grid& g) {
  std::vector<double> pts(g.res());
  for (int j = 0; j < g.res(); ++j) pts[j] = g.point(j);
  return pts;
}

}  // namespace mpdo
