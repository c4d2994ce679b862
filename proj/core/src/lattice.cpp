// Copyright 2026 The mpdo-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpdo/lattice.hpp"

#include <algorithm>
#include <cmath>

#include "mpdo/error.hpp"
#include "mpdo/parallel.hpp"

namespace mpdo {

LatticeSeq::LatticeSeq(int dim, int radius, int blocks) : dim_(dim), radius_(radius), blocks_(blocks) {
  if (dim < 1 || dim > 2) throw Error(Errc::parameter, "lattice dim must be 1 or 2");
  if (radius < 0) throw Error(Errc::parameter, "lattice radius must be nonnegative");
  if (blocks < 1 || blocks > 4) throw Error(Errc::parameter, "lattice blocks must be in 1..4");
  std::size_t total = 1;
  for (int i = 0; i < dim * blocks; ++i) total *= static_cast<std::size_t>(2 * radius + 1);
  if (total > (std::size_t{1} << 28)) throw Error(Errc::cost_cap, "lattice sequence too large");
  values_.assign(total, 0.0);
}

bool LatticeSeq::contains(std::span<const int> c) const {
  if (static_cast<int>(c.size()) != coords()) throw Error(Errc::shape, "lattice coordinate count mismatch");
  for (int v : c)
    if (v < -radius_ || v > radius_) return false;
  return true;
}

std::size_t LatticeSeq::index_of(std::span<const int> c) const {
  std::size_t idx = 0;
  for (int v : c) idx = idx * side() + static_cast<std::size_t>(v + radius_);
  return idx;
}

void LatticeSeq::coords_of(std::size_t idx, std::span<int> out) const {
  for (int i = coords() - 1; i >= 0; --i) {
    out[i] = static_cast<int>(idx % side()) - radius_;
    idx /= side();
  }
}

double LatticeSeq::get(std::span<const int> c) const {
  return contains(c) ? values_[index_of(c)] : 0.0;
}

void LatticeSeq::set(std::span<const int> c, double v) {
  if (!contains(c)) throw Error(Errc::range, "lattice coordinate outside truncation");
  if (v < 0.0 || std::isnan(v)) throw Error(Errc::parameter, "lattice values must be nonnegative");
  values_[index_of(c)] = v;
}

double LatticeSeq::l2_norm() const {
  std::vector<double> sq(values_.size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = values_[i] * values_[i];
  return std::sqrt(pairwise_sum<double>(sq));
}

double LatticeSeq::max_value() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, v);
  return m;
}

LatticeSeq truncate(const LatticeSeq& v, int radius) {
  if (radius > v.radius()) throw Error(Errc::range, "truncation radius exceeds sequence radius");
  LatticeSeq out(v.dim(), radius, v.blocks());
  std::vector<int> c(out.coords());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.coords_of(i, c);
    out.values()[i] = v.get(c);
  }
  return out;
}

}  // namespace mpdo
