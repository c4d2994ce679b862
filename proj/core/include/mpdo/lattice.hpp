// Copyright 2026 The mpdo-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mpdo {

// Nonnegative values on the truncated lattice ([-R, R]^n)^blocks. Coordinates
// are ordered block by block; within a block by axis. The flat layout is
// row-major with the first coordinate slowest.
class LatticeSeq {
 public:
  LatticeSeq() = default;
  LatticeSeq(int dim, int radius, int blocks);

  int dim() const { return dim_; }
  int radius() const { return radius_; }
  int blocks() const { return blocks_; }
  int coords() const { return dim_ * blocks_; }
  int side() const { return 2 * radius_ + 1; }
  std::size_t size() const { return values_.size(); }

  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  bool contains(std::span<const int> c) const;
  std::size_t index_of(std::span<const int> c) const;
  void coords_of(std::size_t idx, std::span<int> out) const;

  // Value at c, or 0 outside the truncation.
  double get(std::span<const int> c) const;
  void set(std::span<const int> c, double v);

  double l2_norm() const;
  double max_value() const;

 private:
  int dim_ = 1;
  int radius_ = 0;
  int blocks_ = 1;
  std::vector<double> values_;
};

// Restriction of V to a smaller radius.
LatticeSeq truncate(const LatticeSeq& v, int radius);

}  // namespace mpdo
