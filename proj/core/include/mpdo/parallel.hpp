// Copyright 2026 The mpdo-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace mpdo {

// Process-wide worker count used by parallel_for. Defaults to 1.
void set_thread_count(int count);
int thread_count();

// Runs fn(i) for i in [0, n). Work is split into contiguous chunks; every
// index is handled by exactly one worker, so per-index results do not depend
// on the number of threads. Calls made from inside a worker run serially.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

// Fixed-shape pairwise summation. The reduction tree depends only on the
// length of the input.
template <class T>
T pairwise_sum(std::span<const T> v) {
  constexpr std::size_t kLeaf = 32;
  if (v.size() <= kLeaf) {
    T acc{};
    for (const T& x : v) acc += x;
    return acc;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

// Streaming form of pairwise summation: a binary counter of partial sums
// over leaves of fixed size. The result depends only on the sequence of
// added values, never on how the caller is scheduled.
template <class T>
class PairwiseAccumulator {
 public:
  void add(const T& x) {
    leaf_ += x;
    if (++leaf_count_ == kLeaf) {
      push(leaf_);
      leaf_ = T{};
      leaf_count_ = 0;
    }
  }

  T total() const {
    T acc = leaf_;
    for (std::size_t i = 0; i < levels_.size(); ++i)
      if (occupied_[i]) acc = levels_[i] + acc;
    return acc;
  }

 private:
  static constexpr int kLeaf = 32;

  void push(T v) {
    for (std::size_t i = 0;; ++i) {
      if (i == levels_.size()) {
        levels_.push_back(v);
        occupied_.push_back(true);
        return;
      }
      if (!occupied_[i]) {
        levels_[i] = v;
        occupied_[i] = true;
        return;
      }
      v = levels_[i] + v;
      occupied_[i] = false;
    }
  }

  T leaf_{};
  int leaf_count_ = 0;
  std::vector<T> levels_;
  std::vector<bool> occupied_;
};

}  // namespace mpdo
