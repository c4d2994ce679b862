// Copyright 2026 The mpdo-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <vector>

namespace mpdo::detail {

// Unnormalized in-place multidimensional DFT over a row-major array.
// sign = -1 computes sum_j x_j e^{-2 pi i jk/M}, sign = +1 the conjugate sum.
void fft(std::complex<double>* data, const std::vector<int>& dims, int sign);

inline void fft(std::vector<std::complex<double>>& data,
                const std::vector<int>& dims, int sign) {
  fft(data.data(), dims, sign);
}

}  // namespace mpdo::detail
