// Copyright 2026 The mpdo-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace mpdo {

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // root mean square of the fit residuals
};

// Ordinary least squares on (log2 x, log2 y).
SlopeFit fit_log2_slope(std::span<const double> x, std::span<const double> y);

// Derives an independent stream seed from a master seed and a stream index.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

using Rng = std::mt19937_64;

// Standard complex Gaussian: real and imaginary parts N(0, 1/2).
std::complex<double> complex_normal(Rng& rng);

// Uniform sample from the closed unit ball of R^dim (dim <= 2).
std::vector<double> unit_ball_sample(Rng& rng, int dim);

}  // namespace mpdo
