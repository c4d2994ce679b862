// Copyright 2026 The mpdo-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "mpdo/error.hpp"
#include "mpdo/field_io.hpp"
#include "mpdo/grid.hpp"
#include "mpdo/parallel.hpp"
#include "mpdo/stats.hpp"
#include "support.hpp"

namespace mpdo {
namespace {

using test::direct_forward;
using test::direct_inverse;
using test::max_abs;
using test::max_abs_diff;

TEST(Grid, SamplePointsAndFrequencies) {
  Grid g(1, 8.0, 64);
  EXPECT_DOUBLE_EQ(g.point(0), -4.0);
  EXPECT_DOUBLE_EQ(g.point(32), 0.0);
  EXPECT_DOUBLE_EQ(g.frequency(0), -2.0 * kPi / 8.0 * 32);
  EXPECT_DOUBLE_EQ(g.frequency(33), 2.0 * kPi / 8.0);
  EXPECT_TRUE(g.cube_aligned());
  EXPECT_FALSE(Grid(1, 2.0 * kPi, 64).cube_aligned());
}

TEST(Grid, ConstantTransformsToPointMass) {
  Grid g(1, 2.0 * kPi, 64);
  const Field F = forward_transform(Field::sample(g, [](const Vec&) { return cplx(1.0, 0.0); }));
  for (int i = 0; i < 64; ++i) {
    const cplx expect = g.wavenumber(i) == 0 ? cplx(2.0 * kPi, 0.0) : cplx(0.0, 0.0);
    EXPECT_NEAR(std::abs(F.values[i] - expect), 0.0, 1e-12);
  }
}

TEST(Grid, ModulationShiftsMass) {
  Grid g(1, 2.0 * kPi, 64);
  const Field F = forward_transform(Field::sample(g, [](const Vec& x) { return std::polar(1.0, x[0]); }));
  for (int i = 0; i < 64; ++i) {
    const cplx expect = g.wavenumber(i) == 1 ? cplx(2.0 * kPi, 0.0) : cplx(0.0, 0.0);
    EXPECT_NEAR(std::abs(F.values[i] - expect), 0.0, 1e-12);
  }
}

TEST(Grid, ForwardMatchesDirectSum) {
  for (int n : {1, 2}) {
    Grid g(n, 6.0, n == 1 ? 64 : 16);
    const Field f = Field::sample(g, [](const Vec& x) { return cplx(std::exp(-x[0] * x[0] - 0.5 * x[1] * x[1]), 0.0); });
    const Field fast = forward_transform(f);
    const Field slow = direct_forward(f);
    EXPECT_LT(max_abs_diff(fast, slow) / max_abs(slow), 1e-12) << "n=" << n;
  }
}

TEST(Grid, RoundTrip) {
  Rng rng(1);
  for (int n : {1, 2}) {
    Grid g(n, 5.0, n == 1 ? 128 : 32);
    const Field f = test::random_field(g, rng);
    EXPECT_LT(max_abs_diff(inverse_transform(forward_transform(f)), f), 1e-12);
  }
}

TEST(Grid, InversePointMassIsConstant) {
  Grid g(1, 2.0 * kPi, 64);
  Field F(g, Side::frequency);
  F.values[32] = 2.0 * kPi;
  const Field f = inverse_transform(F);
  for (const auto& v : f.values) EXPECT_NEAR(std::abs(v - 1.0), 0.0, 1e-13);
}

TEST(Grid, InverseMatchesDirectSum) {
  Grid g(1, 8.0, 64);
  const Field F = Field::sample_frequency(g, [](const Vec& xi) {
    const double t = xi[0] / 3.0;
    return cplx(std::abs(t) < 1.0 ? std::exp(-1.0 / (1.0 - t * t)) : 0.0, 0.0);
  });
  const Field fast = inverse_transform(F);
  const Field slow = direct_inverse(F);
  EXPECT_LT(max_abs_diff(fast, slow) / max_abs(slow), 1e-12);
}

TEST(Grid, LebesgueNormOfConstant) {
  Grid g(1, 1.0, 32);
  const Field f = Field::sample(g, [](const Vec&) { return cplx(-3.0, 4.0); });
  for (double p : {0.5, 1.0, 2.0, 7.0, kInf}) EXPECT_NEAR(lebesgue_norm(f, p), 5.0, 1e-12) << p;
}

TEST(Grid, LebesgueNormOfHalfIndicator) {
  Grid g(1, 2.0, 64);
  const Field f = Field::sample(g, [](const Vec& x) { return cplx(x[0] < 0.0 ? 1.0 : 0.0, 0.0); });
  EXPECT_NEAR(lebesgue_norm(f, 2.0), 1.0, 1e-12);
}

TEST(Grid, LebesgueNormOfAbs) {
  // The integral of |x| over [-1, 1] is 1; the Riemann sum is exact up to O(1/M).
  for (int M : {64, 256}) {
    Grid g(1, 2.0, M);
    const Field f = Field::sample(g, [](const Vec& x) { return cplx(std::abs(x[0]), 0.0); });
    EXPECT_NEAR(lebesgue_norm(f, 1.0), 1.0, 2.0 / M);
  }
}

TEST(Grid, Plancherel) {
  Rng rng(2);
  for (int n : {1, 2}) {
    Grid g(n, 7.0, n == 1 ? 128 : 32);
    for (int t = 0; t < 5; ++t) {
      const Field f = test::random_field(g, rng);
      const Field F = forward_transform(f);
      const double lhs = std::pow(g.freq_spacing() / (2.0 * kPi), n) * std::pow(lebesgue_norm(F, 2.0), 2) /
                         std::pow(g.spacing(), n);
      // lebesgue_norm carries the physical cell volume, divided out above.
      const double rhs = std::pow(lebesgue_norm(f, 2.0), 2);
      EXPECT_NEAR(lhs / rhs, 1.0, 1e-10);
    }
  }
}

TEST(Grid, Linearity) {
  Rng rng(3);
  Grid g(1, 4.0, 64);
  const Field f = test::random_field(g, rng), h = test::random_field(g, rng);
  const cplx a(0.3, -1.2), b(2.0, 0.5);
  Field comb(g, Side::physical);
  for (std::size_t i = 0; i < comb.values.size(); ++i) comb.values[i] = a * f.values[i] + b * h.values[i];
  const Field Fc = forward_transform(comb), Ff = forward_transform(f), Fh = forward_transform(h);
  double err = 0.0;
  for (std::size_t i = 0; i < Fc.values.size(); ++i)
    err = std::max(err, std::abs(Fc.values[i] - a * Ff.values[i] - b * Fh.values[i]));
  EXPECT_LT(err, 1e-11);
}

TEST(Grid, RealEvenStaysRealEven) {
  Grid g(1, 10.0, 128);
  const Field f = Field::sample(g, [](const Vec& x) { return cplx(std::exp(-x[0] * x[0]) * std::cos(2.0 * x[0]), 0.0); });
  const Field F = forward_transform(f);
  for (int i = 1; i < 128; ++i) {
    EXPECT_LT(std::abs(F.values[i].imag()), 1e-10);
    EXPECT_LT(std::abs(F.values[i] - F.values[128 - i]), 1e-10);
  }
}

TEST(Grid, PeriodicConvolutionWithPointMass) {
  Grid g(1, 4.0, 32);
  Rng rng(4);
  const Field f = test::random_field(g, rng);
  Field delta(g, Side::physical);
  delta.values[16] = 1.0 / g.spacing();
  EXPECT_LT(max_abs_diff(periodic_convolve(delta, f), f), 1e-12);
}

TEST(FieldIo, RoundTripAndHeader) {
  Rng rng(5);
  Grid g(2, 3.5, 8);
  Field f = test::random_field(g, rng);
  f.side = Side::physical;
  const auto path = (std::filesystem::temp_directory_path() / "mpdo_field_io_test.fld").string();
  write_field(f, path);
  const Field back = read_field(path);
  EXPECT_TRUE(back.grid == g);
  EXPECT_EQ(back.values, f.values);
  std::ifstream in(path, std::ios::binary);
  char header[32];
  in.read(header, 32);
  EXPECT_EQ(std::string(header, 8), "MPDOFLD1");
  EXPECT_EQ(std::filesystem::file_size(path), 32u + 64u * 16u);
  std::filesystem::remove(path);
}

TEST(FieldIo, RejectsBadMagic) {
  const auto path = (std::filesystem::temp_directory_path() / "mpdo_field_io_bad.fld").string();
  {
    std::ofstream out(path, std::ios::binary);
    out << "NOTAFIELD-----------------------------------";
  }
  EXPECT_THROW(read_field(path), Error);
  std::filesystem::remove(path);
  EXPECT_THROW(read_field(path), Error);
}

TEST(Parallel, ResultsIndependentOfThreadCount) {
  Grid g(1, 8.0, 1024);
  Rng rng(6);
  const Field f = test::random_field(g, rng);
  std::vector<double> sums;
  for (int t : {1, 3, 8}) {
    set_thread_count(t);
    std::vector<double> out(f.values.size());
    parallel_for(out.size(), [&](std::size_t i) { out[i] = std::norm(f.values[i]); });
    sums.push_back(pairwise_sum<double>(out));
  }
  set_thread_count(1);
  EXPECT_EQ(sums[0], sums[1]);
  EXPECT_EQ(sums[0], sums[2]);
}

TEST(Parallel, AccumulatorMatchesPairwiseSumValue) {
  std::vector<double> v(1000);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 / (1.0 + i);
  PairwiseAccumulator<double> acc;
  for (double x : v) acc.add(x);
  EXPECT_NEAR(acc.total(), pairwise_sum<double>(v), 1e-13);
}

TEST(Stats, SlopeOfPowerLaw) {
  std::vector<double> x = {1, 2, 4, 8, 16}, y;
  for (double v : x) y.push_back(3.0 * std::pow(v, -0.7));
  const SlopeFit f = fit_log2_slope(x, y);
  EXPECT_NEAR(f.slope, -0.7, 1e-12);
  EXPECT_NEAR(f.intercept, std::log2(3.0), 1e-12);
  EXPECT_LT(f.residual, 1e-12);
}

TEST(Stats, DerivedSeedsDiffer) {
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
  EXPECT_EQ(derive_seed(7, 3), derive_seed(7, 3));
}

}  // namespace
}  // namespace mpdo
