// Copyright 2026 The mpdo-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <map>

#include "mpdo/bound.hpp"
#include "mpdo/decomp.hpp"
#include "mpdo/error.hpp"
#include "mpdo/norms.hpp"
#include "mpdo/weights.hpp"
#include "support.hpp"

namespace mpdo {
namespace {

using test::cube_of;

Field unit_cube_indicator(const Grid& g) {
  return Field::sample(g, [&](const Vec& x) {
    bool in = x[0] >= -0.5 && x[0] < 0.5;
    if (g.dim() == 2) in = in && x[1] >= -0.5 && x[1] < 0.5;
    return cplx(in ? 1.0 : 0.0, 0.0);
  });
}

// Independent amalgam oracle: cube membership from coordinates.
double amalgam_oracle(const Field& f, double p, double q) {
  const Grid& g = f.grid;
  const int U = static_cast<int>(g.period());
  std::map<int, double> local;
  const double vol = std::pow(g.spacing(), g.dim());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec x = g.physical_coord(i);
    const int key = cube_of(x[0], U) * U + (g.dim() == 2 ? cube_of(x[1], U) : 0);
    const double a = std::abs(f.values[i]);
    if (std::isinf(p)) local[key] = std::max(local[key], a);
    else local[key] += vol * std::pow(a, p);
  }
  std::vector<double> v;
  for (auto& [k, s] : local) v.push_back(std::isinf(p) ? s : std::pow(s, 1.0 / p));
  return lp_sequence_norm(v, q);
}

TEST(Amalgam, IndicatorOfUnitCube) {
  for (int n : {1, 2}) {
    Grid g(n, 8.0, n == 1 ? 64 : 32);
    const Field f = unit_cube_indicator(g);
    for (double q : {0.5, 1.0, 2.0, kInf}) EXPECT_NEAR(amalgam_norm(f, {2.0, q}), 1.0, 1e-12);
  }
}

TEST(Amalgam, DiagonalEqualsLebesgue) {
  Rng rng(11);
  Grid g(1, 8.0, 128);
  for (double p : {0.5, 1.0, 2.0, 4.0, kInf}) {
    const Field f = test::random_field(g, rng);
    EXPECT_NEAR(amalgam_norm(f, {p, p}) / lebesgue_norm(f, p), 1.0, 1e-12) << p;
  }
}

TEST(Amalgam, MatchesCoordinateOracle) {
  Rng rng(12);
  for (int n : {1, 2}) {
    Grid g(n, 4.0, n == 1 ? 64 : 16);
    const Field f = test::random_field(g, rng);
    for (double p : {1.0, 2.0, kInf})
      for (double q : {1.0, 3.0, kInf})
        EXPECT_NEAR(amalgam_norm(f, {p, q}) / amalgam_oracle(f, p, q), 1.0, 1e-12);
  }
}

TEST(Amalgam, MonotoneInOuterExponent) {
  Rng rng(13);
  Grid g(1, 16.0, 128);
  for (int t = 0; t < 10; ++t) {
    const Field f = test::random_smooth_field(g, rng);
    double prev = kInf;
    for (double q : {0.5, 1.0, 2.0, 4.0, kInf}) {
      const double v = amalgam_norm(f, {2.0, q});
      EXPECT_LE(v, prev * (1.0 + 1e-12));
      prev = v;
    }
  }
}

TEST(Amalgam, MisalignedGridRejected) {
  Rng rng(14);
  for (const Grid& g : {Grid(1, 2.0 * kPi, 64), Grid(1, 3.0, 64)}) {
    const Field f = test::random_field(g, rng);
    try {
      amalgam_norm(f, {2.0, 2.0});
      ADD_FAILURE() << "expected alignment error";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::alignment);
    }
    EXPECT_THROW(l2_ul_norm(f), Error);
  }
}

TEST(L2Ul, Examples) {
  Grid g(1, 8.0, 64);
  EXPECT_NEAR(l2_ul_norm(unit_cube_indicator(g)), 1.0, 1e-12);
  EXPECT_NEAR(l2_ul_norm(Field::sample(g, [](const Vec&) { return cplx(0.0, -2.5); })), 2.5, 1e-12);
  Rng rng(15);
  for (int t = 0; t < 5; ++t) {
    const Field f = test::random_field(g, rng);
    EXPECT_NEAR(l2_ul_norm(f), amalgam_norm(f, {2.0, kInf}), 1e-14);
  }
}

TEST(SymbolL2Ul, ConstantAndSingleCube) {
  Grid gx(1, 4.0, 16), gxi(1, 4.0, 8);
  const auto one = SampledSymbol::sample(gx, gxi, 1, [](const Vec&, std::span<const Vec>) { return cplx(1.0, 0.0); });
  EXPECT_NEAR(symbol_l2ul_norm(one), 1.0, 1e-12);
  const auto cube = SampledSymbol::sample(gx, gxi, 1, [](const Vec& x, std::span<const Vec> xi) {
    const bool in = x[0] >= 0.5 && x[0] < 1.5 && xi[0][0] >= -0.5 && xi[0][0] < 0.5;
    return cplx(in ? 3.0 : 0.0, 0.0);
  });
  EXPECT_NEAR(symbol_l2ul_norm(cube), 3.0, 1e-12);
}

TEST(SymbolL2Ul, MatchesExhaustiveCubeEnumeration) {
  Rng rng(16);
  Grid gx(1, 4.0, 8), gxi(1, 2.0, 8);
  for (int N : {1, 2}) {
    SampledSymbol s(gx, gxi, N);
    for (auto& v : s.values) v = complex_normal(rng);
    // Oracle: walk every sample, locate its cube in each variable.
    const std::size_t bx = gx.size(), bxi = gxi.size();
    std::map<std::vector<int>, double> mass;
    const double vol = gx.spacing() * std::pow(gxi.spacing(), N);
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      std::size_t rem = i;
      std::vector<int> key(N + 1);
      for (int b = N; b >= 1; --b) {
        key[b] = cube_of(gxi.point(static_cast<int>(rem % bxi)), 2);
        rem /= bxi;
      }
      key[0] = cube_of(gx.point(static_cast<int>(rem % bx)), 4);
      mass[key] += vol * std::norm(s.values[i]);
    }
    double best = 0.0;
    for (auto& [k, m] : mass) best = std::max(best, m);
    EXPECT_NEAR(symbol_l2ul_norm(s), std::sqrt(best), 1e-12) << "N=" << N;
  }
}

TEST(Lorentz, Examples) {
  EXPECT_DOUBLE_EQ(lorentz_weak_norm(std::vector<double>{2.5}, 3.0), 2.5);
  EXPECT_DOUBLE_EQ(lorentz_weak_norm(std::vector<double>{3.0, 1.0, 1.0}, 1.0), 3.0);
  // Thresholds just below 1 count all three entries: 1 * 3^{1/2}.
  EXPECT_NEAR(lorentz_weak_norm(std::vector<double>{3.0, 1.0, 1.0}, 0.5), 9.0, 1e-12);
}

TEST(Lorentz, DominatedByStrongNorm) {
  Rng rng(17);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> a(1 + t);
    for (auto& v : a) v = u(rng);
    for (double q : {0.5, 1.0, 2.0, 4.0}) EXPECT_LE(lorentz_weak_norm(a, q), lp_sequence_norm(a, q) * (1 + 1e-12));
  }
}

TEST(SKernel, PointMassGivesKernel) {
  Grid g(1, 16.0, 256);
  const KernelParams kp{4.0};
  Field delta(g, Side::physical);
  delta.values[128] = 1.0 / g.spacing();
  const Field S = s_kernel_apply(delta, kp);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.point(static_cast<int>(i));
    double expect = 0.0;
    for (int m = -1; m <= 1; ++m) expect += std::pow(1.0 + (x - m * 16.0) * (x - m * 16.0), -2.0);
    EXPECT_NEAR(S.values[i].real(), expect, 1e-12);
    // Away from the torus seam the other translates contribute below <12>^{-4}.
    if (std::abs(x) <= 4.0) {
      EXPECT_NEAR(S.values[i].real(), std::pow(1.0 + x * x, -2.0), 1e-4);
    }
  }
}

TEST(SKernel, OutputStrictlyPositive) {
  Grid g(2, 8.0, 32);
  Field f(g, Side::physical);
  f.values[5] = 1.0;
  const Field S = s_kernel_apply(f, KernelParams::defaults(2));
  for (const auto& v : S.values) EXPECT_GT(v.real(), 0.0);
}

TEST(SKernel, RejectsSmallExponent) {
  Grid g(2, 8.0, 32);
  Field f(g, Side::physical);
  EXPECT_THROW(s_kernel_apply(f, {2.0}), Error);
  EXPECT_THROW(s_kernel_apply(Field(Grid(1, 8.0, 32), Side::physical), {1.0}), Error);
}

TEST(SKernel, CommutesWithConvolution) {
  Rng rng(18);
  Grid g(1, 16.0, 128);
  const KernelParams kp{4.0};
  for (int t = 0; t < 5; ++t) {
    const Field f = test::random_nonneg_field(g, rng), h = test::random_nonneg_field(g, rng);
    const Field lhs = s_kernel_apply(periodic_convolve(f, h), kp);
    const Field rhs = periodic_convolve(s_kernel_apply(f, kp), h);
    EXPECT_LT(test::max_abs_diff(lhs, rhs) / test::max_abs(rhs), 1e-8);
  }
}

TEST(SKernel, IteratedKernelComparableToKernel) {
  // c1 S(f) <= S(S(f)) <= c2 S(f) with constants that do not move with M.
  const KernelParams kp{4.0};
  std::vector<std::pair<double, double>> ranges;
  for (int M : {128, 256, 512}) {
    Grid g(1, 16.0, M);
    Rng rng(19);
    double lo = kInf, hi = 0.0;
    for (int t = 0; t < 10; ++t) {
      const Field f = random_trig_polynomial(g, 0.1, rng);
      const Field S = s_kernel_apply(f, kp);
      const Field SS = s_kernel_apply(S, kp);
      for (std::size_t i = 0; i < S.values.size(); ++i) {
        const double r = SS.values[i].real() / S.values[i].real();
        lo = std::min(lo, r);
        hi = std::max(hi, r);
      }
    }
    ranges.emplace_back(lo, hi);
  }
  for (auto [lo, hi] : ranges) {
    EXPECT_GT(lo, 1.0);
    EXPECT_LT(hi, 2.5);
  }
}

TEST(SqrtSSquare, Examples) {
  Grid g(1, 16.0, 128);
  const KernelParams kp{4.0};
  EXPECT_EQ(sqrt_s_square_norm(Field(g, Side::physical), 2.0, kp), 0.0);
  const double r = sqrt_s_square_norm(unit_cube_indicator(g), 2.0, kp);
  // S(1)(x) integrates <y>^{-4} over R, which is pi/2; the L^2 norm of S(1_Q)^{1/2} is its square root.
  EXPECT_NEAR(r, std::sqrt(kPi / 2.0), 1e-3);
  EXPECT_THROW(sqrt_s_square_norm(unit_cube_indicator(g), 0.5, kp), Error);
}

TEST(SqrtSSquare, EquivalentToAmalgamNorm) {
  Rng rng(20);
  Grid g(1, 32.0, 256);
  const KernelParams kp = KernelParams::defaults(1);
  for (double p : {1.0, 2.0, 4.0, kInf}) {
    double lo = kInf, hi = 0.0;
    for (int t = 0; t < 50; ++t) {
      const Field f = test::random_smooth_field(g, rng);
      const double r = sqrt_s_square_norm(f, p, kp) / amalgam_norm(f, {2.0, p});
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    EXPECT_GT(lo, 0.25) << p;
    EXPECT_LT(hi, 4.0) << p;
  }
}

TEST(EquivalentAmalgam, IndicatorEnvelopeIsExact) {
  Rng rng(21);
  Grid g(1, 16.0, 128);
  std::vector<Field> fs;
  for (int t = 0; t < 10; ++t) fs.push_back(test::random_field(g, rng));
  for (double q : {1.0, 2.0, kInf}) {
    const auto rr = equivalent_amalgam_check(fs, unit_cube_indicator(g), {2.0, q}, 4.0);
    EXPECT_NEAR(rr.min, 1.0, 1e-12);
    EXPECT_NEAR(rr.max, 1.0, 1e-12);
  }
}

TEST(EquivalentAmalgam, DecayingEnvelopeBounded) {
  Rng rng(22);
  Grid g(1, 32.0, 256);
  std::vector<Field> fs;
  for (int t = 0; t < 30; ++t) fs.push_back(test::random_smooth_field(g, rng));
  const Field env = Field::sample(g, [](const Vec& x) { return cplx(std::pow(1.0 + x[0] * x[0], -2.0), 0.0); });
  for (double q : {1.0, 2.0, 4.0, kInf}) {
    const auto rr = equivalent_amalgam_check(fs, env, {2.0, q}, 4.0);
    EXPECT_GT(rr.min, 0.25);
    EXPECT_LT(rr.max, 4.0);
  }
}

TEST(EquivalentAmalgam, ZeroFieldsAndHypothesis) {
  Grid g(1, 16.0, 128);
  std::vector<Field> zeros(3, Field(g, Side::physical));
  const auto rr = equivalent_amalgam_check(zeros, unit_cube_indicator(g), {2.0, 2.0}, 4.0);
  EXPECT_EQ(rr.min, 0.0);
  EXPECT_EQ(rr.max, 0.0);
  // Decay must exceed n / min(p, q).
  EXPECT_THROW(equivalent_amalgam_check(zeros, unit_cube_indicator(g), {2.0, 0.5}, 2.0), Error);
  // Vanishing on Q violates the lower sandwich bound.
  const Field hole = Field::sample(g, [](const Vec& x) { return cplx(std::abs(x[0]) < 0.2 ? 0.0 : 1e-3, 0.0); });
  EXPECT_THROW(equivalent_amalgam_check(zeros, hole, {2.0, 2.0}, 4.0), Error);
}

SampledSymbol low_symbol() {
  // Every partial transform sits at frequencies below 1.
  Grid gx(1, 8.0, 32), gxi(1, 32.0, 64);
  return SampledSymbol::sample(gx, gxi, 2, [](const Vec& x, std::span<const Vec> xi) {
    return cplx(2.0 + std::cos(2.0 * kPi * x[0] / 8.0), 0.0) * std::cos(2.0 * kPi * xi[0][0] / 32.0) *
           (1.0 + 0.5 * std::sin(4.0 * kPi * xi[1][0] / 32.0));
  });
}

TEST(Besov, LowShellOnlyEqualsL2Ul) {
  const SampledSymbol s = low_symbol();
  const std::vector<double> sv = {0.5, 1.0, 2.0};
  const double b = besov_symbol_norm(s, WeightSpec::constant(), sv, 1.0);
  EXPECT_NEAR(b / symbol_l2ul_norm(s), 1.0, 1e-10);
}

TEST(Besov, MonotoneInSmoothnessAndT) {
  Grid gx(1, 8.0, 32), gxi(1, 32.0, 64);
  Rng rng(23);
  const SymbolSpec bl = SymbolSpec::band_limited({2.0, 3.0, 3.0}, 1, 5);
  const SampledSymbol s = SampledSymbol::sample(gx, gxi, 2, [&](const Vec& x, std::span<const Vec> xi) { return bl(x, xi); });
  const WeightSpec W = WeightSpec::power(-0.5);
  double prev = 0.0;
  for (double s0 : {0.0, 0.5, 1.0}) {
    const std::vector<double> sv = {s0, 0.5, 0.5};
    const double v = besov_symbol_norm(s, W, sv, 1.0);
    EXPECT_GE(v, prev);
    prev = v;
    EXPECT_LE(besov_symbol_norm(s, W, sv, kInf), v * (1 + 1e-12));
  }
}

TEST(Besov, FiniteForSmoothSymbols) {
  // Bounded derivatives relative to the weight keep every aggregate finite.
  Grid gx(1, 8.0, 32), gxi(1, 32.0, 64);
  const WeightSpec W = WeightSpec::power(-0.5);
  const SampledSymbol s = SampledSymbol::sample(gx, gxi, 2, [&](const Vec& x, std::span<const Vec> xi) {
    const Vec v[2] = {xi[0], xi[1]};
    return std::polar(W(v, 1), 0.3 * x[0] + 0.2 * xi[0][0] - 0.1 * xi[1][0]);
  });
  for (double t : {0.5, 1.0, kInf}) {
    const std::vector<double> sv = {0.5, 0.5, 0.5};
    const double v = besov_symbol_norm(s, W, sv, t);
    EXPECT_TRUE(std::isfinite(v));
    EXPECT_GT(v, 0.0);
  }
}

TEST(Besov, ResolutionError) {
  // The xi lattice tops out below 1, so no dyadic shell beyond the base fits.
  Grid gx(1, 8.0, 32), gxi(1, 16.0, 4);
  const auto s = SampledSymbol::sample(gx, gxi, 1, [](const Vec&, std::span<const Vec>) { return cplx(1.0, 0.0); });
  const std::vector<double> sv = {0.0, 0.0};
  try {
    besov_symbol_norm(s, WeightSpec::constant(), sv, 1.0);
    ADD_FAILURE() << "expected resolution error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::resolution);
  }
}

// Dyadic cube oracle from coordinates: subcubes of side 2^{-d} inside unit
// cubes, and aligned blocks of 2^e unit cubes.
double bmo_oracle(const Field& f) {
  const Grid& g = f.grid;
  const int U = static_cast<int>(g.period());
  const int P = g.res() / U;
  double best = 0.0;
  for (int sub = 1; sub <= P; sub *= 2) {
    std::map<long, std::vector<cplx>> cubes;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double x = g.physical_coord(i)[0];
      const double t = x + 0.5 - std::floor(x + 0.5);
      const long key = cube_of(x, U) * 1000L + static_cast<long>(std::floor(t * sub + 1e-9));
      cubes[key].push_back(f.values[i]);
    }
    for (auto& [k, v] : cubes) {
      cplx mean = 0.0;
      for (auto z : v) mean += z;
      mean /= static_cast<double>(v.size());
      double osc = 0.0;
      for (auto z : v) osc += std::abs(z - mean);
      best = std::max(best, osc / v.size());
    }
  }
  for (int side = 1; side <= U; side *= 2) {
    std::map<int, std::pair<double, int>> blocks;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const int c = cube_of(g.physical_coord(i)[0], U);
      if (c / side >= U / side) continue;
      blocks[c / side].first += std::abs(f.values[i]);
      blocks[c / side].second += 1;
    }
    for (auto& [k, e] : blocks) best = std::max(best, e.first / e.second);
  }
  return best;
}

TEST(Bmo, Examples) {
  Grid g(1, 8.0, 64);
  EXPECT_NEAR(bmo_discrete_norm(Field::sample(g, [](const Vec&) { return cplx(0.0, 2.0); })), 2.0, 1e-12);
  const Field ind = unit_cube_indicator(g);
  const double v = bmo_discrete_norm(ind);
  EXPECT_GT(v, 0.0);
  EXPECT_LE(v, 1.0 + 1e-12);
  EXPECT_NEAR(v, bmo_oracle(ind), 1e-12);
  const Field shifted = Field::sample(g, [](const Vec& x) { return cplx(x[0] >= -0.25 && x[0] < 0.75 ? 1.0 : 0.0, 0.0); });
  EXPECT_NEAR(bmo_discrete_norm(shifted), bmo_oracle(shifted), 1e-12);
  EXPECT_GT(bmo_discrete_norm(shifted), 0.0);
}

TEST(Bmo, BoundedByTwiceSup) {
  Rng rng(24);
  Grid g(1, 8.0, 64);
  for (int t = 0; t < 20; ++t) {
    const Field f = test::random_field(g, rng);
    EXPECT_LE(bmo_discrete_norm(f), 2.0 * lebesgue_norm(f, kInf));
    EXPECT_NEAR(bmo_discrete_norm(f), bmo_oracle(f), 1e-12);
  }
}

TEST(MixedNorm, MinkowskiInequality) {
  Rng rng(25);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 40; ++t) {
    const std::size_t nt = 3 + t % 5, nv = 2 + t % 7;
    std::vector<double> a(nt * nv), at(nt * nv);  // a[nu][tau], at[tau][nu]
    for (std::size_t v = 0; v < nv; ++v)
      for (std::size_t s = 0; s < nt; ++s) at[s * nv + v] = a[v * nt + s] = std::pow(u(rng), 3);
    for (double p : {0.5, 1.0, 2.0, 3.0, kInf})
      for (double q : {0.5, 1.0, 2.0, 3.0, kInf}) {
        const double lhs = mixed_sequence_norm(a, nv, nt, p, q);
        const double rhs = mixed_sequence_norm(at, nt, nv, q, std::min(p, q));
        EXPECT_LE(lhs, rhs * (1 + 1e-12)) << p << " " << q;
      }
  }
}

TEST(BoxSquareFunction, BoxPiecesDominatedBySmoothedSquare) {
  Grid g(1, 16.0, 128);
  const UniformPair pair = build_uniform_pair(g);
  const KernelParams kp{4.0};
  const int top = static_cast<int>(g.max_frequency()) - 1;
  Rng rng(26);
  std::vector<double> C;
  for (int t = 0; t < 50; ++t) {
    const Field h = random_trig_polynomial(g, 0.5, rng);
    std::vector<double> sq(g.size(), 0.0);
    for (int nu = -top; nu <= top; ++nu) {
      const Field b = box_apply(pair, {nu, 0}, h);
      for (std::size_t i = 0; i < sq.size(); ++i) sq[i] += std::norm(b.values[i]);
    }
    Field h2(g, Side::physical);
    for (std::size_t i = 0; i < sq.size(); ++i) h2.values[i] = std::norm(h.values[i]);
    const Field S = s_kernel_apply(h2, kp);
    double c = 0.0;
    for (std::size_t i = 0; i < sq.size(); ++i) c = std::max(c, std::sqrt(sq[i] / S.values[i].real()));
    C.push_back(c);
  }
  const double lo = *std::min_element(C.begin(), C.end()), hi = *std::max_element(C.begin(), C.end());
  EXPECT_LT(hi, 10.0);
  EXPECT_LT(hi / lo, 3.0);
}

TEST(KernelSamples, KernelNormVsLatticeSamples) {
  Rng rng(27);
  Grid g(1, 16.0, 128);
  const KernelParams kp{4.0};
  const int P = g.points_per_unit();
  for (double p : {1.0, 2.0, kInf}) {
    double lo = kInf, hi = 0.0;
    for (int t = 0; t < 20; ++t) {
      const Field S = s_kernel_apply(test::random_smooth_field(g, rng), kp);
      std::vector<double> lat;
      for (int j = 0; j < g.res(); j += P) lat.push_back(S.values[j].real());
      const double r = lebesgue_norm(S, p) / lp_sequence_norm(lat, p);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    EXPECT_GT(lo, 0.25) << p;
    EXPECT_LT(hi, 4.0) << p;
  }
}

TEST(Embedding, LebesgueDominatesAmalgam) {
  // Unit cubes have measure one, so Hoelder gives the embedding with constant 1.
  Rng rng(28);
  Grid g(1, 16.0, 128);
  for (int t = 0; t < 20; ++t) {
    const Field f = random_trig_polynomial(g, 0.5, rng);
    for (double q : {2.0, 3.0, 6.0, kInf}) EXPECT_GE(lebesgue_norm(f, q), amalgam_norm(f, {2.0, q}) * (1 - 1e-12));
  }
}

}  // namespace
}  // namespace mpdo
