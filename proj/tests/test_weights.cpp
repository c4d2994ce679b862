// Copyright 2026 The mpdo-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <filesystem>

#include "mpdo/error.hpp"
#include "mpdo/norms.hpp"
#include "mpdo/stats.hpp"
#include "mpdo/weights.hpp"
#include "support.hpp"

namespace mpdo {
namespace {

LatticeSeq random_seq(int dim, int radius, int blocks, Rng& rng) {
  LatticeSeq v(dim, radius, blocks);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (auto& x : v.values()) x = u(rng);
  return v;
}

LatticeSeq ones(int dim, int radius, int blocks) {
  LatticeSeq v(dim, radius, blocks);
  for (auto& x : v.values()) x = 1.0;
  return v;
}

LatticeSeq point_mass(int dim, int radius) {
  LatticeSeq v(dim, radius, 1);
  const int zero[2] = {0, 0};
  v.set(std::span<const int>(zero, dim), 1.0);
  return v;
}

// Direct enumeration of the form, independent of bn_form_value.
double form_oracle(const LatticeSeq& V, const std::vector<LatticeSeq>& A) {
  const int n = V.dim(), N = V.blocks();
  std::vector<int> c(V.coords());
  double acc = 0.0;
  for (std::size_t i = 0; i < V.size(); ++i) {
    V.coords_of(i, c);
    double term = V.values()[i];
    std::vector<int> sum(n, 0);
    for (int j = 0; j < N; ++j) {
      std::span<const int> nu(c.data() + j * n, n);
      term *= A[j + 1].get(nu);
      for (int a = 0; a < n; ++a) sum[a] += nu[a];
    }
    acc += term * A[0].get(sum);
  }
  return acc;
}

TEST(BnForm, PointMassesPickOrigin) {
  Rng rng(31);
  const LatticeSeq V = random_seq(1, 2, 2, rng);
  std::vector<LatticeSeq> A = {point_mass(1, 4), point_mass(1, 2), point_mass(1, 2)};
  const int zero[2] = {0, 0};
  EXPECT_DOUBLE_EQ(bn_form_value(V, A), V.get(zero));
}

TEST(BnForm, MatchesEnumeration) {
  Rng rng(32);
  for (int N : {1, 2, 3}) {
    const LatticeSeq V = random_seq(1, 2, N, rng);
    std::vector<LatticeSeq> A = {random_seq(1, 2 * N, 1, rng)};
    for (int j = 0; j < N; ++j) A.push_back(random_seq(1, 2, 1, rng));
    EXPECT_NEAR(bn_form_value(V, A), form_oracle(V, A), 1e-12) << N;
  }
  const LatticeSeq V2 = random_seq(2, 1, 2, rng);
  std::vector<LatticeSeq> A2 = {random_seq(2, 2, 1, rng), random_seq(2, 1, 1, rng), random_seq(2, 1, 1, rng)};
  EXPECT_NEAR(bn_form_value(V2, A2), form_oracle(V2, A2), 1e-12);
}

TEST(BnForm, CauchySchwarzForSingleInput) {
  Rng rng(33);
  for (int t = 0; t < 20; ++t) {
    std::vector<LatticeSeq> A = {random_seq(1, 5, 1, rng), random_seq(1, 5, 1, rng)};
    double dot = 0.0;
    for (std::size_t i = 0; i < A[0].size(); ++i) dot += A[0].values()[i] * A[1].values()[i];
    const double v = bn_form_value(ones(1, 5, 1), A);
    EXPECT_NEAR(v, dot, 1e-12);
    EXPECT_LE(v, A[0].l2_norm() * A[1].l2_norm() * (1 + 1e-12));
  }
}

TEST(BnForm, CountsPairsForConstantWeight) {
  const int M = 3;
  std::vector<LatticeSeq> A = {ones(1, M, 1), ones(1, M, 1), ones(1, M, 1)};
  int count = 0;
  for (int a = -M; a <= M; ++a)
    for (int b = -M; b <= M; ++b) count += std::abs(a + b) <= M;
  EXPECT_DOUBLE_EQ(bn_form_value(ones(1, M, 2), A), count);
}

TEST(BnForm, AdditiveScalingAndMultilinear) {
  Rng rng(34);
  const LatticeSeq V1 = random_seq(1, 2, 2, rng), V2 = random_seq(1, 2, 2, rng);
  std::vector<LatticeSeq> A = {random_seq(1, 4, 1, rng), random_seq(1, 2, 1, rng), random_seq(1, 2, 1, rng)};
  LatticeSeq sum = V1;
  for (std::size_t i = 0; i < sum.size(); ++i) sum.values()[i] += V2.values()[i];
  EXPECT_NEAR(bn_form_value(sum, A), bn_form_value(V1, A) + bn_form_value(V2, A), 1e-12);
  LatticeSeq scaled = V1;
  for (auto& x : scaled.values()) x *= 3.5;
  EXPECT_NEAR(bn_form_value(scaled, A), 3.5 * bn_form_value(V1, A), 1e-12);
  for (int j = 0; j < 3; ++j) {
    const LatticeSeq B = random_seq(1, A[j].radius(), 1, rng);
    auto Ab = A, Ac = A;
    Ab[j] = B;
    for (std::size_t i = 0; i < Ac[j].size(); ++i) Ac[j].values()[i] = 2.0 * A[j].values()[i] + B.values()[i];
    EXPECT_NEAR(bn_form_value(V1, Ac), 2.0 * bn_form_value(V1, A) + bn_form_value(V1, Ab), 1e-12);
    // Monotone: increasing a block never decreases the form.
    EXPECT_GE(bn_form_value(V1, Ac), bn_form_value(V1, A));
  }
}

TEST(BnForm, BlockMismatch) {
  Rng rng(35);
  const LatticeSeq V = random_seq(1, 2, 2, rng);
  std::vector<LatticeSeq> A = {random_seq(1, 4, 1, rng), random_seq(1, 2, 1, rng)};
  EXPECT_THROW(bn_form_value(V, A), Error);
  std::vector<LatticeSeq> B = {random_seq(2, 4, 1, rng), random_seq(1, 2, 1, rng), random_seq(1, 2, 1, rng)};
  EXPECT_THROW(bn_form_value(V, B), Error);
}

TEST(BnEstimate, SingleInputIsExactlyOne) {
  for (int n : {1, 2})
    for (int M : {1, 2, 4, 8}) {
      if (n == 2 && M > 4) continue;
      const BnEstimate e = bn_constant_estimate(ones(n, M, 1), M, BnMethod::alternating);
      EXPECT_NEAR(e.value, 1.0, 1e-9) << n << " " << M;
      EXPECT_TRUE(e.converged);
    }
}

TEST(BnEstimate, ConstantWeightGrows) {
  double prev = 0.0;
  for (int M : {2, 4, 8, 16}) {
    const BnEstimate e = bn_constant_estimate(ones(1, M, 2), M, BnMethod::alternating);
    EXPECT_GT(e.value, prev);
    prev = e.value;
  }
}

TEST(BnEstimate, NondecreasingInRadius) {
  const WeightSpec W = WeightSpec::example_decay(1, 2);
  const LatticeSeq V = W.restrict_to_lattice(1, 2, 8);
  double prev = 0.0;
  for (int M : {1, 2, 4, 8}) {
    const double v = bn_constant_estimate(V, M, BnMethod::alternating).value;
    EXPECT_GE(v, prev * (1 - 1e-9));
    prev = v;
  }
}

TEST(BnEstimate, TraceMonotoneAndBelowBrute) {
  Rng rng(36);
  for (int t = 0; t < 4; ++t) {
    for (int M : {1, 2}) {
      const LatticeSeq V = random_seq(1, M, 2, rng);
      const BnEstimate alt = bn_constant_estimate(V, M, BnMethod::alternating);
      for (std::size_t i = 1; i < alt.trace.size(); ++i) EXPECT_GE(alt.trace[i], alt.trace[i - 1] * (1 - 1e-12));
      const BnEstimate br = bn_constant_estimate(V, M, BnMethod::brute);
      EXPECT_LE(alt.value, br.value * (1 + 1e-9));
      EXPECT_NEAR(alt.value, br.value, 1e-6 * br.value) << "t=" << t << " M=" << M;
    }
  }
}

TEST(BnEstimate, BoundedByWeightMass) {
  // Unit vectors have entries at most 1, so every term is at most V(nu).
  Rng rng(37);
  const LatticeSeq V = random_seq(1, 1, 2, rng);
  const BnEstimate e = bn_constant_estimate(V, 1, BnMethod::alternating);
  double total = 0.0;
  for (double v : V.values()) total += v;
  EXPECT_GT(e.value, 0.0);
  EXPECT_LE(e.value, total);
}

TEST(BnEstimate, TensorProductIsSubmultiplicative) {
  Rng rng(38);
  for (int t = 0; t < 3; ++t) {
    const LatticeSeq V = random_seq(1, 1, 2, rng), Vp = random_seq(1, 1, 2, rng);
    const double a = bn_constant_estimate(V, 1, BnMethod::alternating).value;
    const double b = bn_constant_estimate(Vp, 1, BnMethod::alternating).value;
    const LatticeSeq T = tensor_product(V, Vp);
    ASSERT_EQ(T.dim(), 2);
    const double c = bn_constant_estimate(T, 1, BnMethod::alternating).value;
    EXPECT_LE(c, a * b * (1 + 1e-6));
  }
}

TEST(BnEstimate, WeightOfFirstSlotOnlyDiverges) {
  // N = 3 with V depending on nu_1 alone.
  std::vector<double> xs, ys;
  for (int M : {1, 2, 4}) {
    LatticeSeq V(1, M, 3);
    std::vector<int> c(3);
    for (std::size_t i = 0; i < V.size(); ++i) {
      V.coords_of(i, c);
      V.values()[i] = 1.0 / (1.0 + std::abs(c[0]));
    }
    xs.push_back(M);
    ys.push_back(bn_constant_estimate(V, M, BnMethod::alternating).value);
  }
  EXPECT_GT(fit_log2_slope(xs, ys).slope, 0.1);
}

TEST(BnEstimate, WeakNormControlsConstant) {
  // Finite l^{4, inf} norm for N = 2: estimate / weak norm stays bounded.
  const WeightSpec W = WeightSpec::example_decay(1, 2);
  std::vector<double> r;
  for (int M : {4, 8, 16}) {
    const LatticeSeq V = W.restrict_to_lattice(1, 2, M);
    r.push_back(bn_constant_estimate(V, M, BnMethod::alternating).value / lorentz_weak_norm(V, 4.0));
  }
  EXPECT_LT(*std::max_element(r.begin(), r.end()) / *std::min_element(r.begin(), r.end()), 1.5);
}

TEST(Weights, PointValues) {
  const Vec xi[2] = {{1.5, 0.0}, {-2.0, 0.0}};
  EXPECT_DOUBLE_EQ(WeightSpec::constant()(xi, 1), 1.0);
  EXPECT_NEAR(WeightSpec::power(-0.5)(xi, 1), std::pow(1.0 + 1.5 + 2.0, -0.5), 1e-15);
  EXPECT_NEAR(WeightSpec::product({0.3, 0.7})(xi, 1), std::pow(2.5, -0.3) * std::pow(3.0, -0.7), 1e-15);
  EXPECT_NEAR(WeightSpec::example_decay(1, 2)(xi, 1), std::pow(4.5, -0.5), 1e-15);
  const Vec xi2[2] = {{3.0, 4.0}, {0.0, 0.0}};
  EXPECT_NEAR(WeightSpec::power(-1.0)(xi2, 2), 1.0 / 6.0, 1e-15);
}

TEST(Weights, ParseIdsRoundTrip) {
  for (const std::string id : {"const", "power:-0.5", "product:0.25,0.75"}) {
    const WeightSpec w = WeightSpec::parse(id);
    EXPECT_EQ(WeightSpec::parse(w.id()).id(), w.id());
  }
  EXPECT_EQ(WeightSpec::parse("product:0.25,0.75").arity(), 2);
  for (const std::string bad : {"", "power", "power:1", "product:", "nonsense:1", "power:abc"})
    EXPECT_THROW(WeightSpec::parse(bad), Error) << bad;
  try {
    WeightSpec::parse("table:/nonexistent/file.json");
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::io);
  }
}

TEST(Weights, LatticeFilesRoundTrip) {
  Rng rng(39);
  const LatticeSeq V = random_seq(1, 2, 2, rng);
  const auto path = (std::filesystem::temp_directory_path() / "mpdo_lattice_test.json").string();
  save_lattice_json(V, path);
  const LatticeSeq back = load_lattice_json(path);
  EXPECT_EQ(back.radius(), 2);
  EXPECT_EQ(back.blocks(), 2);
  EXPECT_EQ(back.values(), V.values());
  for (const std::string prefix : {"table:", "lorentz-sample:"}) {
    const WeightSpec w = WeightSpec::parse(prefix + path);
    const Vec xi[2] = {{1.2, 0.0}, {-0.9, 0.0}};
    const int c[2] = {1, -1};
    EXPECT_DOUBLE_EQ(w(xi, 1), V.get(c));
  }
  std::filesystem::remove(path);
}

TEST(Weights, RestrictionMatchesPointEvaluation) {
  const WeightSpec W = WeightSpec::power(-0.7);
  const LatticeSeq V = W.restrict_to_lattice(1, 2, 3);
  std::vector<int> c(2);
  for (std::size_t i = 0; i < V.size(); ++i) {
    V.coords_of(i, c);
    const Vec xi[2] = {{double(c[0]), 0.0}, {double(c[1]), 0.0}};
    EXPECT_DOUBLE_EQ(V.values()[i], W(xi, 1));
  }
}

TEST(Moderate, PowerWeight) {
  for (double m : {-0.5, -1.0, -2.0}) {
    const ModerateResult r = moderate_check(WeightSpec::power(m), 1, 2, 2000, 10.0, 1);
    EXPECT_TRUE(r.pass);
    EXPECT_LE(r.M_est, std::abs(m) + 0.1);
    EXPECT_LE(r.C_est, std::pow(2.0, std::abs(m) + 1.0));
  }
}

TEST(Moderate, ConstantWeight) {
  const ModerateResult r = moderate_check(WeightSpec::constant(), 1, 2, 500, 10.0, 2);
  EXPECT_TRUE(r.pass);
  EXPECT_DOUBLE_EQ(r.C_est, 1.0);
  EXPECT_DOUBLE_EQ(r.M_est, 0.0);
}

TEST(Moderate, ProductWeight) {
  const ModerateResult r = moderate_check(WeightSpec::product({0.5, 0.5}), 1, 2, 2000, 10.0, 3);
  EXPECT_TRUE(r.pass);
  EXPECT_LE(r.M_est, 1.0 + 0.1);
}

TEST(Moderate, TableWithZerosFails) {
  LatticeSeq V(1, 2, 2);
  V.values()[0] = 1.0;
  const ModerateResult r = moderate_check(WeightSpec::tabulated(V), 1, 2, 200, 2.0, 4);
  EXPECT_FALSE(r.pass);
}

TEST(VStar, PointMassGivesJapaneseBracket) {
  LatticeSeq v(1, 2, 2);
  const int z[2] = {0, 0};
  v.set(z, 1.0);
  const WeightSpec w = v_star_lift(v, 3.0);
  const Vec xi[2] = {{0.7, 0.0}, {-1.1, 0.0}};
  EXPECT_NEAR(w(xi, 1), std::pow(1.0 + 0.49 + 1.21, -1.5), 1e-14);
}

TEST(VStar, DominatesLatticeAndIsModerate) {
  Rng rng(40);
  const LatticeSeq V = random_seq(1, 2, 2, rng);
  const WeightSpec w = v_star_lift(V, 3.0);
  std::vector<int> c(2);
  for (std::size_t i = 0; i < V.size(); ++i) {
    V.coords_of(i, c);
    const Vec xi[2] = {{double(c[0]), 0.0}, {double(c[1]), 0.0}};
    EXPECT_GE(w(xi, 1), V.values()[i]);
  }
  EXPECT_TRUE(moderate_check(w, 1, 2, 500, 5.0, 5).pass);
  EXPECT_THROW(v_star_lift(V, 2.0), Error);
}

TEST(TransformClosure, BlockTransformFormula) {
  Rng rng(41);
  const LatticeSeq V = random_seq(1, 2, 2, rng);
  for (int j : {1, 2}) {
    const LatticeSeq Vj = block_transform(V, j);
    std::vector<int> c(2);
    for (std::size_t i = 0; i < Vj.size(); ++i) {
      Vj.coords_of(i, c);
      // V_j(nu) = V(-nu_1, ..., nu_1 + nu_2, ..., -nu_2) with the sum in slot j.
      int arg[2] = {-c[0], -c[1]};
      arg[j - 1] = c[0] + c[1];
      EXPECT_DOUBLE_EQ(Vj.values()[i], V.get(arg));
    }
  }
}

TEST(TransformClosure, Examples) {
  LatticeSeq pm(1, 2, 2);
  const int z[2] = {0, 0};
  pm.set(z, 1.0);
  EXPECT_NEAR(transform_closure_check(pm, 1, 2), 1.0, 1e-9);
  EXPECT_NEAR(transform_closure_check(pm, 2, 2), 1.0, 1e-9);
  const double r = transform_closure_check(WeightSpec::example_decay(1, 2), 1, 2, 1, 8);
  EXPECT_GE(r, 0.25);
  EXPECT_LE(r, 4.0);
  const double rp = transform_closure_check(WeightSpec::product({0.3, 0.9}), 1, 2, 1, 16);
  EXPECT_TRUE(std::isfinite(rp));
  EXPECT_GT(rp, 0.0);
}

}  // namespace
}  // namespace mpdo
