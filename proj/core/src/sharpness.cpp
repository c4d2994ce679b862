// Copyright 2026 The mpdo-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpdo/sharpness.hpp"

#include <algorithm>
#include <cmath>

#include "mpdo/decomp.hpp"
#include "mpdo/error.hpp"
#include "mpdo/parallel.hpp"

namespace mpdo {

namespace {

// Number of lattice points per unit frequency when the period is 2 pi P.
int periods_of_two_pi(const Grid& g) {
  const double P = g.period() / (2.0 * kPi);
  const double r = std::round(P);
  if (r < 1.0 || std::abs(P - r) > 1e-9 * r) throw Error(Errc::alignment, "period must be 2 pi times an integer");
  return static_cast<int>(r);
}

double vnorm(const int* c, int n) {
  double s = 0.0;
  for (int a = 0; a < n; ++a) s += double(c[a]) * c[a];
  return std::sqrt(s);
}

}  // namespace

Field wainger_function(const WaingerParams& prm, const Field& phi) {
  if (!(prm.a > 0.0 && prm.a < 1.0)) throw Error(Errc::parameter, "phase exponent a must lie in (0, 1)");
  const Grid& g = phi.grid;
  const int n = g.dim();
  if (!(prm.b > 0.0 && prm.b < n)) throw Error(Errc::parameter, "decay exponent b must lie in (0, n)");
  if (!(prm.t > 0.0)) throw Error(Errc::parameter, "regularization t must be positive");
  if (phi.side != Side::physical) throw Error(Errc::type, "bump must be physical-side");
  const int P = periods_of_two_pi(g);
  if (prm.K < 1 || prm.K * P >= g.res() / 2) throw Error(Errc::range, "truncation exceeds the grid frequency range");
  struct Term {
    Vec k;
    cplx c;
  };
  std::vector<Term> terms;
  const int K = prm.K;
  const int K1 = n == 2 ? K : 0;
  for (int k0 = -K; k0 <= K; ++k0)
    for (int k1 = -K1; k1 <= K1; ++k1) {
      const int c[2] = {k0, k1};
      const double r = vnorm(c, n);
      if (r == 0.0 || r > K) continue;
      const double mag = std::exp(-prm.t * r) * std::pow(r, -prm.b);
      terms.push_back({{double(k0), double(k1)}, std::polar(mag, std::pow(r, prm.a))});
    }
  Field out(g, Side::physical);
  parallel_for(g.size(), [&](std::size_t p) {
    const Vec x = g.physical_coord(p);
    PairwiseAccumulator<cplx> acc;
    for (const auto& t : terms) acc.add(t.c * std::polar(1.0, t.k[0] * x[0] + t.k[1] * x[1]));
    out.values[p] = acc.total() * phi.values[p];
  });
  return out;
}

LatticeSeq compute_dk(double m, std::span<const double> b, int K, int n, int N, int inner, double cost_cap) {
  if (N < 1 || N > 3) throw Error(Errc::parameter, "N must lie in 1..3");
  if (static_cast<int>(b.size()) != N) throw Error(Errc::shape, "need one decay exponent per input");
  if (K < 1) throw Error(Errc::parameter, "radius must be positive");
  const int R = inner > 0 ? inner : 8 * K;
  const double outer = std::pow(2.0 * K + 1.0, n);
  const double tuples = std::pow(2.0 * R + 1.0, (N - 1) * n);
  if (outer * tuples > cost_cap) throw Error(Errc::cost_cap, "d_k enumeration exceeds the cost cap");
  LatticeSeq d(n, K, 1);
  const int side = 2 * R + 1;
  std::size_t count = 1;
  for (int i = 0; i < (N - 1) * n; ++i) count *= side;
  parallel_for(d.size(), [&](std::size_t idx) {
    int k[2];
    d.coords_of(idx, std::span<int>(k, n));
    int kj[3][2];
    PairwiseAccumulator<double> acc;
    for (std::size_t t = 0; t < count; ++t) {
      std::size_t rem = t;
      int last[2] = {k[0], n == 2 ? k[1] : 0};
      for (int j = N - 2; j >= 0; --j)
        for (int a = n - 1; a >= 0; --a) {
          kj[j][a] = static_cast<int>(rem % side) - R;
          rem /= side;
        }
      for (int j = 0; j + 1 < N; ++j)
        for (int a = 0; a < n; ++a) last[a] -= kj[j][a];
      bool ok = true;
      for (int a = 0; a < n; ++a) {
        kj[N - 1][a] = last[a];
        if (std::abs(last[a]) > R) ok = false;
      }
      if (!ok) continue;
      double w = 1.0, sq = 1.0;
      for (int j = 0; j < N && ok; ++j) {
        const double r = vnorm(kj[j], n);
        if (r == 0.0) ok = false;
        sq += r * r;
        w *= std::pow(r, -b[j]);
      }
      if (!ok) continue;
      acc.add(std::pow(sq, 0.5 * m) * w);
    }
    d.values()[idx] = acc.total();
  });
  return d;
}

SlopeFit dk_slope(const LatticeSeq& d) {
  const int K = d.radius();
  const int n = d.dim();
  std::vector<double> x, y;
  std::vector<int> c(n);
  for (std::size_t i = 0; i < d.size(); ++i) {
    d.coords_of(i, c);
    const double r = vnorm(c.data(), n);
    if (r < K / 4.0 || r > K || d.values()[i] <= 0.0) continue;
    x.push_back(r);
    y.push_back(d.values()[i]);
  }
  return fit_log2_slope(x, y);
}

double sharp_phi(double y) { return lp_phi(2.0 * y); }

double sharp_psi(int a, double y) {
  const double u = std::ldexp(y, -a);
  return lp_phi(u) - lp_phi(2.0 * u);
}

GrowthCase prop74_case(int a, SlotFamily family, int N, const Grid& g) {
  if (a < 1) throw Error(Errc::parameter, "dilation a must be a positive integer");
  if (N < 1 || N > 3) throw Error(Errc::parameter, "N must lie in 1..3");
  // psi_a lives in |x| <= 2^{a+1}; it must sit inside one period.
  if (std::ldexp(1.0, a + 2) > g.period()) throw Error(Errc::bandwidth, "dilated bump does not fit in the torus");
  const int n = g.dim();
  const Field psi = Field::sample(g, [a](const Vec& x) { return cplx(sharp_psi(a, std::hypot(x[0], x[1])), 0.0); });
  const Field phi = Field::sample(g, [](const Vec& x) { return cplx(sharp_phi(std::hypot(x[0], x[1])), 0.0); });
  const double norm = std::pow(2.0 * kPi, -n);
  auto profile_of = [norm](const Field& f) {
    Field F = forward_transform(f);
    for (auto& v : F.values) v *= norm;
    return Profile::field(std::move(F));
  };
  const Profile mpsi = profile_of(psi);
  const Profile mphi = profile_of(phi);
  GrowthCase c;
  std::vector<Profile> prof;
  for (int j = 0; j < N; ++j) {
    const bool dilated = family == SlotFamily::all_slots || j == 0;
    prof.push_back(dilated ? mpsi : mphi);
    c.f.push_back(dilated ? psi : phi);
  }
  c.sigma = SymbolSpec::separable(std::move(prof), n);
  c.sigma.family = family == SlotFamily::single_slot ? "growth:single_slot" : "growth:all_slots";
  return c;
}

double halfmax_radius(const Grid& g) {
  const Field phi = Field::sample(g, [](const Vec& x) { return cplx(sharp_phi(std::hypot(x[0], x[1])), 0.0); });
  const Field conv = periodic_convolve(phi, phi);
  const int M = g.res();
  const int mid = M / 2;
  auto at = [&](int i) { return std::abs(conv.values[g.flatten(i, g.dim() == 2 ? mid : 0)]); };
  const double peak = at(mid);
  double delta = 0.0;
  for (int i = mid; i < M; ++i) {
    if (at(i) < 0.5 * peak || at(2 * mid - i) < 0.5 * peak) break;
    delta = g.point(i);
  }
  return delta;
}

GrowthReport prop74_growth_experiment(std::span<const int> a_values, SlotFamily family, int N, double r,
                                      const Grid& g, const EvalOptions& opt) {
  if (a_values.size() < 2) throw Error(Errc::parameter, "need at least two dilations");
  if (!(r > 0.0)) throw Error(Errc::parameter, "r must be positive");
  const int n = g.dim();
  GrowthReport rep;
  rep.family = family;
  rep.N = N;
  rep.r = r;
  rep.delta = family == SlotFamily::single_slot ? halfmax_radius(g) : 0.0;
  rep.expected_slope = family == SlotFamily::single_slot ? n : N * n + (std::isinf(r) ? 0.0 : n / r);
  rep.points.resize(a_values.size());
  parallel_for(a_values.size(), [&](std::size_t i) {
    const int a = a_values[i];
    const GrowthCase c = prop74_case(a, family, N, g);
    const Field T = evaluate(c.sigma, c.f, opt);
    double norm = 0.0;
    if (family == SlotFamily::all_slots) {
      norm = lebesgue_norm(T, r);
    } else {
      Field local(g, Side::physical);
      for (std::size_t p = 0; p < T.values.size(); ++p) {
        const Vec x = g.physical_coord(p);
        if (std::hypot(x[0], x[1]) <= rep.delta + 1e-12) local.values[p] = T.values[p];
      }
      norm = lebesgue_norm(local, r);
    }
    const int mid = g.res() / 2;
    rep.points[i] = {a, norm, T.values[g.flatten(mid, n == 2 ? mid : 0)]};
  });
  std::vector<double> x, y;
  for (const auto& p : rep.points) {
    x.push_back(std::ldexp(1.0, p.a));
    y.push_back(p.norm);
  }
  rep.fit = fit_log2_slope(x, y);
  return rep;
}

double prop74_budget(int a, std::span<const double> s, std::span<const double> q, int n, SlotFamily family) {
  if (s.size() != q.size() || s.empty()) throw Error(Errc::shape, "need matching s_j and q_j lists");
  auto inv = [](double v) { return std::isinf(v) ? 0.0 : 1.0 / v; };
  if (family == SlotFamily::single_slot) return a * (s[0] + 0.5 * n + n * inv(q[0]));
  double e = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) e += s[j] + 0.5 * n + n * inv(q[j]);
  return a * e;
}

double wainger_decay(double a, double q, double eps, int n) {
  const double iq = std::isinf(q) ? 0.0 : 1.0 / q;
  return n - a * n / 2.0 - n * iq + a * n * iq + eps;
}

double prop73_coefficient_sum(double m, double s0, std::span<const double> b, int K, int n) {
  const int N = static_cast<int>(b.size());
  if (N < 1 || N > 3) throw Error(Errc::parameter, "N must lie in 1..3");
  if (K < 1) throw Error(Errc::parameter, "truncation must be positive");
  const int side = 2 * K + 1;
  std::size_t block = n == 1 ? side : static_cast<std::size_t>(side) * side;
  std::size_t total = 1;
  for (int j = 0; j < N; ++j) total *= block;
  if (static_cast<double>(total) > 2e9) throw Error(Errc::cost_cap, "coefficient sum exceeds the cost cap");
  // Parallel over the first block, fixed-order sums inside.
  std::size_t rest = total / block;
  std::vector<double> partial(block);
  parallel_for(block, [&](std::size_t i0) {
    int c[3][2] = {};
    c[0][0] = static_cast<int>(n == 1 ? i0 : i0 / side) - K;
    if (n == 2) c[0][1] = static_cast<int>(i0 % side) - K;
    const double r0 = vnorm(c[0], n);
    if (r0 == 0.0) return;
    PairwiseAccumulator<double> acc;
    for (std::size_t t = 0; t < rest; ++t) {
      std::size_t rem = t;
      for (int j = N - 1; j >= 1; --j) {
        const std::size_t bi = rem % block;
        rem /= block;
        c[j][0] = static_cast<int>(n == 1 ? bi : bi / side) - K;
        if (n == 2) c[j][1] = static_cast<int>(bi % side) - K;
      }
      double sq = 1.0 + r0 * r0, w = std::pow(r0, -b[0]);
      bool ok = true;
      for (int j = 1; j < N; ++j) {
        const double r = vnorm(c[j], n);
        if (r == 0.0) {
          ok = false;
          break;
        }
        sq += r * r;
        w *= std::pow(r, -b[j]);
      }
      if (ok) acc.add(std::pow(sq, 0.5 * (m - s0)) * w);
    }
    partial[i0] = acc.total();
  });
  return pairwise_sum<double>(partial);
}

double prop73_exponent(double m, double s0, std::span<const double> b, int n) {
  double e = m - s0 - b[0] + n;
  for (std::size_t j = 1; j < b.size(); ++j) e += n - b[j];
  return e;
}

Prop73Case prop73_symbol(int K, double s0, const Grid& g, double m, std::span<const double> a,
                         std::span<const double> b) {
  const int N = static_cast<int>(a.size());
  const int n = g.dim();
  if (N < 1 || N > 3 || b.size() != a.size()) throw Error(Errc::shape, "need matching a_j and b_j lists of length 1..3");
  for (int j = 0; j < N; ++j) {
    if (!(a[j] > 0.0 && a[j] < 1.0)) throw Error(Errc::parameter, "phase exponents must lie in (0, 1)");
    if (!(b[j] > 0.0 && b[j] < n)) throw Error(Errc::parameter, "decay exponents must lie in (0, n)");
  }
  const int P = periods_of_two_pi(g);
  if (K < 1 || (K + 1) * P >= g.res() / 2) throw Error(Errc::bandwidth, "lattice truncation exceeds the grid bandwidth");

  auto bump = [n](const Vec& t) {
    double v = 1.0;
    for (int c = 0; c < n; ++c) v *= compact_bump(t[c], 0.5);
    return v;
  };
  auto nearest = [n](const Vec& xi, int* l) {
    for (int c = 0; c < n; ++c) l[c] = static_cast<int>(std::lround(xi[c]));
    if (n == 1) l[1] = 0;
  };

  Prop73Case out;
  const std::vector<double> av(a.begin(), a.end());
  const std::vector<double> bv(b.begin(), b.end());
  const double expo = m - s0;
  auto tau = [=](std::span<const Vec> xi) -> cplx {
    double sq = 1.0, mag = 1.0, ph = 0.0;
    for (int j = 0; j < N; ++j) {
      int l[2] = {0, 0};
      nearest(xi[j], l);
      const double w = bump({xi[j][0] - l[0], xi[j][1] - l[1]});
      if (w == 0.0) return 0.0;
      const double r = vnorm(l, n);
      sq += r * r;
      mag *= w;
      ph -= std::pow(r, av[j]);
    }
    return std::polar(std::pow(sq, 0.5 * expo) * mag, ph);
  };
  auto amp = [=](const Vec& x) { return cplx(bump(x), 0.0); };
  out.sigma = SymbolSpec::x_modulated(amp, tau, N, n, "sharpness:x_modulated_lattice");
  out.amp = Field::sample(g, amp);

  for (int j = 0; j < N; ++j) {
    Field F(g, Side::frequency);
    for (std::size_t k = 0; k < F.values.size(); ++k) {
      const Vec xi = g.frequency_coord(k);
      int l[2] = {0, 0};
      nearest(xi, l);
      if (std::abs(l[0]) > K || std::abs(l[1]) > K) continue;
      const double r = vnorm(l, n);
      if (r == 0.0) continue;
      const double w = bump({xi[0] - l[0], xi[1] - l[1]});
      if (w == 0.0) continue;
      F.values[k] = std::polar(w * std::pow(r, -bv[j]), std::pow(r, av[j]));
    }
    out.f.push_back(inverse_transform(F));
  }

  double sq = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double w = bump(g.frequency_coord(k));
    sq += w * w;
  }
  out.bump_l2sq = sq * std::pow(g.freq_spacing(), n);
  out.coefficient = prop73_coefficient_sum(m, s0, b, K, n);
  out.predicted = std::pow(2.0 * kPi, -N * n) * std::pow(out.bump_l2sq, N) * out.coefficient;
  return out;
}

SlopeFit prop73_increment_slope(double m, double s0, std::span<const double> b, int n, std::span<const int> K,
                                std::vector<double>* sums) {
  if (K.size() < 3) throw Error(Errc::parameter, "need at least three truncations");
  std::vector<double> S;
  for (std::size_t i = 0; i < K.size(); ++i) {
    if (K[i] < 1 || (i > 0 && K[i] <= K[i - 1])) throw Error(Errc::parameter, "truncations must increase");
    S.push_back(prop73_coefficient_sum(m, s0, b, K[i], n));
  }
  std::vector<double> x, y;
  for (std::size_t i = 1; i < K.size(); ++i) {
    x.push_back(K[i]);
    y.push_back(S[i] - S[i - 1]);
  }
  if (sums) *sums = S;
  return fit_log2_slope(x, y);
}

}  // namespace mpdo
