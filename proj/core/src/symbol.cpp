// Copyright 2026 The mpdo-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpdo/symbol.hpp"

#include <cmath>

#include "mpdo/decomp.hpp"
#include "mpdo/error.hpp"
#include "mpdo/stats.hpp"

namespace mpdo {

namespace {

double sinc(double t) { return t == 0.0 ? 1.0 : std::sin(t) / t; }

}  // namespace

Profile Profile::one() { return Profile(); }

Profile Profile::gaussian(double width) {
  if (!(width > 0.0)) throw Error(Errc::parameter, "gaussian width must be positive");
  Profile p;
  p.kind_ = Kind::gaussian;
  p.width_ = width;
  p.label_ = "gaussian";
  return p;
}

Profile Profile::bumps(std::uint64_t seed, double band, int n) {
  if (!(band > 0.0)) throw Error(Errc::parameter, "bump band must be positive");
  Profile p;
  p.kind_ = Kind::bumps;
  p.label_ = "bumps";
  Rng rng(seed);
  std::uniform_real_distribution<double> centre(-band, band);
  std::uniform_real_distribution<double> spread(0.5, 2.0);
  for (int i = 0; i < 3; ++i) {
    p.coef_.push_back(complex_normal(rng));
    const double c0 = centre(rng);
    const double c1 = n == 2 ? centre(rng) : 0.0;
    p.centers_.push_back({c0, c1});
    p.widths_.push_back(spread(rng));
  }
  return p;
}

Profile Profile::field(Field values) {
  if (values.side != Side::frequency) throw Error(Errc::type, "profile field must be frequency-side");
  Profile p;
  p.kind_ = Kind::field;
  p.label_ = "field";
  p.field_ = std::make_shared<const Field>(std::move(values));
  return p;
}

Profile Profile::lp_shell(int k) {
  if (k < 0) throw Error(Errc::range, "shell index must be nonnegative");
  Profile p;
  p.kind_ = Kind::lp_shell;
  p.shell_ = k;
  p.label_ = "lp_shell";
  return p;
}

Profile Profile::function(std::function<cplx(const Vec&)> fn, std::string label) {
  Profile p;
  p.kind_ = Kind::function;
  p.fn_ = std::move(fn);
  p.label_ = std::move(label);
  return p;
}

cplx Profile::operator()(const Vec& xi) const {
  switch (kind_) {
    case Kind::one:
      return 1.0;
    case Kind::gaussian:
      return std::exp(-(xi[0] * xi[0] + xi[1] * xi[1]) / (2.0 * width_ * width_));
    case Kind::bumps: {
      cplx acc = 0.0;
      for (std::size_t i = 0; i < coef_.size(); ++i) {
        const double d0 = xi[0] - centers_[i][0];
        const double d1 = xi[1] - centers_[i][1];
        acc += coef_[i] * std::exp(-(d0 * d0 + d1 * d1) / (2.0 * widths_[i] * widths_[i]));
      }
      return acc;
    }
    case Kind::field: {
      const Grid& g = field_->grid;
      const int M = g.res();
      int idx[2] = {0, 0};
      for (int a = 0; a < g.dim(); ++a) {
        const long k = std::lround(xi[a] / g.freq_spacing());
        if (k < -M / 2 || k >= M / 2) return 0.0;
        idx[a] = static_cast<int>(k) + M / 2;
      }
      return field_->values[g.flatten(idx[0], idx[1])];
    }
    case Kind::lp_shell:
      return lp_psi(shell_, std::hypot(xi[0], xi[1]));
    case Kind::function:
      return fn_(xi);
  }
  return 0.0;
}

double band_window(const Vec& xi, int n) {
  const double a = n == 1 ? 1.0 / 8.0 : 1.0 / (8.0 * std::sqrt(2.0));
  double g = 1.0;
  for (int c = 0; c < n; ++c) g *= std::pow(sinc(a * xi[c]), 4);
  return g;
}

double lattice_bump(const Vec& t, int n) {
  double v = 1.0;
  for (int c = 0; c < n; ++c) v *= flat_bump(t[c], 0.25, 0.5);
  return v;
}

SymbolSpec SymbolSpec::constant(cplx value, int N, int n) {
  SymbolSpec s;
  s.kind = Kind::constant;
  s.c = value;
  s.N = N;
  s.n = n;
  s.family = "const";
  return s;
}

SymbolSpec SymbolSpec::separable(std::vector<Profile> m, int n) {
  if (m.empty() || m.size() > 3) throw Error(Errc::parameter, "separable symbol needs 1..3 profiles");
  SymbolSpec s;
  s.kind = Kind::separable;
  s.N = static_cast<int>(m.size());
  s.n = n;
  s.profiles = std::move(m);
  s.family = "separable";
  return s;
}

SymbolSpec SymbolSpec::band_limited(std::vector<double> radii, int n, std::uint64_t seed, int terms) {
  if (radii.size() < 2 || radii.size() > 4) throw Error(Errc::parameter, "band-limited symbol needs N + 1 radii");
  if (!(radii[0] >= 0.0)) throw Error(Errc::parameter, "x band radius must be nonnegative");
  for (std::size_t j = 1; j < radii.size(); ++j)
    if (!(radii[j] >= 0.5)) throw Error(Errc::parameter, "frequency band radii must be at least 1/2");
  if (terms < 1) throw Error(Errc::parameter, "band-limited symbol needs at least one term");
  SymbolSpec s;
  s.kind = Kind::band_limited;
  s.N = static_cast<int>(radii.size()) - 1;
  s.n = n;
  s.radii = std::move(radii);
  s.seed = seed;
  s.family = "band_limited";
  Rng rng(seed);
  for (int i = 0; i < terms; ++i) {
    s.coef.push_back(complex_normal(rng) / std::sqrt(static_cast<double>(terms)));
    std::vector<Vec> a(s.N + 1);
    for (int j = 0; j <= s.N; ++j) {
      const auto u = unit_ball_sample(rng, n);
      // The window G widens each xi-spectrum by 1/2, so frequencies shift by R_j - 1/2.
      const double scale = j == 0 ? s.radii[0] : s.radii[j] - 0.5;
      a[j] = {scale * u[0], n == 2 ? scale * u[1] : 0.0};
    }
    s.alpha.push_back(std::move(a));
  }
  return s;
}

SymbolSpec SymbolSpec::lattice(LatticeSeq V) {
  SymbolSpec s;
  s.kind = Kind::lattice;
  s.N = V.blocks();
  s.n = V.dim();
  s.V = std::move(V);
  s.family = "lattice";
  return s;
}

SymbolSpec SymbolSpec::x_modulated(std::function<cplx(const Vec&)> amp, std::function<cplx(std::span<const Vec>)> tau,
                                   int N, int n, std::string family) {
  SymbolSpec s;
  s.kind = Kind::x_modulated;
  s.N = N;
  s.n = n;
  s.amp = std::move(amp);
  s.tau = std::move(tau);
  s.family = std::move(family);
  return s;
}

SymbolSpec SymbolSpec::general(std::function<cplx(const Vec&, std::span<const Vec>)> fn, int N, int n,
                               bool x_independent, std::string family) {
  SymbolSpec s;
  s.kind = Kind::general;
  s.N = N;
  s.n = n;
  s.fn = std::move(fn);
  s.x_independent_fn = x_independent;
  s.family = std::move(family);
  return s;
}

bool SymbolSpec::x_independent() const {
  switch (kind) {
    case Kind::constant:
    case Kind::separable:
    case Kind::lattice:
      return true;
    case Kind::band_limited:
      return radii[0] == 0.0;
    case Kind::x_modulated:
      return false;
    case Kind::general:
      return x_independent_fn;
  }
  return false;
}

cplx SymbolSpec::operator()(const Vec& x, std::span<const Vec> xi) const {
  switch (kind) {
    case Kind::constant:
      return c;
    case Kind::separable: {
      cplx p = 1.0;
      for (int j = 0; j < N; ++j) p *= profiles[j](xi[j]);
      return p;
    }
    case Kind::band_limited: {
      double g = 1.0;
      for (int j = 0; j < N; ++j) g *= band_window(xi[j], n);
      cplx acc = 0.0;
      for (std::size_t i = 0; i < coef.size(); ++i) {
        double ph = alpha[i][0][0] * x[0] + alpha[i][0][1] * x[1];
        for (int j = 0; j < N; ++j) ph += alpha[i][j + 1][0] * xi[j][0] + alpha[i][j + 1][1] * xi[j][1];
        acc += coef[i] * std::polar(1.0, ph);
      }
      return acc * g;
    }
    case Kind::lattice: {
      std::vector<int> c(N * n);
      double bump = 1.0;
      for (int j = 0; j < N; ++j) {
        Vec t{0.0, 0.0};
        for (int a = 0; a < n; ++a) {
          const double r = std::round(xi[j][a]);
          c[j * n + a] = static_cast<int>(r);
          t[a] = xi[j][a] - r;
        }
        bump *= lattice_bump(t, n);
        if (bump == 0.0) return 0.0;
      }
      return V.get(c) * bump;
    }
    case Kind::x_modulated: {
      double ph = 0.0;
      for (int j = 0; j < N; ++j) ph -= x[0] * xi[j][0] + x[1] * xi[j][1];
      return amp(x) * std::polar(1.0, ph) * tau(xi);
    }
    case Kind::general:
      return fn(x, xi);
  }
  return 0.0;
}

}  // namespace mpdo
