// Copyright 2026 The mpdo-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpdo/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mpdo/error.hpp"
#include "mpdo/parallel.hpp"

namespace mpdo {

const char* eval_path_name(EvalPath p) {
  switch (p) {
    case EvalPath::automatic:
      return "automatic";
    case EvalPath::direct:
      return "direct";
    case EvalPath::aggregated:
      return "aggregated";
    case EvalPath::modes:
      return "modes";
    case EvalPath::demodulated:
      return "demodulated";
  }
  return "?";
}

namespace {

// One term a(x) prod_j tau_j(xi_j) of a symbol. An empty tau entry means 1.
struct Mode {
  cplx coef = 1.0;
  Vec x_freq{0.0, 0.0};
  std::vector<std::function<cplx(const Vec&)>> tau;
};

bool has_modes(const SymbolSpec& s) {
  using K = SymbolSpec::Kind;
  return s.kind == K::constant || s.kind == K::separable || s.kind == K::band_limited || s.kind == K::lattice;
}

std::size_t mode_count(const SymbolSpec& s) {
  using K = SymbolSpec::Kind;
  switch (s.kind) {
    case K::band_limited:
      return s.coef.size();
    case K::lattice: {
      std::size_t c = 0;
      for (double v : s.V.values()) c += v != 0.0;
      return c;
    }
    default:
      return 1;
  }
}

std::vector<Mode> build_modes(const SymbolSpec& s) {
  using K = SymbolSpec::Kind;
  std::vector<Mode> modes;
  const int N = s.N;
  const int n = s.n;
  switch (s.kind) {
    case K::constant: {
      Mode m;
      m.coef = s.c;
      m.tau.resize(N);
      modes.push_back(std::move(m));
      break;
    }
    case K::separable: {
      Mode m;
      for (const auto& p : s.profiles)
        if (p.kind() == Profile::Kind::one)
          m.tau.emplace_back();
        else
          m.tau.emplace_back([p](const Vec& xi) { return p(xi); });
      modes.push_back(std::move(m));
      break;
    }
    case K::band_limited: {
      for (std::size_t i = 0; i < s.coef.size(); ++i) {
        Mode m;
        m.coef = s.coef[i];
        m.x_freq = s.alpha[i][0];
        for (int j = 0; j < N; ++j) {
          const Vec a = s.alpha[i][j + 1];
          m.tau.emplace_back([a, n](const Vec& xi) {
            return std::polar(band_window(xi, n), a[0] * xi[0] + a[1] * xi[1]);
          });
        }
        modes.push_back(std::move(m));
      }
      break;
    }
    case K::lattice: {
      std::vector<int> c(s.V.coords());
      for (std::size_t i = 0; i < s.V.size(); ++i) {
        const double v = s.V.values()[i];
        if (v == 0.0) continue;
        s.V.coords_of(i, c);
        Mode m;
        m.coef = v;
        for (int j = 0; j < N; ++j) {
          const Vec centre{double(c[j * n]), n == 2 ? double(c[j * n + 1]) : 0.0};
          m.tau.emplace_back([centre, n](const Vec& xi) {
            return cplx(lattice_bump({xi[0] - centre[0], xi[1] - centre[1]}, n), 0.0);
          });
        }
        modes.push_back(std::move(m));
      }
      break;
    }
    default:
      throw Error(Errc::type, "symbol has no mode form");
  }
  return modes;
}

double pow_size(const Grid& g, int times) { return std::pow(static_cast<double>(g.size()), times); }

double path_cost(const SymbolSpec& s, const Grid& g, EvalPath p) {
  const double mn = static_cast<double>(g.size());
  switch (p) {
    case EvalPath::direct:
      return mn * pow_size(g, s.N);
    case EvalPath::aggregated:
    case EvalPath::demodulated:
      return pow_size(g, s.N);
    case EvalPath::modes:
      return static_cast<double>(mode_count(s)) * s.N * mn * (std::log2(mn) + 1.0);
    default:
      return kInf;
  }
}

bool applicable(const SymbolSpec& s, EvalPath p) {
  switch (p) {
    case EvalPath::direct:
      return true;
    case EvalPath::aggregated:
      return s.x_independent();
    case EvalPath::modes:
      return has_modes(s);
    case EvalPath::demodulated:
      return s.kind == SymbolSpec::Kind::x_modulated;
    default:
      return false;
  }
}

void check_inputs(const SymbolSpec& s, std::span<const Field> f) {
  if (static_cast<int>(f.size()) != s.N) throw Error(Errc::shape, "evaluate needs exactly N input fields");
  for (const auto& fj : f) {
    if (!(fj.grid == f[0].grid)) throw Error(Errc::shape, "input fields must share one grid");
    if (fj.side != Side::physical) throw Error(Errc::type, "input fields must be physical-side");
  }
  if (f[0].grid.dim() != s.n) throw Error(Errc::shape, "symbol dimension does not match the grid");
}

// Wavenumber wrapped into [-M/2, M/2).
int wrap_wavenumber(int w, int M) {
  int r = ((w + M / 2) % M + M) % M;
  return r - M / 2;
}

// Per-input flat indices of tuple t (first input slowest).
void split_tuple(std::size_t t, std::size_t block, int count, std::size_t* out) {
  for (int j = count - 1; j >= 0; --j) {
    out[j] = t % block;
    t /= block;
  }
}

Field eval_direct(const SymbolSpec& s, const std::vector<Field>& fhat, const Grid& g) {
  const int N = s.N;
  const std::size_t B = g.size();
  std::size_t tuples = 1;
  for (int j = 0; j < N; ++j) tuples *= B;
  std::vector<Vec> freq(B);
  for (std::size_t k = 0; k < B; ++k) freq[k] = g.frequency_coord(k);
  const double scale = std::pow(1.0 / g.period(), N * g.dim());
  Field out(g, Side::physical);
  parallel_for(B, [&](std::size_t p) {
    const Vec x = g.physical_coord(p);
    std::vector<Vec> xi(N);
    std::size_t idx[3];
    PairwiseAccumulator<cplx> acc;
    for (std::size_t t = 0; t < tuples; ++t) {
      split_tuple(t, B, N, idx);
      cplx prod = 1.0;
      double ph = 0.0;
      for (int j = 0; j < N; ++j) {
        prod *= fhat[j].values[idx[j]];
        xi[j] = freq[idx[j]];
        ph += x[0] * xi[j][0] + x[1] * xi[j][1];
      }
      if (prod == cplx(0.0)) {
        acc.add(0.0);
        continue;
      }
      acc.add(std::polar(1.0, ph) * s(x, xi) * prod);
    }
    out.values[p] = scale * acc.total();
  });
  return out;
}

Field eval_aggregated(const SymbolSpec& s, const std::vector<Field>& fhat, const Grid& g) {
  const int N = s.N;
  const int n = g.dim();
  const int M = g.res();
  const std::size_t B = g.size();
  std::size_t tuples = 1;
  for (int j = 0; j + 1 < N; ++j) tuples *= B;
  std::vector<Vec> freq(B);
  for (std::size_t k = 0; k < B; ++k) freq[k] = g.frequency_coord(k);
  Field H(g, Side::frequency);
  const Vec origin{0.0, 0.0};
  parallel_for(B, [&](std::size_t K) {
    const auto kk = g.unflatten(K);
    std::vector<Vec> xi(N);
    std::size_t idx[3];
    PairwiseAccumulator<cplx> acc;
    for (std::size_t t = 0; t < tuples; ++t) {
      split_tuple(t, B, N - 1, idx);
      int w[2] = {kk[0] - M / 2, n == 2 ? kk[1] - M / 2 : 0};
      cplx prod = 1.0;
      for (int j = 0; j + 1 < N; ++j) {
        const auto ij = g.unflatten(idx[j]);
        w[0] -= ij[0] - M / 2;
        if (n == 2) w[1] -= ij[1] - M / 2;
        prod *= fhat[j].values[idx[j]];
        xi[j] = freq[idx[j]];
      }
      const int i0 = wrap_wavenumber(w[0], M) + M / 2;
      const int i1 = n == 2 ? wrap_wavenumber(w[1], M) + M / 2 : 0;
      const std::size_t last = g.flatten(i0, i1);
      prod *= fhat[N - 1].values[last];
      if (prod == cplx(0.0)) {
        acc.add(0.0);
        continue;
      }
      xi[N - 1] = freq[last];
      acc.add(s(origin, xi) * prod);
    }
    H.values[K] = acc.total();
  });
  Field out = inverse_transform(H);
  // Each of the other N - 1 frequency sums carries the measure (2 pi)^{-n} (2 pi / L)^n.
  const double scale = std::pow(1.0 / g.period(), (N - 1) * n);
  for (auto& v : out.values) v *= scale;
  return out;
}

Field eval_modes(const SymbolSpec& s, const std::vector<Field>& fhat, std::span<const Field> f, const Grid& g) {
  const auto modes = build_modes(s);
  const int N = s.N;
  const std::size_t B = g.size();
  std::vector<Vec> freq(B), pts(B);
  for (std::size_t k = 0; k < B; ++k) {
    freq[k] = g.frequency_coord(k);
    pts[k] = g.physical_coord(k);
  }
  Field out(g, Side::physical);
  constexpr std::size_t kBatch = 64;
  for (std::size_t start = 0; start < modes.size(); start += kBatch) {
    const std::size_t count = std::min(kBatch, modes.size() - start);
    std::vector<std::vector<cplx>> terms(count);
    parallel_for(count, [&](std::size_t b) {
      const Mode& m = modes[start + b];
      std::vector<cplx> prod(B, m.coef);
      if (m.x_freq[0] != 0.0 || m.x_freq[1] != 0.0)
        for (std::size_t p = 0; p < B; ++p) prod[p] *= std::polar(1.0, m.x_freq[0] * pts[p][0] + m.x_freq[1] * pts[p][1]);
      for (int j = 0; j < N; ++j) {
        if (!m.tau[j]) {
          for (std::size_t p = 0; p < B; ++p) prod[p] *= f[j].values[p];
          continue;
        }
        Field F = fhat[j];
        for (std::size_t k = 0; k < B; ++k) F.values[k] *= m.tau[j](freq[k]);
        const Field tj = inverse_transform(F);
        for (std::size_t p = 0; p < B; ++p) prod[p] *= tj.values[p];
      }
      terms[b] = std::move(prod);
    });
    for (std::size_t b = 0; b < count; ++b)
      for (std::size_t p = 0; p < B; ++p) out.values[p] += terms[b][p];
  }
  return out;
}

Field eval_demodulated(const SymbolSpec& s, const std::vector<Field>& fhat, const Grid& g) {
  const int N = s.N;
  const std::size_t B = g.size();
  std::size_t rest = 1;
  for (int j = 1; j < N; ++j) rest *= B;
  std::vector<Vec> freq(B);
  for (std::size_t k = 0; k < B; ++k) freq[k] = g.frequency_coord(k);
  std::vector<cplx> partial(B);
  parallel_for(B, [&](std::size_t k0) {
    if (fhat[0].values[k0] == cplx(0.0)) return;
    std::vector<Vec> xi(N);
    xi[0] = freq[k0];
    std::size_t idx[3];
    PairwiseAccumulator<cplx> acc;
    for (std::size_t t = 0; t < rest; ++t) {
      split_tuple(t, B, N - 1, idx);
      cplx prod = fhat[0].values[k0];
      for (int j = 1; j < N; ++j) {
        prod *= fhat[j].values[idx[j - 1]];
        xi[j] = freq[idx[j - 1]];
      }
      if (prod == cplx(0.0)) {
        acc.add(0.0);
        continue;
      }
      acc.add(s.tau(xi) * prod);
    }
    partial[k0] = acc.total();
  });
  const cplx C = std::pow(1.0 / g.period(), N * g.dim()) * pairwise_sum<cplx>(partial);
  Field out(g, Side::physical);
  for (std::size_t p = 0; p < B; ++p) out.values[p] = s.amp(g.physical_coord(p)) * C;
  return out;
}

}  // namespace

EvalPath select_path(const SymbolSpec& sigma, const Grid& g, const EvalOptions& opt) {
  if (opt.path != EvalPath::automatic) {
    if (!applicable(sigma, opt.path))
      throw Error(Errc::type, std::string("evaluation path '") + eval_path_name(opt.path) + "' does not apply to this symbol");
    return opt.path;
  }
  EvalPath best = EvalPath::direct;
  double best_cost = path_cost(sigma, g, best);
  for (EvalPath p : {EvalPath::demodulated, EvalPath::modes, EvalPath::aggregated}) {
    if (!applicable(sigma, p)) continue;
    const double c = path_cost(sigma, g, p);
    if (c < best_cost) {
      best = p;
      best_cost = c;
    }
  }
  return best;
}

Field evaluate(const SymbolSpec& sigma, std::span<const Field> f, const EvalOptions& opt) {
  check_inputs(sigma, f);
  const Grid& g = f[0].grid;
  const EvalPath path = select_path(sigma, g, opt);
  const double cost = path_cost(sigma, g, path);
  if (cost > opt.cost_cap)
    throw Error(Errc::cost_cap, std::string("path '") + eval_path_name(path) + "' needs about " +
                                    std::to_string(static_cast<long long>(cost)) + " inner evaluations");
  std::vector<Field> fhat;
  fhat.reserve(f.size());
  for (const auto& fj : f) fhat.push_back(forward_transform(fj));
  switch (path) {
    case EvalPath::direct:
      return eval_direct(sigma, fhat, g);
    case EvalPath::aggregated:
      return eval_aggregated(sigma, fhat, g);
    case EvalPath::modes:
      return eval_modes(sigma, fhat, f, g);
    case EvalPath::demodulated:
      return eval_demodulated(sigma, fhat, g);
    default:
      break;
  }
  throw Error(Errc::type, "no evaluation path");
}

Field evaluate_separable_fast(const SymbolSpec& sigma, std::span<const Field> f) {
  using K = SymbolSpec::Kind;
  if (sigma.kind != K::separable && sigma.kind != K::constant)
    throw Error(Errc::type, "evaluate_separable_fast needs a separable x-independent symbol");
  check_inputs(sigma, f);
  const Grid& g = f[0].grid;
  Field out(g, Side::physical);
  for (auto& v : out.values) v = sigma.kind == K::constant ? sigma.c : cplx(1.0);
  for (int j = 0; j < sigma.N; ++j) {
    if (sigma.kind == K::constant) {
      for (std::size_t p = 0; p < out.values.size(); ++p) out.values[p] *= f[j].values[p];
      continue;
    }
    const Profile& m = sigma.profiles[j];
    const Field mj = apply_multiplier(f[j], [&m](const Vec& xi) { return m(xi); });
    for (std::size_t p = 0; p < out.values.size(); ++p) out.values[p] *= mj.values[p];
  }
  return out;
}

}  // namespace mpdo
