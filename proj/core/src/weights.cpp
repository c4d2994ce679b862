// Copyright 2026 The mpdo-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpdo/weights.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "mpdo/error.hpp"
#include "mpdo/parallel.hpp"
#include "mpdo/stats.hpp"

namespace mpdo {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) throw Error(Errc::parameter, "bad number in weight id: '" + s + "'");
  return v;
}

double block_abs(std::span<const Vec> xi, int j, int n) {
  const Vec& v = xi[j];
  return n == 1 ? std::abs(v[0]) : std::hypot(v[0], v[1]);
}

int round_coord(double x) { return static_cast<int>(std::lround(x)); }

}  // namespace

WeightSpec WeightSpec::constant() { return WeightSpec(); }

WeightSpec WeightSpec::power(double m) {
  if (!(m <= 0.0)) throw Error(Errc::parameter, "power weight exponent must be <= 0");
  WeightSpec w;
  w.kind_ = Kind::power;
  w.m_ = m;
  return w;
}

WeightSpec WeightSpec::product(std::vector<double> a) {
  if (a.empty() || a.size() > 3) throw Error(Errc::parameter, "product weight needs 1..3 exponents");
  WeightSpec w;
  w.kind_ = Kind::product;
  w.exps_ = std::move(a);
  return w;
}

WeightSpec WeightSpec::lorentz_sample(LatticeSeq v) {
  WeightSpec w;
  w.kind_ = Kind::lorentz_sample;
  w.lat_ = std::move(v);
  return w;
}

WeightSpec WeightSpec::tabulated(LatticeSeq v) {
  WeightSpec w;
  w.kind_ = Kind::tabulated;
  w.lat_ = std::move(v);
  return w;
}

WeightSpec WeightSpec::lifted(LatticeSeq v, double m_lift) {
  if (!(m_lift > v.blocks() * v.dim()))
    throw Error(Errc::parameter, "lift exponent must exceed N n");
  WeightSpec w;
  w.kind_ = Kind::lifted;
  w.lat_ = std::move(v);
  w.m_lift_ = m_lift;
  return w;
}

WeightSpec WeightSpec::example_decay(int n, int N) { return power(-0.5 * (N - 1) * n); }

WeightSpec WeightSpec::parse(const std::string& id) {
  const auto colon = id.find(':');
  const std::string head = id.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : id.substr(colon + 1);
  if (head == "const" && colon == std::string::npos) return constant();
  if (head == "power" && !arg.empty()) return power(parse_double(arg));
  if (head == "product" && !arg.empty()) {
    std::vector<double> a;
    std::stringstream ss(arg);
    std::string tok;
    while (std::getline(ss, tok, ',')) a.push_back(parse_double(tok));
    return product(std::move(a));
  }
  if (head == "lorentz-sample" && !arg.empty()) {
    WeightSpec w = lorentz_sample(load_lattice_json(arg));
    w.source_ = arg;
    return w;
  }
  if (head == "table" && !arg.empty()) {
    WeightSpec w = tabulated(load_lattice_json(arg));
    w.source_ = arg;
    return w;
  }
  throw Error(Errc::parameter, "unknown weight id '" + id + "'");
}

std::string WeightSpec::id() const {
  switch (kind_) {
    case Kind::constant:
      return "const";
    case Kind::power:
      return "power:" + fmt_double(m_);
    case Kind::product: {
      std::string s = "product:";
      for (std::size_t i = 0; i < exps_.size(); ++i) s += (i ? "," : "") + fmt_double(exps_[i]);
      return s;
    }
    case Kind::lorentz_sample:
      return "lorentz-sample:" + source_;
    case Kind::tabulated:
      return "table:" + source_;
    case Kind::lifted:
      return "lifted:" + fmt_double(m_lift_);
  }
  return "";
}

int WeightSpec::arity() const {
  switch (kind_) {
    case Kind::product:
      return static_cast<int>(exps_.size());
    case Kind::lorentz_sample:
    case Kind::tabulated:
    case Kind::lifted:
      return lat_.blocks();
    default:
      return 0;
  }
}

double WeightSpec::operator()(std::span<const Vec> xi, int n) const {
  const int N = static_cast<int>(xi.size());
  if (arity() != 0 && arity() != N) throw Error(Errc::shape, "weight arity does not match the symbol");
  if ((kind_ == Kind::lorentz_sample || kind_ == Kind::tabulated || kind_ == Kind::lifted) && lat_.dim() != n)
    throw Error(Errc::shape, "weight lattice dimension mismatch");
  switch (kind_) {
    case Kind::constant:
      return 1.0;
    case Kind::power: {
      double s = 1.0;
      for (int j = 0; j < N; ++j) s += block_abs(xi, j, n);
      return std::pow(s, m_);
    }
    case Kind::product: {
      double p = 1.0;
      for (int j = 0; j < N; ++j) p *= std::pow(1.0 + block_abs(xi, j, n), -exps_[j]);
      return p;
    }
    case Kind::lorentz_sample:
    case Kind::tabulated: {
      std::vector<int> c(N * n);
      for (int j = 0; j < N; ++j)
        for (int a = 0; a < n; ++a) c[j * n + a] = round_coord(xi[j][a]);
      return lat_.get(c);
    }
    case Kind::lifted: {
      std::vector<int> c(lat_.coords());
      double acc = 0.0;
      for (std::size_t i = 0; i < lat_.size(); ++i) {
        const double v = lat_.values()[i];
        if (v == 0.0) continue;
        lat_.coords_of(i, c);
        double d2 = 0.0;
        for (int j = 0; j < N; ++j)
          for (int a = 0; a < n; ++a) {
            const double d = xi[j][a] - c[j * n + a];
            d2 += d * d;
          }
        acc += v * std::pow(1.0 + d2, -0.5 * m_lift_);
      }
      return acc;
    }
  }
  return 0.0;
}

LatticeSeq WeightSpec::restrict_to_lattice(int n, int N, int radius) const {
  LatticeSeq out(n, radius, N);
  std::vector<int> c(out.coords());
  std::vector<Vec> xi(N);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.coords_of(i, c);
    for (int j = 0; j < N; ++j) xi[j] = {double(c[j * n]), n == 2 ? double(c[j * n + 1]) : 0.0};
    const double v = (*this)(xi, n);
    if (!(v >= 0.0)) throw Error(Errc::parameter, "weight takes a negative or undefined lattice value");
    out.values()[i] = v;
  }
  return out;
}

LatticeSeq load_lattice_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot open lattice file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
    LatticeSeq v(j.at("dim").get<int>(), j.at("radius").get<int>(), j.at("blocks").get<int>());
    const auto vals = j.at("values").get<std::vector<double>>();
    if (vals.size() != v.size()) throw Error(Errc::shape, "lattice file value count mismatch");
    for (double x : vals)
      if (!(x >= 0.0)) throw Error(Errc::parameter, "lattice file holds a negative value");
    v.values() = vals;
    return v;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parameter, "malformed lattice file '" + path + "': " + e.what());
  }
}

void save_lattice_json(const LatticeSeq& v, const std::string& path) {
  nlohmann::json j;
  j["dim"] = v.dim();
  j["radius"] = v.radius();
  j["blocks"] = v.blocks();
  j["values"] = v.values();
  std::ofstream out(path);
  if (!out) throw Error(Errc::io, "cannot write lattice file '" + path + "'");
  out << j.dump() << "\n";
}

double bn_form_value(const LatticeSeq& V, std::span<const LatticeSeq> A) {
  const int N = V.blocks();
  const int n = V.dim();
  if (static_cast<int>(A.size()) != N + 1) throw Error(Errc::shape, "form needs N + 1 test sequences");
  for (const auto& a : A)
    if (a.blocks() != 1 || a.dim() != n) throw Error(Errc::shape, "test sequences must be single-block of the weight dim");
  std::vector<int> c(V.coords()), sum(n), blk(n);
  PairwiseAccumulator<double> acc;
  for (std::size_t i = 0; i < V.size(); ++i) {
    const double v = V.values()[i];
    if (v == 0.0) continue;
    V.coords_of(i, c);
    double term = v;
    std::fill(sum.begin(), sum.end(), 0);
    for (int j = 0; j < N && term != 0.0; ++j) {
      for (int a = 0; a < n; ++a) {
        blk[a] = c[j * n + a];
        sum[a] += blk[a];
      }
      term *= A[j + 1].get(blk);
    }
    if (term != 0.0) term *= A[0].get(sum);
    acc.add(term);
  }
  return acc.total();
}

namespace {

// Sparse view of the form: one entry per nonzero V(nu) with the flat index of
// nu_j in block j's test vector (block 0 is the sum).
struct FormTerms {
  int N = 0;
  std::vector<double> v;
  std::vector<std::vector<std::size_t>> idx;  // idx[j][t]
  std::vector<std::size_t> sizes;             // test vector length per block
};

FormTerms build_terms(const LatticeSeq& V, int radius) {
  const int N = V.blocks();
  const int n = V.dim();
  FormTerms f;
  f.N = N;
  f.idx.resize(N + 1);
  LatticeSeq a0(n, N * radius, 1), aj(n, radius, 1);
  f.sizes.push_back(a0.size());
  for (int j = 0; j < N; ++j) f.sizes.push_back(aj.size());
  LatticeSeq trunc(n, radius, N);
  std::vector<int> c(trunc.coords()), sum(n), blk(n);
  for (std::size_t i = 0; i < trunc.size(); ++i) {
    trunc.coords_of(i, c);
    const double v = V.get(c);
    if (v == 0.0) continue;
    if (!std::isfinite(v)) throw Error(Errc::parameter, "weight value is not finite");
    std::fill(sum.begin(), sum.end(), 0);
    f.v.push_back(v);
    for (int j = 0; j < N; ++j) {
      for (int a = 0; a < n; ++a) {
        blk[a] = c[j * n + a];
        sum[a] += blk[a];
      }
      f.idx[j + 1].push_back(aj.index_of(blk));
    }
    f.idx[0].push_back(a0.index_of(sum));
  }
  return f;
}

// Partial-sum coefficients of block j with every other block fixed.
std::vector<double> partial_coefficients(const FormTerms& f, const std::vector<std::vector<double>>& A, int j) {
  std::vector<double> g(f.sizes[j], 0.0);
  for (std::size_t t = 0; t < f.v.size(); ++t) {
    double p = f.v[t];
    for (int l = 0; l <= f.N && p != 0.0; ++l)
      if (l != j) p *= A[l][f.idx[l][t]];
    g[f.idx[j][t]] += p;
  }
  return g;
}

double l2(const std::vector<double>& g) {
  std::vector<double> sq(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) sq[i] = g[i] * g[i];
  return std::sqrt(pairwise_sum<double>(sq));
}

// Cyclic closed-form block updates A_0, A_1, ..., A_N.
void alternate(const FormTerms& f, std::vector<std::vector<double>>& A, const BnOptions& opt, BnEstimate& est) {
  double prev = 0.0;
  for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
    double value = 0.0;
    for (int j = 0; j <= f.N; ++j) {
      auto g = partial_coefficients(f, A, j);
      value = l2(g);
      if (!std::isfinite(value)) {
        est.infinite = true;
        est.value = kInf;
        return;
      }
      if (value == 0.0) {
        est.value = 0.0;
        est.converged = true;
        est.iterations = sweep + 1;
        est.trace.push_back(0.0);
        return;
      }
      for (auto& x : g) x /= value;
      A[j] = std::move(g);
    }
    est.trace.push_back(value);
    est.iterations = sweep + 1;
    est.value = std::max(est.value, value);
    if (sweep > 0 && value - prev <= opt.rel_tol * value) {
      est.converged = true;
      return;
    }
    prev = value;
  }
}

std::vector<std::vector<double>> uniform_start(const FormTerms& f) {
  std::vector<std::vector<double>> A(f.N + 1);
  for (int j = 0; j <= f.N; ++j) A[j].assign(f.sizes[j], 1.0 / std::sqrt(static_cast<double>(f.sizes[j])));
  return A;
}

// Top singular value of the nonnegative matrix pairing A_0 with A_N, and
// the corresponding unit vectors.
double top_pair(const FormTerms& f, const std::vector<std::vector<double>>& A, std::vector<double>& u,
                std::vector<double>& w) {
  const int N = f.N;
  const std::size_t n0 = f.sizes[0], nN = f.sizes[N];
  std::vector<double> B(n0 * nN, 0.0);
  for (std::size_t t = 0; t < f.v.size(); ++t) {
    double p = f.v[t];
    for (int l = 1; l < N && p != 0.0; ++l) p *= A[l][f.idx[l][t]];
    B[f.idx[0][t] * nN + f.idx[N][t]] += p;
  }
  w.assign(nN, 1.0 / std::sqrt(static_cast<double>(nN)));
  u.assign(n0, 0.0);
  double sigma = 0.0;
  for (int it = 0; it < 500; ++it) {
    std::fill(u.begin(), u.end(), 0.0);
    for (std::size_t i = 0; i < n0; ++i)
      for (std::size_t k = 0; k < nN; ++k) u[i] += B[i * nN + k] * w[k];
    const double nu = l2(u);
    if (nu == 0.0) return 0.0;
    for (auto& x : u) x /= nu;
    std::vector<double> w2(nN, 0.0);
    for (std::size_t i = 0; i < n0; ++i)
      for (std::size_t k = 0; k < nN; ++k) w2[k] += B[i * nN + k] * u[i];
    const double nw = l2(w2);
    for (auto& x : w2) x /= nw;
    w = std::move(w2);
    const bool done = std::abs(nw - sigma) <= 1e-15 * nw;
    sigma = nw;
    if (done) break;
  }
  return sigma;
}

}  // namespace

BnEstimate bn_constant_estimate(const LatticeSeq& V, int radius, BnMethod method, const BnOptions& opt) {
  if (radius < 0) throw Error(Errc::parameter, "radius must be nonnegative");
  const FormTerms f = build_terms(V, radius);
  BnEstimate est;
  est.radius = radius;
  est.method = method;
  if (method == BnMethod::alternating) {
    auto A = uniform_start(f);
    alternate(f, A, opt, est);
    return est;
  }

  // Brute force: enumerate {0, 1/K, ..., 1} profiles of the inner blocks
  // A_1..A_{N-1}; the outer pair is solved exactly as a singular value.
  const int N = f.N;
  const int levels = opt.brute_levels + 1;
  std::size_t inner_pts = 0;
  for (int j = 1; j < N; ++j) inner_pts += f.sizes[j];
  const double count = std::pow(static_cast<double>(levels), static_cast<double>(inner_pts));
  if (count > opt.brute_cap) throw Error(Errc::cost_cap, "brute-force profile count exceeds the cap");
  const std::size_t total = static_cast<std::size_t>(count);
  std::vector<double> vals(total, -1.0);
  parallel_for(total, [&](std::size_t p) {
    std::vector<std::vector<double>> A(N + 1);
    std::size_t rem = p;
    for (int j = 1; j < N; ++j) {
      A[j].resize(f.sizes[j]);
      for (auto& x : A[j]) {
        x = static_cast<double>(rem % levels) / opt.brute_levels;
        rem /= levels;
      }
      const double nrm = l2(A[j]);
      if (nrm == 0.0) return;
      for (auto& x : A[j]) x /= nrm;
    }
    std::vector<double> u, w;
    vals[p] = top_pair(f, A, u, w);
  });
  std::size_t best = 0;
  for (std::size_t p = 1; p < total; ++p)
    if (vals[p] > vals[best]) best = p;

  std::vector<std::vector<double>> A(N + 1);
  std::size_t rem = best;
  for (int j = 1; j < N; ++j) {
    A[j].resize(f.sizes[j]);
    for (auto& x : A[j]) {
      x = static_cast<double>(rem % levels) / opt.brute_levels;
      rem /= levels;
    }
    const double nrm = l2(A[j]);
    if (nrm > 0.0)
      for (auto& x : A[j]) x /= nrm;
  }
  const double grid_value = std::max(vals[best], 0.0);
  top_pair(f, A, A[0], A[N]);
  est.value = grid_value;
  est.trace.push_back(grid_value);
  if (grid_value > 0.0) alternate(f, A, opt, est);
  est.value = std::max(est.value, grid_value);
  est.converged = true;
  return est;
}

ModerateResult moderate_check(const WeightSpec& W, int n, int N, int sample_count, double box_radius,
                              std::uint64_t seed) {
  if (sample_count < 1 || !(box_radius > 0.0)) throw Error(Errc::parameter, "moderate_check needs samples and a box");
  Rng rng(seed);
  std::uniform_real_distribution<double> ud(-box_radius, box_radius);
  std::vector<double> d(sample_count), l(sample_count);
  std::vector<Vec> xi(N), sum(N), eta(N);
  for (int s = 0; s < sample_count; ++s) {
    double e2 = 0.0;
    for (int j = 0; j < N; ++j) {
      xi[j] = {ud(rng), n == 2 ? ud(rng) : 0.0};
      eta[j] = {ud(rng), n == 2 ? ud(rng) : 0.0};
      sum[j] = {xi[j][0] + eta[j][0], xi[j][1] + eta[j][1]};
      e2 += eta[j][0] * eta[j][0] + eta[j][1] * eta[j][1];
    }
    const double a = W(sum, n);
    const double b = W(xi, n);
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) return {kInf, kInf, false};
    d[s] = std::log(a) - std::log(b);
    l[s] = 0.5 * std::log1p(e2);
  }
  for (int step = 0; step <= 10000; ++step) {
    const double M = 0.01 * step;
    double log_c = -kInf;
    for (int s = 0; s < sample_count; ++s) log_c = std::max(log_c, d[s] - M * l[s]);
    if (log_c <= (M + 1.0) * std::log(2.0) + 1e-12) return {std::exp(log_c), M, true};
  }
  return {kInf, kInf, false};
}

WeightSpec v_star_lift(const LatticeSeq& V, double m_lift) { return WeightSpec::lifted(V, m_lift); }

LatticeSeq block_transform(const LatticeSeq& V, int j) {
  const int N = V.blocks();
  const int n = V.dim();
  if (N < 2) throw Error(Errc::parameter, "block transform needs N >= 2");
  if (j < 1 || j > N) throw Error(Errc::range, "block index out of range");
  LatticeSeq out(n, V.radius(), N);
  std::vector<int> c(out.coords()), src(out.coords());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.coords_of(i, c);
    for (int a = 0; a < n; ++a) {
      int s = 0;
      for (int b = 0; b < N; ++b) s += c[b * n + a];
      for (int b = 0; b < N; ++b) src[b * n + a] = (b == j - 1) ? s : -c[b * n + a];
    }
    out.values()[i] = V.get(src);
  }
  return out;
}

double transform_closure_check(const LatticeSeq& V, int j, int radius) {
  const double base = bn_constant_estimate(V, radius, BnMethod::alternating).value;
  const double moved = bn_constant_estimate(block_transform(V, j), radius, BnMethod::alternating).value;
  if (base == 0.0) return moved == 0.0 ? 1.0 : kInf;
  return moved / base;
}

double transform_closure_check(const WeightSpec& W, int n, int N, int j, int radius) {
  const LatticeSeq wide = W.restrict_to_lattice(n, N, N * radius);
  const LatticeSeq moved = truncate(block_transform(wide, j), radius);
  const double base = bn_constant_estimate(wide, radius, BnMethod::alternating).value;
  const double other = bn_constant_estimate(moved, radius, BnMethod::alternating).value;
  if (base == 0.0) return other == 0.0 ? 1.0 : kInf;
  return other / base;
}

LatticeSeq tensor_product(const LatticeSeq& V, const LatticeSeq& Vp) {
  if (V.blocks() != Vp.blocks()) throw Error(Errc::shape, "tensor factors need the same block count");
  if (V.dim() + Vp.dim() > 2) throw Error(Errc::parameter, "tensor product dimension exceeds 2");
  const int N = V.blocks();
  const int R = std::min(V.radius(), Vp.radius());
  LatticeSeq out(2, R, N);
  std::vector<int> c(out.coords()), a(N), b(N);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.coords_of(i, c);
    for (int j = 0; j < N; ++j) {
      a[j] = c[2 * j];
      b[j] = c[2 * j + 1];
    }
    out.values()[i] = V.get(a) * Vp.get(b);
  }
  return out;
}

}  // namespace mpdo
