// Copyright 2026 The mpdo-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>

#include "config_detail.hpp"
#include "mpdo/bound.hpp"
#include "mpdo/decomp.hpp"
#include "mpdo/error.hpp"
#include "mpdo/evaluate.hpp"
#include "mpdo/field_io.hpp"
#include "mpdo/norms.hpp"
#include "mpdo/sharpness.hpp"
#include "mpdo/stats.hpp"
#include "mpdo/weights.hpp"
#include "mpdo_cli/cli.hpp"

namespace mpdo::cli {

using detail::extended;
using nlohmann::json;

namespace {

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h = 0xcbf29ce484222325ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string field_checksum(const Field& f) {
  return hex64(fnv1a(f.values.data(), f.values.size() * sizeof(cplx)));
}

double real_of(const json& v) { return detail::Section::to_real(v, "<echo>"); }

std::vector<double> reals_of(const json& v) {
  std::vector<double> out;
  for (const auto& x : v) out.push_back(real_of(x));
  return out;
}

EvalOptions eval_options(const json& params) {
  static const std::map<std::string, EvalPath> paths = {{"automatic", EvalPath::automatic},
                                                        {"direct", EvalPath::direct},
                                                        {"aggregated", EvalPath::aggregated},
                                                        {"modes", EvalPath::modes},
                                                        {"demodulated", EvalPath::demodulated}};
  EvalOptions opt;
  opt.path = paths.at(params.at("path").get<std::string>());
  opt.cost_cap = real_of(params.at("cost_cap"));
  return opt;
}

Profile make_profile(const json& p, int n) {
  const auto id = p.at("id").get<std::string>();
  if (id == "one") return Profile::one();
  if (id == "gaussian") return Profile::gaussian(real_of(p.at("width")));
  if (id == "bumps") return Profile::bumps(p.at("seed").get<std::uint64_t>(), real_of(p.at("band")), n);
  return Profile::lp_shell(p.at("k").get<int>());
}

SymbolSpec make_symbol(const json& s, const RunConfig& cfg, double scale = 1.0) {
  const auto id = s.at("id").get<std::string>();
  const int n = cfg.grid.dim();
  if (id == "const") {
    const json& c = s.at("c");
    const cplx v = c.is_array() ? cplx(c[0].get<double>(), c[1].get<double>()) : cplx(c.get<double>(), 0.0);
    return SymbolSpec::constant(v, cfg.N, n);
  }
  if (id == "separable") {
    std::vector<Profile> prof;
    for (const auto& p : s.at("profiles")) prof.push_back(make_profile(p, n));
    return SymbolSpec::separable(std::move(prof), n);
  }
  if (id == "band-limited") {
    auto radii = reals_of(s.at("radii"));
    for (auto& r : radii) r *= scale;
    return SymbolSpec::band_limited(radii, n, s.at("seed").get<std::uint64_t>(), s.at("terms").get<int>());
  }
  if (id == "lattice") {
    const WeightSpec W = WeightSpec::parse(s.at("weight").get<std::string>());
    return build_lattice_symbol(W.restrict_to_lattice(n, cfg.N, s.at("radius").get<int>()), cfg.grid);
  }
  return SymbolSpec::x_modulated([](const Vec&) { return cplx(1.0, 0.0); },
                                 [](std::span<const Vec>) { return cplx(1.0, 0.0); }, cfg.N, n, "kernel-phase");
}

std::vector<Field> make_functions(const json& arr, const RunConfig& cfg) {
  std::vector<Field> out;
  const Grid& g = cfg.grid;
  for (const auto& item : arr) {
    const auto kind = item.at("kind").get<std::string>();
    if (kind == "trig") {
      Rng rng(item.at("seed").get<std::uint64_t>());
      out.push_back(random_trig_polynomial(g, real_of(item.at("band")), rng));
    } else if (kind == "gaussian") {
      const double w = real_of(item.at("width"));
      const auto c = reals_of(item.at("center"));
      out.push_back(Field::sample(g, [&](const Vec& x) {
        double r2 = 0.0;
        for (int a = 0; a < g.dim(); ++a) r2 += (x[a] - c[a]) * (x[a] - c[a]);
        return cplx(std::exp(-0.5 * r2 / (w * w)), 0.0);
      }));
    } else {
      const auto path = item.at("path").get<std::string>();
      Field f = read_field(path);
      if (!(f.grid == g) || f.side != Side::physical)
        throw Error(Errc::shape, "field file " + path + " does not match the configured grid");
      out.push_back(std::move(f));
    }
  }
  return out;
}

json fit_json(const SlopeFit& f) { return json{{"slope", f.slope}, {"intercept", f.intercept}, {"residual", f.residual}}; }

void run_eval(const RunConfig& cfg, ResultRecord& rec, json& res) {
  const json& e = cfg.echo;
  const SymbolSpec sigma = make_symbol(e.at("symbol"), cfg);
  const auto f = make_functions(e.at("functions"), cfg);
  const EvalOptions opt = eval_options(e.at("params"));
  const Field T = evaluate(sigma, f, opt);
  res["path"] = eval_path_name(select_path(sigma, cfg.grid, opt));
  res["output_l2"] = lebesgue_norm(T, 2.0);
  res["output_sup"] = lebesgue_norm(T, kInf);
  res["output_checksum"] = field_checksum(T);
  res["output_file"] = "output.fld";
  rec.fields.push_back({"output.fld", T});
}

void run_norm(const RunConfig& cfg, ResultRecord& rec, json& res) {
  const json& e = cfg.echo;
  const json& prm = e.at("params");
  const auto fs = make_functions(e.at("functions"), cfg);
  const auto ps = reals_of(prm.at("p"));
  const auto qs = reals_of(prm.at("q"));
  const KernelParams kp{real_of(prm.at("L_exp"))};
  const bool aligned = cfg.grid.cube_aligned();
  const int n = cfg.grid.dim();
  Table& t = rec.table;
  t.columns = {"function", "norm", "p", "q", "value"};
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const Field& f = fs[i];
    for (double p : ps) t.rows.push_back(json::array({i, "lebesgue", extended(p), "", lebesgue_norm(f, p)}));
    if (aligned) {
      for (double p : ps)
        for (double q : qs) t.rows.push_back(json::array({i, "amalgam", extended(p), extended(q), amalgam_norm(f, {p, q})}));
      t.rows.push_back(json::array({i, "l2_ul", 2.0, "inf", l2_ul_norm(f)}));
      t.rows.push_back(json::array({i, "bmo", "", "", bmo_discrete_norm(f)}));
    }
    for (double p : ps)
      if (std::min(1.0, p / 2.0) * kp.L_exp > n)
        t.rows.push_back(json::array({i, "sqrt_s_square", extended(p), "", sqrt_s_square_norm(f, p, kp)}));
  }
  res["cube_aligned"] = aligned;
  res["functions"] = fs.size();
  if (!aligned) res["note"] = "period does not align unit cubes with the grid; amalgam norms omitted";
}

void run_weight_test(const RunConfig& cfg, ResultRecord& rec, json& res) {
  const json& e = cfg.echo;
  const json& prm = e.at("params");
  const WeightSpec W = WeightSpec::parse(e.at("weight").get<std::string>());
  const int n = cfg.grid.dim();
  const BnMethod method = prm.at("method").get<std::string>() == "brute" ? BnMethod::brute : BnMethod::alternating;
  BnOptions bo;
  bo.max_sweeps = prm.at("max_sweeps").get<int>();
  bo.rel_tol = real_of(prm.at("rel_tol"));
  Table& t = rec.table;
  t.columns = {"radius", "constant", "iterations", "converged"};
  t.x_label = "truncation radius M";
  t.y_label = "estimated constant";
  t.log_x = t.log_y = true;
  std::vector<double> xs, ys;
  bool infinite = false;
  for (long long R : prm.at("radii").get<std::vector<long long>>()) {
    const LatticeSeq V = W.restrict_to_lattice(n, cfg.N, static_cast<int>(R));
    const BnEstimate est = bn_constant_estimate(V, static_cast<int>(R), method, bo);
    infinite = infinite || est.infinite;
    t.rows.push_back(json::array({R, extended(est.value), est.iterations, est.converged}));
    xs.push_back(static_cast<double>(R));
    ys.push_back(est.value);
  }
  res["infinite"] = infinite;
  if (xs.size() >= 2 && !infinite) {
    const SlopeFit fit = fit_log2_slope(xs, ys);
    res["slope"] = fit_json(fit);
    res["last_relative_change"] = ys.back() / ys[ys.size() - 2] - 1.0;
    t.footer.push_back(json::array({"slope", fit.slope, fit.residual, ""}));
  }
  const int samples = prm.at("moderate_samples").get<int>();
  if (samples > 0) {
    const ModerateResult mr =
        moderate_check(W, n, cfg.N, samples, real_of(prm.at("moderate_box")), derive_seed(cfg.seed, 0x40d));
    res["moderate"] = json{{"C_est", extended(mr.C_est)}, {"M_est", extended(mr.M_est)}, {"pass", mr.pass}};
  }
  const int slot = prm.at("closure_slot").get<int>();
  if (slot > 0) {
    const int R = static_cast<int>(xs.front());
    res["closure_ratio"] = json{{"slot", slot}, {"radius", R},
                                {"ratio", extended(transform_closure_check(W, n, cfg.N, slot, R))}};
  }
}

void run_decomp_check(const RunConfig& cfg, ResultRecord&, json& res) {
  const json& prm = cfg.echo.at("params");
  const PartitionReport r = partition_diagnostics(cfg.grid, prm.at("samples").get<int>(), derive_seed(cfg.seed, 0xdec));
  res["K_max"] = r.K_max;
  res["lp_residual"] = r.lp_residual;
  res["lp_support_leak"] = r.lp_support_leak;
  res["pair_residual"] = r.pair_residual;
  res["kappa_leak"] = r.kappa_leak;
  res["chi_leak"] = r.chi_leak;
  res["c_lower"] = r.c_lower;
}

void run_bound(const RunConfig& cfg, ResultRecord& rec, json& res) {
  const json& e = cfg.echo;
  const json& prm = e.at("params");
  const auto q = reals_of(e.at("exponents").at("q"));
  const double r = real_of(e.at("exponents").at("r"));
  const WeightSpec W = WeightSpec::parse(e.at("weight").get<std::string>());
  const auto scales = reals_of(prm.at("scales"));
  const bool band = e.at("symbol").at("id") == "band-limited";
  if (!band && (scales.size() != 1 || scales[0] != 1.0))
    throw ConfigError("params.scales", "radius scaling needs a band-limited symbol; use [1]");
  const EvalOptions opt = eval_options(prm);
  const TestFamily fam{real_of(prm.at("band_fraction")), derive_seed(cfg.seed, 0xb0d)};
  const int trials = prm.at("trials").get<int>();
  const int n = cfg.grid.dim();

  Table& t = rec.table;
  t.columns = {"scale", "sup_ratio", "bound_factor", "symbol_norm", "bound_value", "constant", "skipped"};
  t.x_label = "radius scale";
  t.y_label = "empirical sup ratio";
  t.log_x = t.log_y = true;
  std::vector<double> sups, consts;
  for (double sc : scales) {
    const SymbolSpec sigma = make_symbol(e.at("symbol"), cfg, sc);
    const BoundednessReport rep = empirical_bound(sigma, q, r, cfg.grid, fam, trials, &W, opt);
    t.rows.push_back(json::array({sc, rep.sup_ratio, rep.bound_factor, rep.symbol_norm, rep.bound_value, rep.constant,
                                  rep.skipped}));
    sups.push_back(rep.sup_ratio);
    consts.push_back(rep.constant);
  }
  double exponent = 0.5 * n;
  for (double v : q) exponent += n / std::min(2.0, v);
  res["predicted_exponent"] = exponent;
  if (scales.size() >= 2) {
    const SlopeFit fit = fit_log2_slope(scales, sups);
    res["sup_slope"] = fit_json(fit);
    t.footer.push_back(json::array({"slope", fit.slope, fit.residual, "", "", "", ""}));
    double worst = 0.0;
    for (std::size_t i = 1; i < sups.size(); ++i)
      worst = std::max(worst, std::log2(sups[i] / sups[i - 1]) / std::log2(scales[i] / scales[i - 1]));
    res["max_step_exponent"] = worst;
  }
  if (band) {
    res["constant_min"] = *std::min_element(consts.begin(), consts.end());
    res["constant_max"] = *std::max_element(consts.begin(), consts.end());
  }
  res["note"] = "sampled ratios on the torus; the sup is a lower estimate of the operator norm";
}

void run_sharpness(const RunConfig& cfg, ResultRecord& rec, json& res) {
  const json& e = cfg.echo;
  const json& prm = e.at("params");
  Table& t = rec.table;
  const int n = cfg.grid.dim();
  if (prm.at("experiment") == "growth") {
    const SlotFamily fam = prm.at("family") == "all_slots" ? SlotFamily::all_slots : SlotFamily::single_slot;
    const double r = real_of(e.at("exponents").at("r"));
    std::vector<int> a;
    for (long long v : prm.at("a").get<std::vector<long long>>()) a.push_back(static_cast<int>(v));
    const GrowthReport rep = prop74_growth_experiment(a, fam, cfg.N, r, cfg.grid, eval_options(prm));
    t.columns = {"a", "norm", "T0_re", "T0_im"};
    t.x_label = "dilation a";
    t.y_label = "restricted output norm";
    t.log_y = true;
    for (const auto& p : rep.points) t.rows.push_back(json::array({p.a, p.norm, p.T0.real(), p.T0.imag()}));
    t.footer.push_back(json::array({"slope", rep.fit.slope, rep.fit.residual, rep.expected_slope}));
    res["slope"] = fit_json(rep.fit);
    res["expected_slope"] = rep.expected_slope;
    res["delta"] = rep.delta;
  } else {
    const double m = real_of(prm.at("m"));
    const double s0 = real_of(prm.at("s0"));
    const auto b = reals_of(prm.at("b"));
    std::vector<int> K;
    for (long long v : prm.at("K").get<std::vector<long long>>()) K.push_back(static_cast<int>(v));
    std::vector<double> sums;
    const SlopeFit fit = prop73_increment_slope(m, s0, b, n, K, &sums);
    t.columns = {"K", "partial_sum"};
    t.x_label = "truncation K";
    t.y_label = "coefficient partial sum";
    t.log_x = t.log_y = true;
    for (std::size_t i = 0; i < K.size(); ++i) t.rows.push_back(json::array({K[i], sums[i]}));
    t.footer.push_back(json::array({"increment_slope", fit.slope}));
    res["increment_slope"] = fit_json(fit);
    res["expected_exponent"] = prop73_exponent(m, s0, b, n);
    res["last_relative_change"] = sums.back() / sums[sums.size() - 2] - 1.0;
  }
}

void run_dk(const RunConfig& cfg, ResultRecord& rec, json& res) {
  const json& prm = cfg.echo.at("params");
  const int n = cfg.grid.dim();
  const double m = real_of(prm.at("m"));
  const auto b = reals_of(prm.at("b"));
  const LatticeSeq d = compute_dk(m, b, prm.at("K").get<int>(), n, cfg.N, prm.at("inner").get<int>(),
                                  real_of(prm.at("cost_cap")));
  Table& t = rec.table;
  t.columns = n == 1 ? std::vector<std::string>{"k", "d_k"} : std::vector<std::string>{"k1", "k2", "d_k"};
  t.x_label = "k";
  t.y_label = "d_k";
  t.log_y = true;
  int c[2];
  for (std::size_t i = 0; i < d.size(); ++i) {
    d.coords_of(i, std::span<int>(c, n));
    if (n == 1) t.rows.push_back(json::array({c[0], d.values()[i]}));
    else t.rows.push_back(json::array({c[0], c[1], d.values()[i]}));
  }
  const SlopeFit fit = dk_slope(d);
  double expected = m + (cfg.N - 1) * n;
  for (double v : b) expected -= v;
  res["slope"] = fit_json(fit);
  res["expected_slope"] = expected;
  json foot = json::array({"slope", fit.slope});
  if (n == 2) foot.push_back("");
  t.footer.push_back(foot);
}

}  // namespace

ResultRecord run(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  ResultRecord rec;
  json res = json::object();
  const std::string& c = cfg.command;
  if (c == "eval") run_eval(cfg, rec, res);
  else if (c == "norm") run_norm(cfg, rec, res);
  else if (c == "weight-test") run_weight_test(cfg, rec, res);
  else if (c == "decomp-check") run_decomp_check(cfg, rec, res);
  else if (c == "bound-experiment") run_bound(cfg, rec, res);
  else if (c == "sharpness-experiment") run_sharpness(cfg, rec, res);
  else run_dk(cfg, rec, res);

  const std::string canon = cfg.echo.dump();
  json out;
  out["command"] = cfg.command;
  out["config"] = cfg.echo;
  out["inputs_digest"] = hex64(fnv1a(canon.data(), canon.size()));
  out["results"] = res;
  out["version"] = kVersion;
  if (!rec.table.columns.empty()) {
    out["table"] = json{{"columns", rec.table.columns}, {"rows", rec.table.rows}, {"footer", rec.table.footer}};
  }
  rec.result = std::move(out);
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

std::string result_json(const ResultRecord& rec) { return rec.result.dump(2) + "\n"; }

}  // namespace mpdo::cli
