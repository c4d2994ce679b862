// Copyright 2026 The mpdo-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "config_detail.hpp"
#include "mpdo/bound.hpp"
#include "mpdo/error.hpp"
#include "mpdo/stats.hpp"
#include "mpdo/weights.hpp"
#include "mpdo_cli/cli.hpp"

namespace mpdo::cli {

using nlohmann::json;

namespace detail {

json extended(double v) { return std::isinf(v) ? json(v > 0 ? "inf" : "-inf") : json(v); }

Section::Section(const json& in, std::string path) : in_(in), path_(std::move(path)), out_(json::object()) {
  if (!in_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
}

std::string Section::sub(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

const json* Section::find(const std::string& key) {
  seen_.insert(key);
  auto it = in_.find(key);
  return it == in_.end() ? nullptr : &*it;
}

double Section::real(const std::string& key, std::optional<double> def) {
  const json* v = find(key);
  double x;
  if (!v) {
    if (!def) throw ConfigError(sub(key), "required field missing");
    x = *def;
  } else {
    x = to_real(*v, sub(key));
  }
  out_[key] = extended(x);
  return x;
}

double Section::to_real(const json& v, const std::string& path) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  throw ConfigError(path, "expected a number or \"inf\"");
}

long long Section::integer(const std::string& key, std::optional<long long> def) {
  const json* v = find(key);
  long long x;
  if (!v) {
    if (!def) throw ConfigError(sub(key), "required field missing");
    x = *def;
  } else {
    if (!v->is_number_integer()) throw ConfigError(sub(key), "expected an integer");
    x = v->get<long long>();
  }
  out_[key] = x;
  return x;
}

std::uint64_t Section::unsigned64(const std::string& key, std::uint64_t def) {
  const json* v = find(key);
  std::uint64_t x = def;
  if (v) {
    if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<long long>() >= 0))
      throw ConfigError(sub(key), "expected a nonnegative integer");
    x = v->get<std::uint64_t>();
  }
  out_[key] = x;
  return x;
}

std::string Section::text(const std::string& key, std::optional<std::string> def) {
  const json* v = find(key);
  std::string x;
  if (!v) {
    if (!def) throw ConfigError(sub(key), "required field missing");
    x = *def;
  } else {
    if (!v->is_string()) throw ConfigError(sub(key), "expected a string");
    x = v->get<std::string>();
  }
  out_[key] = x;
  return x;
}

bool Section::flag(const std::string& key, bool def) {
  const json* v = find(key);
  bool x = def;
  if (v) {
    if (!v->is_boolean()) throw ConfigError(sub(key), "expected true or false");
    x = v->get<bool>();
  }
  out_[key] = x;
  return x;
}

std::vector<double> Section::reals(const std::string& key, std::optional<std::vector<double>> def) {
  const json* v = find(key);
  std::vector<double> x;
  if (!v) {
    if (!def) throw ConfigError(sub(key), "required field missing");
    x = *def;
  } else {
    if (!v->is_array()) throw ConfigError(sub(key), "expected an array");
    for (std::size_t i = 0; i < v->size(); ++i) x.push_back(to_real((*v)[i], sub(key) + "[" + std::to_string(i) + "]"));
  }
  json arr = json::array();
  for (double d : x) arr.push_back(extended(d));
  out_[key] = arr;
  return x;
}

std::vector<long long> Section::integers(const std::string& key, std::optional<std::vector<long long>> def) {
  const json* v = find(key);
  std::vector<long long> x;
  if (!v) {
    if (!def) throw ConfigError(sub(key), "required field missing");
    x = *def;
  } else {
    if (!v->is_array()) throw ConfigError(sub(key), "expected an array");
    for (std::size_t i = 0; i < v->size(); ++i) {
      if (!(*v)[i].is_number_integer()) throw ConfigError(sub(key) + "[" + std::to_string(i) + "]", "expected an integer");
      x.push_back((*v)[i].get<long long>());
    }
  }
  out_[key] = x;
  return x;
}

const json* Section::raw(const std::string& key) { return find(key); }

void Section::put(const std::string& key, json value) { out_[key] = std::move(value); }

json Section::finish() const {
  for (auto it = in_.begin(); it != in_.end(); ++it)
    if (!seen_.count(it.key())) throw ConfigError(sub(it.key()), "unknown key \"" + it.key() + "\"");
  return out_;
}

void require(bool ok, const std::string& path, const std::string& what) {
  if (!ok) throw ConfigError(path, what);
}

}  // namespace detail

namespace {

using detail::require;
using detail::Section;

const std::set<std::string>& sections_for(const std::string& cmd) {
  static const std::map<std::string, std::set<std::string>> table = {
      {"eval", {"grid", "N", "seed", "symbol", "functions", "params"}},
      {"norm", {"grid", "seed", "functions", "params"}},
      {"weight-test", {"grid", "N", "seed", "weight", "params"}},
      {"decomp-check", {"grid", "seed", "params"}},
      {"bound-experiment", {"grid", "N", "seed", "symbol", "weight", "exponents", "params"}},
      {"sharpness-experiment", {"grid", "N", "seed", "exponents", "params"}},
      {"dk", {"grid", "N", "seed", "params"}},
  };
  return table.at(cmd);
}

json parse_profile(const json& in, const std::string& path) {
  Section s(in, path);
  const auto id = s.text("id");
  if (id == "one") {
  } else if (id == "gaussian") {
    require(s.real("width", 1.0) > 0.0, path + ".width", "must be positive");
  } else if (id == "bumps") {
    s.unsigned64("seed", 0);
    require(s.real("band", 2.0) > 0.0, path + ".band", "must be positive");
  } else if (id == "lp-shell") {
    require(s.integer("k") >= 0, path + ".k", "must be nonnegative");
  } else {
    throw ConfigError(path + ".id", "unknown profile id \"" + id + "\"");
  }
  return s.finish();
}

json parse_symbol(const json& in, const RunConfig& cfg, const std::string& path) {
  Section s(in, path);
  const auto id = s.text("id");
  if (id == "const") {
    const json* c = s.raw("c");
    if (!c) {
      s.put("c", 1.0);
    } else if (c->is_number()) {
      s.put("c", c->get<double>());
    } else if (c->is_array() && c->size() == 2 && (*c)[0].is_number() && (*c)[1].is_number()) {
      s.put("c", *c);
    } else {
      throw ConfigError(path + ".c", "expected a number or [re, im]");
    }
  } else if (id == "separable") {
    const json* p = s.raw("profiles");
    json arr = json::array();
    if (!p) {
      for (int j = 0; j < cfg.N; ++j) arr.push_back(json{{"id", "one"}});
    } else {
      require(p->is_array(), path + ".profiles", "expected an array");
      require(static_cast<int>(p->size()) == cfg.N, path + ".profiles", "expected N = " + std::to_string(cfg.N) + " profiles");
      for (std::size_t j = 0; j < p->size(); ++j)
        arr.push_back(parse_profile((*p)[j], path + ".profiles[" + std::to_string(j) + "]"));
    }
    s.put("profiles", arr);
  } else if (id == "band-limited") {
    const auto radii = s.reals("radii", std::vector<double>(cfg.N + 1, 1.0));
    require(static_cast<int>(radii.size()) == cfg.N + 1, path + ".radii", "expected N + 1 radii");
    require(radii[0] >= 0.0, path + ".radii[0]", "must be nonnegative");
    for (int j = 1; j <= cfg.N; ++j)
      require(radii[j] >= 0.5, path + ".radii[" + std::to_string(j) + "]", "must be at least 1/2");
    s.unsigned64("seed", derive_seed(cfg.seed, 0x5157));
    require(s.integer("terms", 8) >= 1, path + ".terms", "must be positive");
  } else if (id == "lattice") {
    const auto w = s.text("weight", "power:-0.5");
    try {
      (void)WeightSpec::parse(w);
    } catch (const Error& e) {
      throw ConfigError(path + ".weight", e.what());
    }
    require(s.integer("radius", 4) >= 0, path + ".radius", "must be nonnegative");
  } else if (id == "kernel-phase") {
  } else {
    throw ConfigError(path + ".id", "unknown symbol id \"" + id + "\"");
  }
  return s.finish();
}

json parse_functions(const json* in, const RunConfig& cfg, int default_count, const std::string& path) {
  json arr = json::array();
  const int count = in ? static_cast<int>(in->size()) : default_count;
  if (in) require(in->is_array(), path, "expected an array");
  for (int i = 0; i < count; ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    const json item = in ? (*in)[i] : json{{"kind", "trig"}};
    Section s(item, p);
    const auto kind = s.text("kind");
    if (kind == "trig") {
      const double band = s.real("band", 0.5);
      require(band > 0.0 && band <= 1.0, p + ".band", "must lie in (0, 1]");
      s.unsigned64("seed", derive_seed(cfg.seed, 1000 + i));
    } else if (kind == "gaussian") {
      require(s.real("width", 1.0) > 0.0, p + ".width", "must be positive");
      const auto c = s.reals("center", std::vector<double>(cfg.grid.dim(), 0.0));
      require(static_cast<int>(c.size()) == cfg.grid.dim(), p + ".center", "expected one entry per dimension");
    } else if (kind == "file") {
      s.text("path");
    } else {
      throw ConfigError(p + ".kind", "unknown function kind \"" + kind + "\"");
    }
    arr.push_back(s.finish());
  }
  return arr;
}

json parse_weight(const json* in, const std::string& path) {
  std::string id = "const";
  if (in) {
    require(in->is_string(), path, "expected a weight id string");
    id = in->get<std::string>();
  }
  try {
    return WeightSpec::parse(id).id();
  } catch (const Error& e) {
    if (e.code() == Errc::io) throw IoError(e.what());
    throw ConfigError(path, e.what());
  }
}

std::string path_option(Section& s) {
  const auto p = s.text("path", "automatic");
  static const std::set<std::string> ok = {"automatic", "direct", "aggregated", "modes", "demodulated"};
  require(ok.count(p) > 0, s.sub("path"), "unknown evaluation path \"" + p + "\"");
  require(s.real("cost_cap", 2e8) > 0.0, s.sub("cost_cap"), "must be positive");
  return p;
}

json parse_params(const json* in, const RunConfig& cfg) {
  const json empty = json::object();
  Section s(in ? *in : empty, "params");
  const int n = cfg.grid.dim();
  const std::string& c = cfg.command;
  if (c == "eval") {
    path_option(s);
  } else if (c == "norm") {
    s.reals("p", std::vector<double>{1.0, 2.0, kInf});
    s.reals("q", std::vector<double>{1.0, 2.0, kInf});
    require(s.real("L_exp", 2.0 * n + 2.0) > n, "params.L_exp", "must exceed the dimension");
  } else if (c == "weight-test") {
    const auto radii = s.integers("radii", std::vector<long long>{4, 8, 16});
    require(!radii.empty(), "params.radii", "must not be empty");
    for (auto r : radii) require(r >= 1, "params.radii", "radii must be positive");
    const auto m = s.text("method", "alternating");
    require(m == "alternating" || m == "brute", "params.method", "expected \"alternating\" or \"brute\"");
    require(s.integer("max_sweeps", 200) >= 1, "params.max_sweeps", "must be positive");
    require(s.real("rel_tol", 1e-9) > 0.0, "params.rel_tol", "must be positive");
    require(s.integer("moderate_samples", 2000) >= 0, "params.moderate_samples", "must be nonnegative");
    require(s.real("moderate_box", 10.0) > 0.0, "params.moderate_box", "must be positive");
    const auto slot = s.integer("closure_slot", 0);
    require(slot >= 0 && slot <= cfg.N, "params.closure_slot", "must lie in [0, N]");
  } else if (c == "decomp-check") {
    require(s.integer("samples", 1000) >= 0, "params.samples", "must be nonnegative");
  } else if (c == "bound-experiment") {
    const auto scales = s.reals("scales", std::vector<double>{1.0, 2.0, 4.0, 8.0});
    require(!scales.empty(), "params.scales", "must not be empty");
    for (double v : scales) require(v > 0.0, "params.scales", "scales must be positive");
    require(s.integer("trials", 20) >= 1, "params.trials", "must be positive");
    const double bf = s.real("band_fraction", 0.5);
    require(bf > 0.0 && bf <= 1.0, "params.band_fraction", "must lie in (0, 1]");
    path_option(s);
  } else if (c == "sharpness-experiment") {
    const auto e = s.text("experiment", "growth");
    if (e == "growth") {
      const auto f = s.text("family", "single_slot");
      require(f == "single_slot" || f == "all_slots", "params.family", "expected \"single_slot\" or \"all_slots\"");
      const auto a = s.integers("a", std::vector<long long>{2, 3, 4, 5, 6});
      require(a.size() >= 2, "params.a", "need at least two dilations for a slope");
      for (auto v : a) require(v >= 0, "params.a", "dilations must be nonnegative");
      path_option(s);
    } else if (e == "coefficient-sum") {
      s.real("m", -0.5);
      require(s.real("s0", 0.0) >= 0.0, "params.s0", "must be nonnegative");
      const auto b = s.reals("b", std::vector<double>(cfg.N, 0.6));
      require(static_cast<int>(b.size()) == cfg.N, "params.b", "expected N entries");
      const auto K = s.integers("K", std::vector<long long>{64, 128, 256, 512, 1024});
      require(K.size() >= 3, "params.K", "need at least three truncations for an increment slope");
      for (std::size_t i = 0; i < K.size(); ++i)
        require(K[i] >= 1 && (i == 0 || K[i] > K[i - 1]), "params.K", "truncations must be positive and increasing");
    } else {
      throw ConfigError("params.experiment", "expected \"growth\" or \"coefficient-sum\"");
    }
  } else if (c == "dk") {
    s.real("m", -0.5);
    const auto b = s.reals("b", std::vector<double>(cfg.N, 0.6));
    require(static_cast<int>(b.size()) == cfg.N, "params.b", "expected N entries");
    require(s.integer("K", 64) >= 4, "params.K", "must be at least 4");
    require(s.integer("inner", 0) >= 0, "params.inner", "must be nonnegative");
    require(s.real("cost_cap", 2e8) > 0.0, "params.cost_cap", "must be positive");
  }
  return s.finish();
}

json parse_exponents(const json* in, const RunConfig& cfg) {
  const json empty = json::object();
  Section s(in ? *in : empty, "exponents");
  const int n = cfg.grid.dim();
  const auto q = s.reals("q", std::vector<double>(cfg.N, 2.0));
  require(static_cast<int>(q.size()) == cfg.N, "exponents.q", "expected N entries");
  const double r = s.real("r", 1.0);
  require(r > 0.0, "exponents.r", "must be positive");
  // Default smoothness: the critical s_0 = n/2 and the surplus n/r spread
  // over the inputs in proportion to 1/q_j.
  std::vector<double> def(cfg.N + 1, 0.5 * n);
  double inv = 0.0;
  for (double v : q) inv += 1.0 / v;
  for (int j = 0; j < cfg.N; ++j) {
    const double share = inv > 0.0 ? (1.0 / q[j]) / inv : 1.0 / cfg.N;
    def[j + 1] = 0.5 * n - n / q[j] + share * n / r;
  }
  const auto sv = s.reals("s", def);
  require(static_cast<int>(sv.size()) == cfg.N + 1, "exponents.s", "expected N + 1 entries s_0, ..., s_N");
  if (cfg.command == "bound-experiment") {
    const auto chk = theorem61_exponent_check(n, q, r, sv);
    if (!chk.pass) throw ConfigError("exponents", "exponent constraint violated: " + chk.witness);
  }
  return s.finish();
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& command, std::optional<std::uint64_t> seed) {
  json in;
  try {
    in = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("invalid JSON: ") + e.what());
  }
  require(in.is_object(), "<root>", "expected a JSON object");
  if (!command.empty()) {
    auto it = in.find("command");
    if (it == in.end()) in["command"] = command;
    else require(it->is_string() && it->get<std::string>() == command, "command",
                 "config command does not match the command line");
  }
  Section root(in, "");
  RunConfig cfg;
  cfg.command = root.text("command");
  const auto& names = command_names();
  require(std::find(names.begin(), names.end(), cfg.command) != names.end(), "command",
          "unknown command \"" + cfg.command + "\"");
  const auto& allowed = sections_for(cfg.command);
  for (auto it = in.begin(); it != in.end(); ++it)
    if (it.key() != "command" && !allowed.count(it.key()))
      throw ConfigError(it.key(), "unknown key \"" + it.key() + "\" for command " + cfg.command);

  {
    const json empty = json::object();
    const json* g = root.raw("grid");
    Section gs(g ? *g : empty, "grid");
    const auto n = gs.integer("n", 1);
    const double L = gs.real("L", 8.0);
    const auto M = gs.integer("M", 64);
    require(n == 1 || n == 2, "grid.n", "dimension must be 1 or 2");
    require(L > 0.0 && std::isfinite(L), "grid.L", "period must be positive");
    require(M >= 2 && (M & (M - 1)) == 0, "grid.M", "resolution must be a power of two");
    root.put("grid", gs.finish());
    cfg.grid = Grid(static_cast<int>(n), L, static_cast<int>(M));
  }
  {
    const json* sv = root.raw("seed");
    std::uint64_t v = 0;
    if (sv) {
      require(sv->is_number_unsigned() || (sv->is_number_integer() && sv->get<long long>() >= 0), "seed",
              "expected a nonnegative integer");
      v = sv->get<std::uint64_t>();
    }
    if (seed) v = *seed;
    cfg.seed = v;
    root.put("seed", v);
  }
  if (allowed.count("N")) {
    const auto N = root.integer("N", 2);
    require(N >= 1 && N <= 3, "N", "number of inputs must lie in [1, 3]");
    cfg.N = static_cast<int>(N);
  }
  if (allowed.count("exponents")) root.put("exponents", parse_exponents(root.raw("exponents"), cfg));
  if (allowed.count("weight")) root.put("weight", parse_weight(root.raw("weight"), "weight"));
  if (allowed.count("symbol")) {
    const json* sym = root.raw("symbol");
    if (!sym && cfg.command == "eval") throw ConfigError("symbol", "required field missing");
    const json def = {{"id", "band-limited"}};
    root.put("symbol", parse_symbol(sym ? *sym : def, cfg, "symbol"));
  }
  if (allowed.count("functions")) {
    const int count = cfg.command == "eval" ? cfg.N : 1;
    const json arr = parse_functions(root.raw("functions"), cfg, count, "functions");
    if (cfg.command == "eval")
      require(static_cast<int>(arr.size()) == cfg.N, "functions", "expected N = " + std::to_string(cfg.N) + " functions");
    require(!arr.empty(), "functions", "must not be empty");
    root.put("functions", arr);
  }
  if (allowed.count("params")) root.put("params", parse_params(root.raw("params"), cfg));
  cfg.echo = root.finish();
  return cfg;
}

RunConfig parse_config_file(const std::string& path, const std::string& command, std::optional<std::uint64_t> seed) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), command, seed);
}

}  // namespace mpdo::cli
