#include "glauber/run_config.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "glauber/errors.hpp"
#include "glauber/rng.hpp"

namespace glauber {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw DomainError("config error at " + path + ": " + what);
}

void check_allowed(const json& obj, const std::string& path,
                   std::initializer_list<const char*> keys) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : keys) known = known || it.key() == k;
    if (!known) fail(path + "." + it.key(), "unknown field");
  }
}

const json& require_object(const json& parent, const std::string& path, const char* key) {
  if (!parent.contains(key)) fail(path + "." + key, "missing required section");
  const json& j = parent.at(key);
  if (!j.is_object()) fail(path + "." + key, "must be an object");
  return j;
}

double get_number(const json& obj, const std::string& path, const char* key, double fallback,
                  bool required = false) {
  if (!obj.contains(key)) {
    if (required) fail(path + "." + key, "missing required field");
    return fallback;
  }
  const json& j = obj.at(key);
  if (!j.is_number()) fail(path + "." + key, "must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path + "." + key, "must be finite");
  return v;
}

std::uint64_t get_uint(const json& obj, const std::string& path, const char* key,
                       std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const json& j = obj.at(key);
  if (!(j.is_number_integer() || j.is_number_unsigned()) ||
      (j.is_number_integer() && j.get<std::int64_t>() < 0))
    fail(path + "." + key, "must be a nonnegative integer");
  return j.get<std::uint64_t>();
}

std::string get_string(const json& obj, const std::string& path, const char* key,
                       const std::string& fallback, bool required = false) {
  if (!obj.contains(key)) {
    if (required) fail(path + "." + key, "missing required field");
    return fallback;
  }
  const json& j = obj.at(key);
  if (!j.is_string()) fail(path + "." + key, "must be a string");
  return j.get<std::string>();
}

Potential parse_potential(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "must be an object");
  const std::string type = get_string(j, path, "type", "", /*required=*/true);
  try {
    if (type == "zero") {
      check_allowed(j, path, {"type"});
      return Potential::zero();
    }
    if (type == "strauss") {
      check_allowed(j, path, {"type", "beta", "range"});
      return Potential::strauss(get_number(j, path, "beta", 0.0, true),
                                get_number(j, path, "range", 0.0, true));
    }
    if (type == "hard_core") {
      check_allowed(j, path, {"type", "range"});
      return Potential::hard_core(get_number(j, path, "range", 0.0, true));
    }
    if (type == "soft_gaussian") {
      check_allowed(j, path, {"type", "theta", "sigma"});
      return Potential::soft_gaussian(get_number(j, path, "theta", 0.0, true),
                                      get_number(j, path, "sigma", 0.0, true));
    }
  } catch (const DomainError& e) {
    // Factory validation message, re-anchored to the config path.
    const std::string msg = e.what();
    if (msg.rfind("config error", 0) == 0) throw;
    fail(path, msg);
  }
  fail(path + ".type", "unknown potential type '" + type +
                           "' (expected zero, strauss, hard_core, or soft_gaussian)");
}

ModelParams parse_model(const json& root) {
  const json& m = require_object(root, "$", "model");
  check_allowed(m, "$.model", {"dimension", "sides", "boundary", "activity", "potential"});

  const auto dim64 = get_uint(m, "$.model", "dimension", 0);
  if (!m.contains("dimension")) fail("$.model.dimension", "missing required field");
  if (dim64 < 1 || dim64 > 3) fail("$.model.dimension", "must be 1, 2, or 3");
  const int dim = static_cast<int>(dim64);

  if (!m.contains("sides")) fail("$.model.sides", "missing required field");
  const json& sides = m.at("sides");
  Box box;
  box.dim = dim;
  if (sides.is_number()) {
    const double s = sides.get<double>();
    if (!(s > 0.0) || !std::isfinite(s)) fail("$.model.sides", "must be positive and finite");
    for (int i = 0; i < dim; ++i) box.side[i] = s;
  } else if (sides.is_array()) {
    if (sides.size() != static_cast<std::size_t>(dim))
      fail("$.model.sides", "array length must equal the dimension");
    for (int i = 0; i < dim; ++i) {
      const json& s = sides.at(static_cast<std::size_t>(i));
      if (!s.is_number()) fail("$.model.sides", "entries must be numbers");
      box.side[i] = s.get<double>();
      if (!(box.side[i] > 0.0) || !std::isfinite(box.side[i]))
        fail("$.model.sides", "entries must be positive and finite");
    }
  } else {
    fail("$.model.sides", "must be a number or an array of numbers");
  }

  const std::string boundary = get_string(m, "$.model", "boundary", "periodic");
  if (boundary == "periodic")
    box.boundary = Boundary::periodic;
  else if (boundary == "empty")
    box.boundary = Boundary::empty;
  else
    fail("$.model.boundary", "must be \"periodic\" or \"empty\"");

  const double activity = get_number(m, "$.model", "activity", 0.0, /*required=*/true);
  if (!m.contains("potential")) fail("$.model.potential", "missing required field");
  const Potential phi = parse_potential(m.at("potential"), "$.model.potential");
  return ModelParams::make(activity, phi, box);
}

void parse_run_block(const json& root, RunConfig& cfg) {
  if (!root.contains("run")) return;
  const json& r = root.at("run");
  if (!r.is_object()) fail("$.run", "must be an object");
  check_allowed(r, "$.run",
                {"seed", "chains", "burn_in", "spacing", "samples", "horizon_time",
                 "horizon_events", "snapshots", "sampler", "init"});

  cfg.seed = get_uint(r, "$.run", "seed", cfg.seed);
  cfg.chains = get_uint(r, "$.run", "chains", cfg.chains);
  if (cfg.chains < 2) fail("$.run.chains", "must be at least 2 (batch means need >= 2 chains)");
  cfg.burn_in = get_number(r, "$.run", "burn_in", cfg.burn_in);
  if (cfg.burn_in < 0.0) fail("$.run.burn_in", "must be nonnegative");
  cfg.spacing = get_number(r, "$.run", "spacing", cfg.spacing);
  if (!(cfg.spacing > 0.0)) fail("$.run.spacing", "must be positive");
  cfg.samples = get_uint(r, "$.run", "samples", cfg.samples);
  if (cfg.samples == 0) fail("$.run.samples", "must be positive");
  cfg.horizon_time = get_number(r, "$.run", "horizon_time", cfg.horizon_time);
  cfg.horizon_events = get_uint(r, "$.run", "horizon_events", cfg.horizon_events);
  if (cfg.horizon_events == 0 && !(cfg.horizon_time > 0.0))
    fail("$.run.horizon_time", "must be positive when horizon_events is 0");
  cfg.snapshots = get_uint(r, "$.run", "snapshots", cfg.snapshots);
  cfg.sampler = get_string(r, "$.run", "sampler", cfg.sampler);
  if (cfg.sampler != "mcmc" && cfg.sampler != "cftp")
    fail("$.run.sampler", "must be \"mcmc\" or \"cftp\"");
  cfg.init = get_string(r, "$.run", "init", cfg.init);
  if (cfg.init != "empty" && cfg.init != "poisson")
    fail("$.run.init", "must be \"empty\" or \"poisson\"");
}

struct CheckFlag {
  const char* name;
  bool VerifyOptions::* member;
};

constexpr CheckFlag kCheckFlags[] = {
    {"gnz", &VerifyOptions::gnz},
    {"dirichlet", &VerifyOptions::dirichlet},
    {"symmetry", &VerifyOptions::symmetry},
    {"coercivity", &VerifyOptions::coercivity},
    {"stationarity", &VerifyOptions::stationarity},
    {"lower_bound", &VerifyOptions::lower_bound},
    {"poincare", &VerifyOptions::poincare},
    {"ruelle", &VerifyOptions::ruelle},
    {"gap", &VerifyOptions::gap},
};

void parse_verify_block(const json& root, RunConfig& cfg) {
  // CLI default: the full suite, including the autocorrelation gap fit.
  for (const CheckFlag& f : kCheckFlags) cfg.verify.*(f.member) = true;

  if (!root.contains("verify")) return;
  const json& v = root.at("verify");
  if (!v.is_object()) fail("$.verify", "must be an object");
  check_allowed(v, "$.verify",
                {"checks", "sigmas", "quad_tolerance", "k1_bins", "k2_bins", "r_max", "autocorr"});

  if (v.contains("checks")) {
    const json& c = v.at("checks");
    if (c.is_string() && c.get<std::string>() == "all") {
      // keep all enabled
    } else if (c.is_array()) {
      for (const CheckFlag& f : kCheckFlags) cfg.verify.*(f.member) = false;
      for (const json& e : c) {
        if (!e.is_string()) fail("$.verify.checks", "entries must be strings");
        const std::string name = e.get<std::string>();
        bool known = false;
        for (const CheckFlag& f : kCheckFlags)
          if (name == f.name) {
            cfg.verify.*(f.member) = true;
            known = true;
          }
        if (!known) fail("$.verify.checks", "unknown check '" + name + "'");
      }
    } else {
      fail("$.verify.checks", "must be \"all\" or an array of check names");
    }
  }

  cfg.verify.sigmas = get_number(v, "$.verify", "sigmas", cfg.verify.sigmas);
  if (!(cfg.verify.sigmas > 0.0)) fail("$.verify.sigmas", "must be positive");
  cfg.verify.quad.tolerance = get_number(v, "$.verify", "quad_tolerance", cfg.verify.quad.tolerance);
  if (!(cfg.verify.quad.tolerance > 0.0)) fail("$.verify.quad_tolerance", "must be positive");
  cfg.verify.k1_bins = static_cast<int>(get_uint(v, "$.verify", "k1_bins", cfg.verify.k1_bins));
  if (cfg.verify.k1_bins < 1) fail("$.verify.k1_bins", "must be at least 1");
  cfg.verify.k2_bins = get_uint(v, "$.verify", "k2_bins", cfg.verify.k2_bins);
  if (cfg.verify.k2_bins < 1) fail("$.verify.k2_bins", "must be at least 1");
  cfg.verify.r_max = get_number(v, "$.verify", "r_max", cfg.verify.r_max);
  if (cfg.verify.r_max < 0.0) fail("$.verify.r_max", "must be nonnegative");

  if (v.contains("autocorr")) {
    const json& a = v.at("autocorr");
    if (!a.is_object()) fail("$.verify.autocorr", "must be an object");
    check_allowed(a, "$.verify.autocorr",
                  {"chains", "burn_in", "horizon", "dt", "lag_max", "fit_upper", "fit_lower"});
    AutocorrConfig& ac = cfg.verify.autocorr;
    ac.chain_count = get_uint(a, "$.verify.autocorr", "chains", ac.chain_count);
    if (ac.chain_count < 2) fail("$.verify.autocorr.chains", "must be at least 2");
    ac.burn_in = get_number(a, "$.verify.autocorr", "burn_in", ac.burn_in);
    ac.horizon = get_number(a, "$.verify.autocorr", "horizon", ac.horizon);
    ac.dt = get_number(a, "$.verify.autocorr", "dt", ac.dt);
    ac.lag_max = get_number(a, "$.verify.autocorr", "lag_max", ac.lag_max);
    ac.fit_upper = get_number(a, "$.verify.autocorr", "fit_upper", ac.fit_upper);
    ac.fit_lower = get_number(a, "$.verify.autocorr", "fit_lower", ac.fit_lower);
    if (!(ac.burn_in >= 0.0)) fail("$.verify.autocorr.burn_in", "must be nonnegative");
    if (!(ac.horizon > 0.0)) fail("$.verify.autocorr.horizon", "must be positive");
    if (!(ac.dt > 0.0)) fail("$.verify.autocorr.dt", "must be positive");
    if (!(ac.lag_max > ac.dt)) fail("$.verify.autocorr.lag_max", "must exceed dt");
    if (!(ac.fit_upper > ac.fit_lower && ac.fit_upper < 1.0 && ac.fit_lower > 0.0))
      fail("$.verify.autocorr.fit_upper", "fit window must satisfy 0 < lower < upper < 1");
  }
}

void parse_oracle_block(const json& root, RunConfig& cfg) {
  if (!root.contains("oracle")) return;
  const json& o = root.at("oracle");
  if (!o.is_object()) fail("$.oracle", "must be an object");
  check_allowed(o, "$.oracle", {"cells_per_axis", "cap", "tv_threshold", "tv_samples"});
  cfg.oracle_cells = static_cast<int>(get_uint(o, "$.oracle", "cells_per_axis", cfg.oracle_cells));
  if (cfg.oracle_cells < 1) fail("$.oracle.cells_per_axis", "must be at least 1");
  cfg.oracle_cap = get_uint(o, "$.oracle", "cap", cfg.oracle_cap);
  if (cfg.oracle_cap < 1) fail("$.oracle.cap", "must be at least 1");
  cfg.tv_threshold = get_number(o, "$.oracle", "tv_threshold", cfg.tv_threshold);
  if (!(cfg.tv_threshold > 0.0)) fail("$.oracle.tv_threshold", "must be positive");
  cfg.tv_samples = get_uint(o, "$.oracle", "tv_samples", cfg.tv_samples);
  if (cfg.tv_samples == 0) fail("$.oracle.tv_samples", "must be positive");
}

void parse_output_block(const json& root, RunConfig& cfg) {
  if (!root.contains("output")) return;
  const json& o = root.at("output");
  if (!o.is_object()) fail("$.output", "must be an object");
  check_allowed(o, "$.output", {"directory"});
  cfg.out_dir = get_string(o, "$.output", "directory", cfg.out_dir);
  if (cfg.out_dir.empty()) fail("$.output.directory", "must not be empty");
}

RunConfig parse_root(const json& root) {
  if (!root.is_object()) fail("$", "config root must be an object");
  check_allowed(root, "$", {"model", "run", "verify", "oracle", "output"});

  RunConfig cfg;
  cfg.model = parse_model(root);
  parse_run_block(root, cfg);
  parse_verify_block(root, cfg);
  parse_oracle_block(root, cfg);
  parse_output_block(root, cfg);

  apply_seed(cfg, cfg.seed);
  return cfg;
}

void describe_parse_error(const std::string& text, const std::string& origin,
                          const json::parse_error& e) {
  // Byte offset -> line/column for a line-precise message.
  std::size_t line = 1, col = 1;
  const std::size_t stop = std::min(text.size(), e.byte > 0 ? e.byte - 1 : 0);
  for (std::size_t i = 0; i < stop; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  std::ostringstream msg;
  msg << "config parse error in " << origin << " at line " << line << ", column " << col << ": "
      << e.what();
  throw DomainError(msg.str());
}

}  // namespace

void apply_seed(RunConfig& cfg, std::uint64_t seed) {
  cfg.seed = seed;
  // The autocorrelation fit runs its own chains; derive their stream family
  // from the master seed so the whole run stays reproducible.
  cfg.verify.autocorr.seed = derive_seed(seed, 0xAC0Bu);
}

RunConfig parse_run_config_text(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    describe_parse_error(text, origin, e);
  }
  return parse_root(root);
}

RunConfig parse_run_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config_text(buf.str(), path);
}

std::string resolved_config_text(const RunConfig& cfg) {
  json pot;
  const Potential& phi = cfg.model.potential;
  switch (phi.kind()) {
    case Potential::Kind::zero:
      pot = {{"type", "zero"}};
      break;
    case Potential::Kind::strauss:
      pot = {{"type", "strauss"}, {"beta", phi.strength()}, {"range", phi.range()}};
      break;
    case Potential::Kind::hard_core:
      pot = {{"type", "hard_core"}, {"range", phi.range()}};
      break;
    case Potential::Kind::soft_gaussian:
      pot = {{"type", "soft_gaussian"}, {"theta", phi.strength()}, {"sigma", phi.range()}};
      break;
  }

  json sides = json::array();
  for (int i = 0; i < cfg.model.box.dim; ++i) sides.push_back(cfg.model.box.side[i]);

  json checks = json::array();
  for (const CheckFlag& f : kCheckFlags)
    if (cfg.verify.*(f.member)) checks.push_back(f.name);

  const json root = {
      {"model",
       {{"dimension", cfg.model.box.dim},
        {"sides", sides},
        {"boundary", cfg.model.box.boundary == Boundary::periodic ? "periodic" : "empty"},
        {"activity", cfg.model.activity},
        {"potential", pot},
        {"delta", cfg.model.delta}}},
      {"run",
       {{"seed", cfg.seed},
        {"chains", cfg.chains},
        {"burn_in", cfg.burn_in},
        {"spacing", cfg.spacing},
        {"samples", cfg.samples},
        {"horizon_time", cfg.horizon_time},
        {"horizon_events", cfg.horizon_events},
        {"snapshots", cfg.snapshots},
        {"sampler", cfg.sampler},
        {"init", cfg.init}}},
      {"verify",
       {{"checks", checks},
        {"sigmas", cfg.verify.sigmas},
        {"quad_tolerance", cfg.verify.quad.tolerance},
        {"k1_bins", cfg.verify.k1_bins},
        {"k2_bins", cfg.verify.k2_bins},
        {"r_max", cfg.verify.r_max},
        {"autocorr",
         {{"chains", cfg.verify.autocorr.chain_count},
          {"burn_in", cfg.verify.autocorr.burn_in},
          {"horizon", cfg.verify.autocorr.horizon},
          {"dt", cfg.verify.autocorr.dt},
          {"lag_max", cfg.verify.autocorr.lag_max},
          {"fit_upper", cfg.verify.autocorr.fit_upper},
          {"fit_lower", cfg.verify.autocorr.fit_lower}}}}},
      {"oracle",
       {{"cells_per_axis", cfg.oracle_cells},
        {"cap", cfg.oracle_cap},
        {"tv_threshold", cfg.tv_threshold},
        {"tv_samples", cfg.tv_samples}}},
      // the output directory is deliberately left out: it does not affect any
      // computed number, and the hash of this text identifies the run
  };
  return root.dump(2) + "\n";
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (const char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return std::string(buf);
}

}  // namespace glauber
