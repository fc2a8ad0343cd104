#include "config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string_view>

#include "noma/errors.hpp"

namespace noma::cli {
namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& where,
                    std::initializer_list<std::string_view> known) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (auto k : known) ok = ok || key == k;
    if (!ok) throw ParamError(where.empty() ? key : where + "." + key, "unknown key");
  }
}

const json& require(const json& obj, const std::string& key, const std::string& field) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParamError(field, "missing required key");
  return *it;
}

double as_number(const json& v, const std::string& field) {
  if (!v.is_number()) throw ParamError(field, "expected a number");
  return v.get<double>();
}

std::uint64_t as_unsigned(const json& v, const std::string& field) {
  if (!v.is_number_unsigned()) {
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return v.get<std::uint64_t>();
    throw ParamError(field, "expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::string as_string(const json& v, const std::string& field) {
  if (!v.is_string()) throw ParamError(field, "expected a string");
  return v.get<std::string>();
}

const json& as_array(const json& v, const std::string& field) {
  if (!v.is_array()) throw ParamError(field, "expected an array");
  return v;
}

std::string indexed(const std::string& field, std::size_t i) {
  return field + "[" + std::to_string(i) + "]";
}

SweepSection parse_sweep(const json& s) {
  if (!s.is_object()) throw ParamError("sweep", "expected an object");
  reject_unknown(s, "sweep", {"variable", "grid", "schemes"});
  SweepSection out;
  out.variable = parse_sweep_variable(as_string(require(s, "variable", "sweep.variable"),
                                                "sweep.variable"));
  const json& grid = as_array(require(s, "grid", "sweep.grid"), "sweep.grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out.grid.push_back(as_number(grid[i], indexed("sweep.grid", i)));
  }
  if (s.contains("schemes")) {
    const json& schemes = as_array(s["schemes"], "sweep.schemes");
    out.schemes.clear();
    for (std::size_t i = 0; i < schemes.size(); ++i) {
      const std::string field = indexed("sweep.schemes", i);
      try {
        out.schemes.push_back(parse_scheme(as_string(schemes[i], field)));
      } catch (const ParamError& e) {
        if (e.field() == field) throw;
        throw ParamError(field, e.what());
      }
    }
  }
  return out;
}

}  // namespace

ScenarioConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ParamError("config", "top level must be an object");
  reject_unknown(doc, "",
                 {"tiers", "user_intensity", "pathloss_exponent", "sir_threshold", "beta", "sweep",
                  "seed", "n_trials", "window_half_width", "kernel_mode", "output", "threads",
                  "nonvoid_prob"});
  ScenarioConfig c;
  NetworkParams& p = c.params;

  const json& tiers = as_array(require(doc, "tiers", "tiers"), "tiers");
  for (std::size_t i = 0; i < tiers.size(); ++i) {
    const std::string field = indexed("tiers", i);
    if (!tiers[i].is_object()) throw ParamError(field, "expected an object");
    reject_unknown(tiers[i], field, {"power_watts", "intensity"});
    TierParams t;
    t.power_watts = as_number(require(tiers[i], "power_watts", field + ".power_watts"),
                              field + ".power_watts");
    t.intensity =
        as_number(require(tiers[i], "intensity", field + ".intensity"), field + ".intensity");
    p.tiers.push_back(t);
  }
  p.user_intensity = as_number(require(doc, "user_intensity", "user_intensity"), "user_intensity");
  if (doc.contains("pathloss_exponent")) {
    p.pathloss_exponent = as_number(doc["pathloss_exponent"], "pathloss_exponent");
  }
  if (doc.contains("sir_threshold")) {
    p.sir_threshold = as_number(doc["sir_threshold"], "sir_threshold");
  }
  // beta: one value for every tier, or one per tier
  const json& beta = require(doc, "beta", "beta");
  if (beta.is_array()) {
    for (std::size_t i = 0; i < beta.size(); ++i) {
      p.beta.push_back(as_number(beta[i], indexed("beta", i)));
    }
  } else {
    p.beta.assign(p.tiers.size(), as_number(beta, "beta"));
  }

  if (doc.contains("sweep")) c.sweep = parse_sweep(doc["sweep"]);
  if (doc.contains("seed")) c.seed = as_unsigned(doc["seed"], "seed");
  if (doc.contains("n_trials")) c.n_trials = as_unsigned(doc["n_trials"], "n_trials");
  if (doc.contains("window_half_width")) {
    c.window_half_width = as_number(doc["window_half_width"], "window_half_width");
  }
  if (doc.contains("kernel_mode")) {
    c.kernel_mode = parse_kernel_mode(as_string(doc["kernel_mode"], "kernel_mode"));
  }
  if (doc.contains("output")) c.output = as_string(doc["output"], "output");
  if (doc.contains("threads")) {
    c.threads = static_cast<unsigned>(as_unsigned(doc["threads"], "threads"));
  }
  if (doc.contains("nonvoid_prob")) c.nonvoid_prob = as_number(doc["nonvoid_prob"], "nonvoid_prob");

  p.validate();
  if (c.n_trials < 1) throw ParamError("n_trials", "must be >= 1");
  if (c.window_half_width && !(*c.window_half_width > 0.0)) {
    throw ParamError("window_half_width", "must be positive");
  }
  if (c.nonvoid_prob && !(*c.nonvoid_prob >= 0.0 && *c.nonvoid_prob <= 1.0)) {
    throw ParamError("nonvoid_prob", "must lie in [0, 1]");
  }
  if (c.sweep) c.to_sweep_spec().validate();
  return c;
}

ScenarioConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParamError("config", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

json to_json(const ScenarioConfig& c) {
  json doc;
  json tiers = json::array();
  for (const auto& t : c.params.tiers) {
    tiers.push_back({{"power_watts", t.power_watts}, {"intensity", t.intensity}});
  }
  doc["tiers"] = std::move(tiers);
  doc["user_intensity"] = c.params.user_intensity;
  doc["pathloss_exponent"] = c.params.pathloss_exponent;
  doc["sir_threshold"] = c.params.sir_threshold;
  doc["beta"] = c.params.beta;
  if (c.sweep) {
    json schemes = json::array();
    for (Scheme s : c.sweep->schemes) schemes.push_back(std::string(to_string(s)));
    doc["sweep"] = {{"variable", std::string(to_string(c.sweep->variable))},
                    {"grid", c.sweep->grid},
                    {"schemes", std::move(schemes)}};
  }
  doc["seed"] = c.seed;
  doc["n_trials"] = c.n_trials;
  if (c.window_half_width) doc["window_half_width"] = *c.window_half_width;
  doc["kernel_mode"] = std::string(to_string(c.kernel_mode));
  if (c.output) doc["output"] = *c.output;
  doc["threads"] = c.threads;
  if (c.nonvoid_prob) doc["nonvoid_prob"] = *c.nonvoid_prob;
  return doc;
}

SweepSpec ScenarioConfig::to_sweep_spec() const {
  SweepSpec spec;
  spec.base = params;
  if (sweep) {
    spec.variable = sweep->variable;
    spec.grid = sweep->grid;
    spec.schemes = sweep->schemes;
  } else {
    spec.variable = SweepVariable::kUserIntensity;
    spec.grid = {params.user_intensity};
  }
  spec.n_trials = n_trials;
  spec.seed = seed;
  spec.kernel_mode = kernel_mode;
  spec.window_half_width = window_half_width;
  spec.threads = threads;
  spec.nonvoid_prob = nonvoid_prob;
  return spec;
}

}  // namespace noma::cli
