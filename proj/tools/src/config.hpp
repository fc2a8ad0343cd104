#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "noma/experiments.hpp"
#include "noma/params.hpp"

namespace noma::cli {

struct SweepSection {
  SweepVariable variable = SweepVariable::kUserIntensity;
  std::vector<double> grid;
  std::vector<Scheme> schemes{Scheme::kNonCooperative, Scheme::kCooperative};

  friend bool operator==(const SweepSection&, const SweepSection&) = default;
};

/// Everything a command needs: network, optional sweep, runtime knobs.
struct ScenarioConfig {
  NetworkParams params;
  std::optional<SweepSection> sweep;
  std::uint64_t seed = 1;
  std::size_t n_trials = 100;
  std::optional<double> window_half_width;
  KernelMode kernel_mode = KernelMode::kAppendix;
  std::optional<std::string> output;
  unsigned threads = 0;
  std::optional<double> nonvoid_prob;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;

  /// Sweep spec for `sim`/`sweep`; without a sweep section, a single point at
  /// the configured user intensity.
  SweepSpec to_sweep_spec() const;
};

/// Throws ParamError naming the offending key; unknown keys are rejected.
ScenarioConfig parse_config(const nlohmann::json& doc);
ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig load_config(const std::filesystem::path& path);

nlohmann::json to_json(const ScenarioConfig& config);

/// File could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace noma::cli
