#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "noma/analytic.hpp"
#include "noma/params.hpp"
#include "noma/simcore.hpp"

namespace noma {

enum class SweepVariable { kUserIntensity, kBeta, kPicoIntensity };

std::string_view to_string(SweepVariable variable) noexcept;
SweepVariable parse_sweep_variable(std::string_view name);

struct SweepSpec {
  NetworkParams base;
  SweepVariable variable = SweepVariable::kUserIntensity;
  std::vector<double> grid;
  std::vector<Scheme> schemes{Scheme::kNonCooperative, Scheme::kCooperative};
  std::size_t n_trials = 100;
  std::uint64_t seed = 1;
  KernelMode kernel_mode = KernelMode::kAppendix;
  std::optional<double> window_half_width;
  unsigned threads = 0;
  bool simulate = true;  // false: analytic columns only
  std::optional<double> nonvoid_prob;  // overrides the load model in analytic columns

  void validate() const;
};

/// Flags attached to a row: low_samples, invalid_beta, extrapolated,
/// kernel_divergent.
struct ComparisonRow {
  double sweep_value = 0.0;
  std::size_t tier = 0;
  Role role = Role::kNear;
  Scheme scheme = Scheme::kNonCooperative;
  double analytic = 0.0;   // NaN when the kernel diverges
  double simulated = 0.0;  // NaN when not simulated
  double ci_halfwidth = 0.0;
  std::uint64_t n_samples = 0;
  double abs_gap = 0.0;
  std::vector<std::string> flags;

  bool has_flag(std::string_view flag) const;
};

/// Base parameters with the swept variable set to `value`. beta applies to
/// every tier; pico intensity sets the last tier.
NetworkParams apply_sweep_value(const NetworkParams& base, SweepVariable variable, double value);

/// Rows ordered by grid value, then scheme, tier, near/far.
std::vector<ComparisonRow> run_sweep(const SweepSpec& spec);

/// Largest finite abs_gap among simulated rows (0 if none).
double max_gap(const std::vector<ComparisonRow>& rows);

struct BetaScan {
  std::vector<std::pair<double, double>> points;  // (beta, average coverage)
  BetaOptimum optimum;
};

BetaScan run_beta_scan(const CoverageModel& model, std::size_t tier, Scheme scheme,
                       const std::vector<double>& grid);
BetaScan run_beta_scan(const NetworkParams& params, std::size_t tier, Scheme scheme,
                       const std::vector<double>& grid, const AnalyticOptions& options = {});

/// n points log-spaced over [lo, hi] inclusive.
std::vector<double> log_spaced(double lo, double hi, std::size_t n);
/// n points lin-spaced over [lo, hi] inclusive.
std::vector<double> lin_spaced(double lo, double hi, std::size_t n);

enum class PicoPreset { kLow, kHigh };  // lambda_pico = 0.1 mu or mu

NetworkParams table_one_preset(PicoPreset preset);
/// User-intensity sweep over 8 log-spaced points in [5e-5, 1e-3].
SweepSpec default_user_sweep(PicoPreset preset = PicoPreset::kLow);

inline constexpr std::string_view kCsvHeader =
    "sweep_value,tier,role,scheme,analytic,simulated,ci_halfwidth,n_samples,flags";

/// Shortest round-trip decimal form, locale-independent ("nan", "inf" for
/// non-finite values).
std::string format_double(double value);

void write_csv(std::ostream& out, const std::vector<ComparisonRow>& rows);

}  // namespace noma
