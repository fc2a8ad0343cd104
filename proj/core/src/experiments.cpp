#include "noma/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <string>

#include "noma/errors.hpp"

namespace noma {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string join_flags(const std::vector<std::string>& flags) {
  std::string out;
  for (const auto& f : flags) {
    if (!out.empty()) out += ';';
    out += f;
  }
  return out;
}

}  // namespace

std::string_view to_string(SweepVariable variable) noexcept {
  switch (variable) {
    case SweepVariable::kUserIntensity:
      return "user_intensity";
    case SweepVariable::kBeta:
      return "beta";
    case SweepVariable::kPicoIntensity:
      return "pico_intensity";
  }
  return "user_intensity";
}

SweepVariable parse_sweep_variable(std::string_view name) {
  if (name == "user_intensity") return SweepVariable::kUserIntensity;
  if (name == "beta") return SweepVariable::kBeta;
  if (name == "pico_intensity") return SweepVariable::kPicoIntensity;
  throw ParamError("sweep.variable", "unknown variable '" + std::string(name) +
                                         "' (user_intensity|beta|pico_intensity)");
}

void SweepSpec::validate() const {
  base.validate();
  if (grid.empty()) throw ParamError("sweep.grid", "must not be empty");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw ParamError("sweep.grid", "must be strictly increasing");
  }
  if (schemes.empty()) throw ParamError("sweep.schemes", "must not be empty");
  if (simulate && n_trials < 1) throw ParamError("n_trials", "must be >= 1");
  if (nonvoid_prob && !(*nonvoid_prob >= 0.0 && *nonvoid_prob <= 1.0)) {
    throw ParamError("nonvoid_prob", "must lie in [0, 1]");
  }
  if (variable == SweepVariable::kPicoIntensity && base.num_tiers() < 2) {
    throw ParamError("sweep.variable", "pico_intensity needs at least two tiers");
  }
  for (double v : grid) apply_sweep_value(base, variable, v).validate();
}

bool ComparisonRow::has_flag(std::string_view flag) const {
  return std::find(flags.begin(), flags.end(), flag) != flags.end();
}

NetworkParams apply_sweep_value(const NetworkParams& base, SweepVariable variable, double value) {
  NetworkParams p = base;
  switch (variable) {
    case SweepVariable::kUserIntensity:
      p.user_intensity = value;
      break;
    case SweepVariable::kBeta:
      std::fill(p.beta.begin(), p.beta.end(), value);
      break;
    case SweepVariable::kPicoIntensity:
      if (p.tiers.size() < 2) throw ParamError("sweep.variable", "pico_intensity needs two tiers");
      p.tiers.back().intensity = value;
      break;
  }
  return p;
}

std::vector<ComparisonRow> run_sweep(const SweepSpec& spec) {
  spec.validate();
  std::vector<ComparisonRow> rows;
  AnalyticOptions analytic_options;
  analytic_options.kernel_mode = spec.kernel_mode;

  for (double value : spec.grid) {
    const NetworkParams params = apply_sweep_value(spec.base, spec.variable, value);
    const CoverageModel model = spec.nonvoid_prob
                                    ? CoverageModel(params, *spec.nonvoid_prob, analytic_options)
                                    : CoverageModel(params, analytic_options);

    std::optional<CoverageTally> tally;
    if (spec.simulate) {
      SimulationOptions sim;
      sim.n_trials = spec.n_trials;
      sim.seed = spec.seed;
      sim.threads = spec.threads;
      const double lambda = params.total_intensity();
      if (spec.window_half_width) {
        const Window def = Window::for_intensity(lambda);
        sim.window = Window(*spec.window_half_width,
                            std::min(def.margin, 0.5 * *spec.window_half_width));
      }
      tally = simulate(params, spec.schemes, sim);
    }

    for (std::size_t s = 0; s < spec.schemes.size(); ++s) {
      const Scheme scheme = spec.schemes[s];
      for (std::size_t m = 0; m < params.num_tiers(); ++m) {
        const double beta = params.beta[m];
        CoveragePair pair;
        bool divergent = false;
        try {
          pair = model.coverage(m, beta, scheme);
        } catch (const DivergentKernelError&) {
          divergent = true;
          pair.valid = derived_thresholds(params.sir_threshold, beta).valid;
          pair.extrapolated = beta < coop_validity_beta(params.sir_threshold);
          pair.near = model.coop_near(m, beta);
        }
        for (Role role : {Role::kNear, Role::kFar}) {
          ComparisonRow row;
          row.sweep_value = value;
          row.tier = m;
          row.role = role;
          row.scheme = scheme;
          if (divergent && role == Role::kFar) {
            row.analytic = kNaN;
            row.flags.emplace_back("kernel_divergent");
          } else {
            row.analytic = role == Role::kNear ? pair.near : pair.far;
          }
          if (!pair.valid) row.flags.emplace_back("invalid_beta");
          if (pair.extrapolated) row.flags.emplace_back("extrapolated");

          if (tally) {
            const CoverageEstimate e = CoverageEstimate::from_counts(
                scheme, m, role, tally->success(s, m, role), tally->tagged[m]);
            row.simulated = e.n_samples > 0 ? e.p_hat : kNaN;
            row.ci_halfwidth = e.ci_halfwidth;
            row.n_samples = e.n_samples;
            if (e.low_samples) row.flags.emplace_back("low_samples");
          } else {
            row.simulated = kNaN;
          }
          row.abs_gap = std::abs(row.analytic - row.simulated);
          rows.push_back(std::move(row));
        }
      }
    }
  }
  return rows;
}

double max_gap(const std::vector<ComparisonRow>& rows) {
  double g = 0.0;
  for (const auto& r : rows) {
    if (std::isfinite(r.abs_gap)) g = std::max(g, r.abs_gap);
  }
  return g;
}

BetaScan run_beta_scan(const CoverageModel& model, std::size_t tier, Scheme scheme,
                       const std::vector<double>& grid) {
  BetaScan scan;
  scan.points.reserve(grid.size());
  for (double beta : grid) scan.points.emplace_back(beta, model.average(tier, beta, scheme));
  scan.optimum = model.optimize_beta(tier, scheme);
  return scan;
}

BetaScan run_beta_scan(const NetworkParams& params, std::size_t tier, Scheme scheme,
                       const std::vector<double>& grid, const AnalyticOptions& options) {
  return run_beta_scan(CoverageModel(params, options), tier, scheme, grid);
}

std::vector<double> log_spaced(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0 && hi >= lo) || n == 0) throw ParamError("grid", "need 0 < lo <= hi and n >= 1");
  if (n == 1) return {lo};
  std::vector<double> out(n);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> lin_spaced(double lo, double hi, std::size_t n) {
  if (!(hi >= lo) || n == 0) throw ParamError("grid", "need lo <= hi and n >= 1");
  if (n == 1) return {lo};
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  out.back() = hi;
  return out;
}

NetworkParams table_one_preset(PicoPreset preset) {
  const double mu = 5.0e-4;
  return table_one_params(preset == PicoPreset::kLow ? 0.1 * mu : mu);
}

SweepSpec default_user_sweep(PicoPreset preset) {
  SweepSpec spec;
  spec.base = table_one_preset(preset);
  spec.variable = SweepVariable::kUserIntensity;
  spec.grid = log_spaced(5.0e-5, 1.0e-3, 8);
  return spec;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, const std::vector<ComparisonRow>& rows) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << format_double(r.sweep_value) << ',' << r.tier << ',' << to_string(r.role) << ','
        << to_string(r.scheme) << ',' << format_double(r.analytic) << ','
        << format_double(r.simulated) << ',' << format_double(r.ci_halfwidth) << ','
        << r.n_samples << ',' << join_flags(r.flags) << '\n';
  }
}

}  // namespace noma
