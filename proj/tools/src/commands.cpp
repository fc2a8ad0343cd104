#include "commands.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "noma/analytic.hpp"
#include "noma/errors.hpp"
#include "noma/experiments.hpp"

namespace noma::cli {
namespace {

std::string fixed6(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

CoverageModel make_model(const ScenarioConfig& c) {
  AnalyticOptions options;
  options.kernel_mode = c.kernel_mode;
  return c.nonvoid_prob ? CoverageModel(c.params, *c.nonvoid_prob, options)
                        : CoverageModel(c.params, options);
}

std::vector<Scheme> configured_schemes(const ScenarioConfig& c) {
  if (c.sweep) return c.sweep->schemes;
  return {Scheme::kNonCooperative, Scheme::kCooperative};
}

void emit(const std::string& text, const std::optional<std::string>& path, std::ostream& out) {
  if (!path) {
    out << text;
    return;
  }
  std::ofstream file(*path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open output file " + *path);
  file << text;
  file.close();
  if (!file) throw IoError("failed writing output file " + *path);
}

}  // namespace

std::string analytic_report(const ScenarioConfig& c) {
  const NetworkParams& p = c.params;
  const CoverageModel model = make_model(c);
  const LoadModel load = load_model(p);
  std::ostringstream os;
  os << "scenario: tiers=" << p.num_tiers() << " alpha=" << format_double(p.pathloss_exponent)
     << " theta=" << format_double(p.sir_threshold)
     << " user_intensity=" << format_double(p.user_intensity)
     << " kernel_mode=" << to_string(c.kernel_mode) << '\n';
  os << "load: cell_load=" << fixed6(load.cell_load)
     << " nonvoid_prob=" << fixed6(model.nonvoid_prob());
  if (c.nonvoid_prob) os << " (override)";
  os << '\n';

  for (std::size_t m = 0; m < p.num_tiers(); ++m) {
    const double beta = p.beta[m];
    const DerivedThresholds t = derived_thresholds(p.sir_threshold, beta);
    os << "tier " << m << ": power_watts=" << format_double(p.tiers[m].power_watts)
       << " intensity=" << format_double(p.tiers[m].intensity) << " beta=" << fixed6(beta)
       << '\n';
    os << "  thresholds: theta_tilde=" << fixed6(t.theta_tilde.as_double())
       << " theta_hat=" << fixed6(t.theta_hat.as_double()) << (t.valid ? " valid" : " invalid")
       << '\n';
    if (!t.valid) os << "  invalid power allocation: β ≤ θ/(1+θ)\n";

    const CoveragePair nc = model.noncoop(m, beta);
    os << "  noncoop: near=" << fixed6(nc.near) << " far=" << fixed6(nc.far) << '\n';

    os << "  coop:    near=" << fixed6(model.coop_near(m, beta)) << " far=";
    bool extrapolated = beta < coop_validity_beta(p.sir_threshold);
    try {
      const CoveragePair co = model.coop(m, beta);
      os << fixed6(co.far);
      extrapolated = co.extrapolated;
    } catch (const DivergentKernelError&) {
      os << "divergent";
    }
    if (extrapolated) os << " (extrapolated: β < (1+θ)/(2+θ))";
    os << '\n';
  }
  return os.str();
}

std::string simulation_csv(const ScenarioConfig& c, bool simulate) {
  SweepSpec spec = c.to_sweep_spec();
  spec.simulate = simulate;
  std::ostringstream os;
  write_csv(os, run_sweep(spec));
  return os.str();
}

std::string optimize_beta_report(const ScenarioConfig& c) {
  const CoverageModel model = make_model(c);
  const std::vector<Scheme> schemes = configured_schemes(c);
  const double lo = min_admissible_beta(c.params.sir_threshold);
  std::vector<double> grid;
  for (int i = 1; i <= 100; ++i) grid.push_back(lo + (1.0 - lo) * i / 100.0);
  grid.back() = 1.0;

  std::vector<std::pair<std::size_t, Scheme>> keys;
  std::vector<BetaScan> scans;
  for (std::size_t m = 0; m < c.params.num_tiers(); ++m) {
    for (Scheme s : schemes) {
      keys.emplace_back(m, s);
      scans.push_back(run_beta_scan(model, m, s, grid));
    }
  }

  std::ostringstream os;
  os << "tier,scheme,beta_star,average_coverage,at_upper_boundary\n";
  for (std::size_t i = 0; i < scans.size(); ++i) {
    const BetaOptimum& o = scans[i].optimum;
    os << keys[i].first << ',' << to_string(keys[i].second) << ',' << format_double(o.beta_star)
       << ',' << format_double(o.value) << ',' << (o.at_upper_boundary ? "true" : "false") << '\n';
  }
  os << "\nbeta,tier,scheme,average_coverage\n";
  for (std::size_t i = 0; i < scans.size(); ++i) {
    for (const auto& [beta, value] : scans[i].points) {
      os << format_double(beta) << ',' << keys[i].first << ',' << to_string(keys[i].second) << ','
         << format_double(value) << '\n';
    }
  }
  return os.str();
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-user NOMA coverage in multi-tier Poisson networks", "noma"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<std::string> kernel_mode;
  std::optional<std::string> out_path;
  std::optional<unsigned> threads;
  bool analytic_only = false;

  app.add_option("--config", config_path, "Scenario JSON file")->required();
  app.add_option("--seed", seed, "Master RNG seed");
  app.add_option("--trials", trials, "Monte Carlo snapshots per sweep point");
  app.add_option("--kernel-mode", kernel_mode, "Cooperative kernel combination")
      ->check(CLI::IsMember({"appendix", "theorem"}));
  app.add_option("--out", out_path, "Output file (default: config 'output' or stdout)");
  app.add_option("--threads", threads, "Worker threads (0: all cores)");

  auto* analytic = app.add_subcommand("analytic", "Closed-form coverage report");
  auto* sim = app.add_subcommand("sim", "Monte Carlo vs analytic CSV");
  auto* sweep = app.add_subcommand("sweep", "CSV over the configured sweep grid");
  sweep->add_flag("--analytic-only", analytic_only, "Skip the simulation columns");
  auto* optimize = app.add_subcommand("optimize-beta", "Coverage-maximizing power split");
  for (auto* sub : {analytic, sim, sweep, optimize}) sub->fallthrough();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    ScenarioConfig config = load_config(config_path);
    if (seed) config.seed = *seed;
    if (trials) {
      if (*trials < 1) throw ParamError("--trials", "must be >= 1");
      config.n_trials = *trials;
    }
    if (kernel_mode) config.kernel_mode = parse_kernel_mode(*kernel_mode);
    if (threads) config.threads = *threads;
    const std::optional<std::string> dest = out_path ? out_path : config.output;

    std::string text;
    if (analytic->parsed()) {
      text = analytic_report(config);
    } else if (optimize->parsed()) {
      text = optimize_beta_report(config);
    } else if (sweep->parsed()) {
      if (!config.sweep) throw ParamError("sweep", "the sweep command needs a sweep section");
      text = simulation_csv(config, !analytic_only);
    } else {
      text = simulation_csv(config, true);
    }
    emit(text, dest, out);
    return kExitOk;
  } catch (const ParamError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const SimulationError& e) {
    err << "simulation failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
}

}  // namespace noma::cli
