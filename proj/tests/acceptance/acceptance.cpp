// Acceptance suite: one PASS/FAIL line per criterion. Optional arguments
// select criteria by number, e.g. `acceptance 1 2 8`.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "config.hpp"
#include "noma/analytic.hpp"
#include "noma/experiments.hpp"
#include "noma/quadrature.hpp"
#include "noma/simcore.hpp"
#include "oracles.hpp"

using namespace noma;

namespace {

constexpr std::uint64_t kSeed = 1;

struct Outcome {
  bool pass = true;
  std::string summary;
  std::vector<std::string> info;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      info.push_back("violated: " + what);
    }
  }
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), f, a, b);
  return buf;
}

std::string role_name(std::size_t tier, Role role) {
  return std::string(tier == 0 ? "macro " : "pico ") + std::string(to_string(role));
}

const Scheme kBoth[] = {Scheme::kNonCooperative, Scheme::kCooperative};

// Table I run shared by criteria 3, 6 and 7: enough snapshots for 1e4 tagged
// cells in the sparsest tier.
struct TableOneRun {
  NetworkParams params;
  CoverageTally tally;
  std::size_t trials = 0;
  double seconds = 0.0;
};

const TableOneRun& table_one_run() {
  static const TableOneRun run = [] {
    TableOneRun r;
    r.params = table_one_preset(PicoPreset::kLow);
    const auto start = std::chrono::steady_clock::now();
    SimulationOptions pilot;
    pilot.n_trials = 20;
    pilot.seed = kSeed;
    const CoverageTally p = simulate(r.params, kBoth, pilot);
    const double per_trial =
        static_cast<double>(*std::min_element(p.tagged.begin(), p.tagged.end())) / 20.0;
    SimulationOptions opts = pilot;
    opts.n_trials = static_cast<std::size_t>(std::ceil(1.1e4 / std::max(per_trial, 1.0)));
    r.tally = simulate(r.params, kBoth, opts);
    while (*std::min_element(r.tally.tagged.begin(), r.tally.tagged.end()) < 10000) {
      opts.n_trials += opts.n_trials / 4 + 1;
      r.tally = simulate(r.params, kBoth, opts);
    }
    r.trials = opts.n_trials;
    r.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
  }();
  return run;
}

Outcome kernel_oracle() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  const KernelEvaluator kernels({{1.0, 1.0}}, 4.0);
  double worst_kernel = 0.0;
  double worst_adaptive = 0.0;
  for (double x : {0.1, 0.5, 1.0, 2.0, 4.0, 10.0, 100.0}) {
    const double r = std::sqrt(x);
    const double oracle = r * (0.5 * std::numbers::pi - std::atan(1.0 / r));
    worst_kernel = std::max(worst_kernel, std::abs(kernels.ell(0, x).value() - oracle));
    const double adaptive =
        r * (full_line_integral(4.0) - base_integral_adaptive(1.0 / r, 4.0).value);
    worst_adaptive = std::max(worst_adaptive, std::abs(adaptive - oracle));
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.require(worst_kernel <= 1e-9, "kernel |delta| <= 1e-9");
  o.require(worst_adaptive <= 1e-9, "adaptive |delta| <= 1e-9");
  o.require(secs < 1.0, "runtime < 1 s");
  o.summary = fmt("max |delta| kernel %.2e", worst_kernel) +
              fmt(", adaptive %.2e", worst_adaptive) + fmt(", %.3f s", secs);
  return o;
}

Outcome fixed_point_values() {
  Outcome o;
  NetworkParams p;
  p.tiers = {{1.0, 1e-5}};
  p.user_intensity = 1e-4;
  p.pathloss_exponent = 4.0;
  p.sir_threshold = 1.0;
  p.beta = {0.75};
  const CoveragePair c = CoverageModel(p, 1.0).noncoop(0, 0.75);
  o.require(std::abs(c.near - 0.474575) <= 1e-6, "near = 0.474575 +- 1e-6");
  o.require(std::abs(c.far - 0.253861) <= 1e-6, "far = 0.253861 +- 1e-6");
  o.summary = fmt("near %.7f, far %.7f", c.near, c.far);
  return o;
}

Outcome analytic_vs_simulation() {
  Outcome o;
  const TableOneRun& run = table_one_run();
  const CoverageModel model(run.params);
  double worst = 0.0;
  for (std::size_t m = 0; m < 2; ++m) {
    const CoveragePair a = model.noncoop(m, run.params.beta[m]);
    o.require(run.tally.tagged[m] >= 10000, role_name(m, Role::kNear) + " tier >= 1e4 cells");
    for (Role role : {Role::kNear, Role::kFar}) {
      const auto e = CoverageEstimate::from_counts(Scheme::kNonCooperative, m, role,
                                                   run.tally.success(0, m, role),
                                                   run.tally.tagged[m]);
      const double analytic = role == Role::kNear ? a.near : a.far;
      const double gap = std::abs(analytic - e.p_hat);
      worst = std::max(worst, gap);
      o.require(gap <= 0.03, role_name(m, role) + " |analytic - sim| <= 0.03");
      o.info.push_back(role_name(m, role) + fmt(": analytic %.4f", analytic) +
                       fmt(", sim %.4f +- %.4f", e.p_hat, e.ci_halfwidth) +
                       " (n=" + std::to_string(e.n_samples) + ")");
    }
  }
  o.require(run.seconds <= 600.0, "runtime <= 10 min");
  o.summary = fmt("max gap %.4f", worst) + ", " + std::to_string(run.trials) + " snapshots" +
              fmt(", %.1f s", run.seconds);
  return o;
}

double pooled(const CoverageTally& t, std::size_t scheme, Role role, double* ci) {
  std::uint64_t s = 0;
  for (std::size_t m = 0; m < t.num_tiers; ++m) s += t.success(scheme, m, role);
  const auto e =
      CoverageEstimate::from_counts(t.schemes[scheme], 0, role, s, t.total_tagged());
  *ci = e.ci_halfwidth;
  return e.p_hat;
}

Outcome cooperative_gain() {
  Outcome o;
  SimulationOptions opts;
  opts.n_trials = 100;
  opts.seed = kSeed;

  NetworkParams light = table_one_preset(PicoPreset::kLow);
  light.user_intensity = 1e-4;
  const CoverageTally t = simulate(light, kBoth, opts);
  double ci_nc = 0.0, ci_co = 0.0;
  const double nc = pooled(t, 0, Role::kFar, &ci_nc);
  const double co = pooled(t, 1, Role::kFar, &ci_co);
  o.require(co - nc >= 0.05, "pooled far gain >= 0.05 at mu = 1e-4");
  o.require(co - ci_co > nc + ci_nc, "non-overlapping 95% CIs");
  o.info.push_back(fmt("mu=1e-4 pooled far: noncoop %.4f", nc) + fmt(" +- %.4f", ci_nc) +
                   fmt(", coop %.4f", co) + fmt(" +- %.4f", ci_co) +
                   " (n=" + std::to_string(t.total_tagged()) + ")");
  for (std::size_t m = 0; m < 2; ++m) {
    const auto n = t.tagged[m];
    o.info.push_back(std::string("mu=1e-4 ") + role_name(m, Role::kFar) +
                     fmt(": noncoop %.4f", static_cast<double>(t.success(0, m, Role::kFar)) / n) +
                     fmt(", coop %.4f", static_cast<double>(t.success(1, m, Role::kFar)) / n));
  }

  NetworkParams heavy = table_one_preset(PicoPreset::kLow);
  heavy.user_intensity = 1e-3;
  const double q = load_model(heavy).nonvoid_prob;
  o.require(q >= 0.99, "q >= 0.99 at mu = 1e-3");
  opts.n_trials = 40;
  const CoverageTally h = simulate(heavy, kBoth, opts);
  double worst = 0.0;
  for (std::size_t m = 0; m < 2; ++m) {
    for (Role role : {Role::kNear, Role::kFar}) {
      const double n = static_cast<double>(h.tagged[m]);
      const double diff =
          std::abs(static_cast<double>(h.success(1, m, role)) - h.success(0, m, role)) / n;
      worst = std::max(worst, diff);
      o.require(diff <= 0.02, role_name(m, role) + " |coop - noncoop| <= 0.02 at q >= 0.99");
    }
  }
  o.info.push_back(fmt("mu=1e-3 (q=%.4f): max |coop - noncoop| %.4f", q, worst));
  o.summary = fmt("pooled far gain %.4f at mu=1e-4", co - nc) +
              fmt(", max |coop - noncoop| %.4f at mu=1e-3", worst);
  return o;
}

Outcome qualitative_orderings() {
  Outcome o;
  SweepSpec spec = default_user_sweep(PicoPreset::kLow);
  spec.n_trials = 100;
  spec.seed = kSeed;
  const auto rows = run_sweep(spec);
  // rows: value, scheme, tier, role
  auto at = [&](std::size_t point, std::size_t scheme, std::size_t tier, Role role) {
    return rows[((point * 2 + scheme) * 2 + tier) * 2 + (role == Role::kNear ? 0 : 1)];
  };
  std::size_t checks = 0;
  for (std::size_t i = 0; i < spec.grid.size(); ++i) {
    const std::string where = fmt("mu=%.3g ", spec.grid[i]);
    for (std::size_t m = 0; m < 2; ++m) {
      const auto& near = at(i, 0, m, Role::kNear);
      const auto& far = at(i, 0, m, Role::kFar);
      o.require(near.analytic >= far.analytic, where + role_name(m, Role::kNear) + " analytic >= far");
      o.require(near.simulated >= far.simulated, where + role_name(m, Role::kNear) + " sim >= far");
      checks += 2;
    }
    for (std::size_t s = 0; s < 2; ++s) {
      for (Role role : {Role::kNear, Role::kFar}) {
        const auto& macro = at(i, s, 0, role);
        const auto& pico = at(i, s, 1, role);
        const std::string what = where + std::string(to_string(kBoth[s])) + " " +
                                 std::string(to_string(role)) + " macro > pico";
        o.require(macro.analytic > pico.analytic, what + " (analytic)");
        o.require(macro.simulated > pico.simulated, what + " (sim)");
        checks += 2;
      }
    }
  }
  const auto worst = std::max_element(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.abs_gap < b.abs_gap;
  });
  o.info.push_back(fmt("max |analytic - sim| over the sweep %.4f", max_gap(rows)) +
                   fmt(" (mu=%.3g ", worst->sweep_value) + std::string(to_string(worst->scheme)) +
                   " " + role_name(worst->tier, worst->role) + ")");
  o.summary = std::to_string(checks) + " orderings over " + std::to_string(spec.grid.size()) +
              " sweep points";
  return o;
}

Outcome void_model() {
  Outcome o;
  const TableOneRun& run = table_one_run();
  const CoverageTally& t = run.tally;
  const LoadModel load = load_model(run.params);
  const double void_frac = static_cast<double>(t.inner_void_bs) / t.inner_bs;
  o.require(t.snapshots >= 100, ">= 100 snapshots");
  o.require(std::abs(void_frac - (1.0 - load.nonvoid_prob)) <= 0.01, "void fraction within 0.01");

  double tv = 0.0;
  double covered = 0.0;
  const std::size_t last = CoverageTally::kHistogramBins - 1;
  for (std::size_t n = 0; n < last; ++n) {
    const double pmf = user_count_pmf(load, static_cast<unsigned>(n));
    covered += pmf;
    tv += std::abs(static_cast<double>(t.user_count_histogram[n]) / t.inner_bs - pmf);
  }
  tv += std::abs(static_cast<double>(t.user_count_histogram[last]) / t.inner_bs -
                 std::max(0.0, 1.0 - covered));
  tv *= 0.5;
  o.require(tv <= 0.03, "total variation <= 0.03");
  o.summary = fmt("void fraction %.5f vs 1-q %.5f", void_frac, 1.0 - load.nonvoid_prob) +
              fmt(", TV %.4f", tv) + ", " + std::to_string(t.inner_bs) + " BSs";
  return o;
}

Outcome distance_moments() {
  Outcome o;
  const TableOneRun& run = table_one_run();
  const CoverageTally& t = run.tally;
  const double n = static_cast<double>(t.total_tagged());
  const double scale = 2.0 * std::numbers::pi * run.params.total_intensity();
  const double near_ratio = t.sum_near_dist2 / n * scale;
  const double far_ratio = t.sum_far_dist2 / n * scale / 3.0;
  o.require(n >= 1e4, ">= 1e4 tagged cells");
  o.require(std::abs(near_ratio - 1.0) <= 0.10, "E|U_near|^2 within 10% of 1/(2 pi lambda)");
  o.require(std::abs(far_ratio - 1.0) <= 0.10, "E|U_far|^2 within 10% of 3/(2 pi lambda)");
  o.summary = fmt("near mean / target %.4f, far mean / target %.4f", near_ratio, far_ratio) +
              " over " + std::to_string(t.total_tagged()) + " cells";
  return o;
}

Outcome optimizer() {
  Outcome o;
  NetworkParams p;
  p.tiers = {{1.0, 1e-5}};
  p.user_intensity = 1e-4;
  p.pathloss_exponent = 4.0;
  p.sir_threshold = 1.0;
  p.beta = {0.75};
  const CoverageModel model(p, 1.0);
  const BetaOptimum opt = model.optimize_beta(0, Scheme::kNonCooperative);

  double grid_beta = 0.0, grid_value = -1.0;
  for (int i = 501; i <= 1000; ++i) {
    const double beta = i * 1e-3;
    const double v = test::average_noncoop_alpha4(1.0, beta, 1.0);
    if (v > grid_value) {
      grid_value = v;
      grid_beta = beta;
    }
  }
  o.require(std::abs(opt.beta_star - 0.77) <= 0.02, "beta* = 0.77 +- 0.02");
  o.require(std::abs(opt.beta_star - grid_beta) <= 1e-3, "beta* within grid spacing of oracle");
  o.require(opt.value >= grid_value - 1e-9, "optimum value >= grid oracle maximum");
  o.require(!opt.at_upper_boundary, "interior maximizer");
  const double edge = model.average(0, 0.5 + 1e-4, Scheme::kNonCooperative);
  o.require(edge < 0.01, "average < 0.01 at theta/(1+theta) + 1e-4");
  o.summary = fmt("beta* %.6f (grid oracle %.3f)", opt.beta_star, grid_beta) +
              fmt(", value %.6f", opt.value) + fmt(", average at lower edge %.2e", edge);
  return o;
}

Outcome determinism() {
  Outcome o;
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "noma_acceptance_determinism";
  fs::create_directories(dir);
  const fs::path config = dir / "scenario.json";
  std::ofstream(config) << R"({
    "tiers": [{"power_watts": 20, "intensity": 1e-6}, {"power_watts": 2, "intensity": 5e-5}],
    "user_intensity": 5e-4, "beta": 0.75,
    "sweep": {"variable": "user_intensity", "grid": [1e-4, 5e-4], "schemes": ["noncoop", "coop"]},
    "window_half_width": 2500, "n_trials": 5
  })";

  auto run = [&](const std::vector<std::string>& args, const fs::path& out) {
    std::vector<std::string> full{"noma"};
    full.insert(full.end(), args.begin(), args.end());
    full.insert(full.end(), {"--config", config.string(), "--seed", "11", "--out", out.string()});
    std::ostringstream so, se;
    if (cli::run_cli(full, so, se) != 0) return std::string("exit failure: ") + se.str();
    std::ifstream in(out, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };

  std::size_t compared = 0;
  for (const std::vector<std::string>& cmd :
       std::vector<std::vector<std::string>>{{"analytic"},
                                             {"sim"},
                                             {"sweep"},
                                             {"sweep", "--analytic-only"},
                                             {"optimize-beta"}}) {
    const std::string a = run(cmd, dir / "a.out");
    const std::string b = run(cmd, dir / "b.out");
    o.require(!a.empty() && a.rfind("exit failure", 0) != 0, cmd[0] + " succeeds");
    o.require(a == b, cmd[0] + " byte-identical rerun");
    ++compared;
  }
  std::error_code ec;
  fs::remove_all(dir, ec);
  o.summary = std::to_string(compared) + " commands re-run with identical config and seed";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"kernel oracle equivalence", kernel_oracle},
      {"fixed-point coverage values", fixed_point_values},
      {"analytic vs Monte Carlo", analytic_vs_simulation},
      {"cooperative improvement and convergence", cooperative_gain},
      {"qualitative orderings", qualitative_orderings},
      {"void-model consistency", void_model},
      {"distance moments", distance_moments},
      {"beta optimizer", optimizer},
      {"determinism", determinism},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.summary = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << id << "] " << criteria[i].first << ": "
              << o.summary << '\n';
    for (const auto& line : o.info) std::cout << "    " << line << '\n';
    std::cout.flush();
  }
  return failures == 0 ? 0 : 1;
}
