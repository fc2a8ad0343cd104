#include "noma/simcore.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "noma/errors.hpp"

namespace noma {
namespace {

constexpr std::size_t kRoles = 2;

std::size_t role_index(Role role) { return role == Role::kNear ? 0 : 1; }

// d^-alpha from the squared distance.
struct Pathloss {
  double half_alpha;
  bool alpha_four;

  explicit Pathloss(double alpha) : half_alpha(0.5 * alpha), alpha_four(alpha == 4.0) {}

  double operator()(double d2) const {
    if (alpha_four) return 1.0 / (d2 * d2);
    return std::pow(d2, -half_alpha);
  }
};

double safe_ratio(double num, double den) {
  if (den > 0.0) return num / den;
  return num > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

}  // namespace

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

NetworkSnapshot make_snapshot(const NetworkParams& params, const Window& window,
                              std::vector<PointSet> bs, PointSet users) {
  if (bs.size() != params.num_tiers()) {
    throw ParamError("tiers", "snapshot needs one BS set per tier");
  }
  NetworkSnapshot snap;
  snap.window = window;
  snap.bs = std::move(bs);
  snap.users = std::move(users);
  std::size_t total = 0;
  for (const auto& set : snap.bs) total += set.size();
  if (total == 0) throw SimulationError("snapshot: window contains no base station");

  snap.association = associate(snap.bs, snap.users);
  snap.bs_position.reserve(total);
  snap.bs_power.reserve(total);
  for (std::size_t k = 0; k < snap.bs.size(); ++k) {
    for (const auto& p : snap.bs[k].points) {
      snap.bs_position.push_back(p);
      snap.bs_power.push_back(params.tiers[k].power_watts);
    }
  }
  snap.nonvoid.resize(total);
  for (std::size_t b = 0; b < total; ++b) {
    snap.nonvoid[b] = snap.association.user_count(b) > 0 ? 1 : 0;
  }
  return snap;
}

NetworkSnapshot build_snapshot(const NetworkParams& params, const Window& window,
                               std::uint64_t seed, std::uint64_t trial) {
  params.validate();
  std::mt19937_64 rng = make_stream(seed, trial, 0);
  std::vector<PointSet> bs;
  bs.reserve(params.num_tiers());
  for (std::size_t k = 0; k < params.num_tiers(); ++k) {
    bs.push_back(sample_ppp(params.tiers[k].intensity, window, rng, static_cast<int>(k)));
  }
  PointSet users = sample_ppp(params.user_intensity, window, rng, kUserTag);
  NetworkSnapshot snap = make_snapshot(params, window, std::move(bs), std::move(users));
  snap.seed = seed;
  snap.trial = trial;
  return snap;
}

std::optional<TaggedCell> schedule_noma_users(const NetworkSnapshot& snapshot, std::size_t bs,
                                              std::mt19937_64& rng) {
  const auto& attached = snapshot.association.users_of.at(bs);
  const std::size_t n = attached.size();
  if (n < 2) return std::nullopt;

  std::uniform_int_distribution<std::size_t> first(0, n - 1);
  std::uniform_int_distribution<std::size_t> second(0, n - 2);
  const std::size_t i = first(rng);
  std::size_t j = second(rng);
  if (j >= i) ++j;

  TaggedCell cell;
  cell.bs = bs;
  cell.tier = snapshot.tier_of(bs);
  const Point origin = snapshot.bs_position[bs];
  std::size_t a = attached[i];
  std::size_t b = attached[j];
  double da = squared_distance(snapshot.users.points[a], origin);
  double db = squared_distance(snapshot.users.points[b], origin);
  if (db < da) {
    std::swap(a, b);
    std::swap(da, db);
  }
  cell.near_user = a;
  cell.far_user = b;
  cell.near_dist2 = da;
  cell.far_dist2 = db;

  std::exponential_distribution<double> fading(1.0);
  const std::size_t total = snapshot.num_bs();
  cell.near_fading.resize(total);
  cell.far_fading.resize(total);
  for (std::size_t k = 0; k < total; ++k) cell.near_fading[k] = fading(rng);
  for (std::size_t k = 0; k < total; ++k) cell.far_fading[k] = fading(rng);
  return cell;
}

LinkBudget link_budget(const TaggedCell& cell, const NetworkSnapshot& snapshot, double alpha) {
  const Pathloss pathloss(alpha);
  const Point near = snapshot.users.points[cell.near_user];
  const Point far = snapshot.users.points[cell.far_user];
  LinkBudget out;
  const double serving_power = snapshot.bs_power[cell.bs];
  out.near_desired = serving_power * cell.near_fading[cell.bs] * pathloss(cell.near_dist2);
  out.far_desired = serving_power * cell.far_fading[cell.bs] * pathloss(cell.far_dist2);

  const std::size_t total = snapshot.num_bs();
  for (std::size_t k = 0; k < total; ++k) {
    if (k == cell.bs) continue;
    const Point pos = snapshot.bs_position[k];
    const double power = snapshot.bs_power[k];
    const double at_near = power * cell.near_fading[k] * pathloss(squared_distance(pos, near));
    const double at_far = power * cell.far_fading[k] * pathloss(squared_distance(pos, far));
    if (snapshot.nonvoid[k]) {
      out.near_interference += at_near;
      out.far_interference += at_far;
    } else {
      out.near_coop += at_near;
      out.far_coop += at_far;
    }
  }
  return out;
}

SirSample evaluate_sir(const LinkBudget& budget, Scheme scheme, double theta, double beta) {
  const bool coop = scheme == Scheme::kCooperative;
  const double sc_near = coop ? budget.near_coop : 0.0;
  const double sc_far = coop ? budget.far_coop : 0.0;

  SirSample s;
  s.interference_near = budget.near_interference;
  s.interference_far = budget.far_interference;
  s.coop_signal_near = sc_near;
  s.coop_signal_far = sc_far;
  s.gamma_near = safe_ratio((1.0 - beta) * budget.near_desired, budget.near_interference);
  s.gamma_far = safe_ratio(beta * budget.far_desired, budget.far_interference);

  // Decoding events in multiplicative form so an empty interference field
  // needs no special case.
  s.near_first_stage_ok = beta * budget.near_desired + sc_near >=
                          theta * ((1.0 - beta) * budget.near_desired + budget.near_interference);
  s.near_sic_ok = (1.0 - beta) * budget.near_desired >= theta * budget.near_interference;
  s.near_covered = s.near_first_stage_ok && s.near_sic_ok;
  s.far_covered = beta * budget.far_desired + sc_far >=
                  theta * ((1.0 - beta) * budget.far_desired + budget.far_interference);
  return s;
}

SirSample eval_noncoop(const TaggedCell& cell, const NetworkSnapshot& snapshot, double alpha,
                       double theta, double beta) {
  return evaluate_sir(link_budget(cell, snapshot, alpha), Scheme::kNonCooperative, theta, beta);
}

SirSample eval_coop(const TaggedCell& cell, const NetworkSnapshot& snapshot, double alpha,
                    double theta, double beta) {
  return evaluate_sir(link_budget(cell, snapshot, alpha), Scheme::kCooperative, theta, beta);
}

CoverageEstimate CoverageEstimate::from_counts(Scheme scheme, std::size_t tier, Role role,
                                               std::uint64_t successes, std::uint64_t n) {
  CoverageEstimate e;
  e.scheme = scheme;
  e.tier = tier;
  e.role = role;
  e.successes = successes;
  e.n_samples = n;
  e.low_samples = n < kMinTaggedCells;
  if (n > 0) {
    const double nn = static_cast<double>(n);
    e.p_hat = static_cast<double>(successes) / nn;
    e.ci_halfwidth = 1.96 * std::sqrt(e.p_hat * (1.0 - e.p_hat) / nn);
  }
  return e;
}

CoverageTally::CoverageTally(std::size_t tiers, std::vector<Scheme> schemes_)
    : num_tiers(tiers),
      schemes(std::move(schemes_)),
      successes(schemes.size() * tiers * kRoles, 0),
      tagged(tiers, 0),
      user_count_histogram(kHistogramBins, 0) {}

std::uint64_t& CoverageTally::success(std::size_t scheme_idx, std::size_t tier, Role role) {
  return successes[(scheme_idx * num_tiers + tier) * kRoles + role_index(role)];
}

std::uint64_t CoverageTally::success(std::size_t scheme_idx, std::size_t tier, Role role) const {
  return successes[(scheme_idx * num_tiers + tier) * kRoles + role_index(role)];
}

std::uint64_t CoverageTally::total_tagged() const noexcept {
  std::uint64_t n = 0;
  for (auto t : tagged) n += t;
  return n;
}

void CoverageTally::merge(const CoverageTally& other) {
  if (other.num_tiers != num_tiers || other.schemes != schemes) {
    throw std::invalid_argument("CoverageTally::merge: incompatible tallies");
  }
  for (std::size_t i = 0; i < successes.size(); ++i) successes[i] += other.successes[i];
  for (std::size_t i = 0; i < tagged.size(); ++i) tagged[i] += other.tagged[i];
  for (std::size_t i = 0; i < user_count_histogram.size(); ++i) {
    user_count_histogram[i] += other.user_count_histogram[i];
  }
  inner_bs += other.inner_bs;
  inner_void_bs += other.inner_void_bs;
  sum_near_dist2 += other.sum_near_dist2;
  sum_far_dist2 += other.sum_far_dist2;
  snapshots += other.snapshots;
}

std::vector<CoverageEstimate> CoverageTally::estimates() const {
  std::vector<CoverageEstimate> out;
  out.reserve(successes.size());
  for (std::size_t s = 0; s < schemes.size(); ++s) {
    for (std::size_t m = 0; m < num_tiers; ++m) {
      for (Role role : {Role::kNear, Role::kFar}) {
        out.push_back(
            CoverageEstimate::from_counts(schemes[s], m, role, success(s, m, role), tagged[m]));
      }
    }
  }
  return out;
}

CoverageTally run_trial(const NetworkParams& params, std::span<const Scheme> schemes,
                        const Window& window, std::uint64_t seed, std::uint64_t trial) {
  const NetworkSnapshot snap = build_snapshot(params, window, seed, trial);
  std::mt19937_64 rng = make_stream(seed, trial, 1);
  CoverageTally tally(params.num_tiers(), {schemes.begin(), schemes.end()});
  tally.snapshots = 1;

  for (std::size_t b = 0; b < snap.num_bs(); ++b) {
    if (!window.in_inner(snap.bs_position[b])) continue;
    const std::size_t count = snap.association.user_count(b);
    ++tally.inner_bs;
    if (count == 0) ++tally.inner_void_bs;
    ++tally.user_count_histogram[std::min(count, CoverageTally::kHistogramBins - 1)];

    const auto cell = schedule_noma_users(snap, b, rng);
    if (!cell) continue;
    const std::size_t tier = cell->tier;
    const double beta = params.beta[tier];
    ++tally.tagged[tier];
    tally.sum_near_dist2 += cell->near_dist2;
    tally.sum_far_dist2 += cell->far_dist2;

    const LinkBudget budget = link_budget(*cell, snap, params.pathloss_exponent);
    for (std::size_t s = 0; s < schemes.size(); ++s) {
      const SirSample sample = evaluate_sir(budget, schemes[s], params.sir_threshold, beta);
      if (sample.near_covered) ++tally.success(s, tier, Role::kNear);
      if (sample.far_covered) ++tally.success(s, tier, Role::kFar);
    }
  }
  return tally;
}

CoverageTally simulate(const NetworkParams& params, std::span<const Scheme> schemes,
                       const SimulationOptions& options) {
  params.validate();
  if (options.n_trials < 1) throw ParamError("n_trials", "must be >= 1");
  if (schemes.empty()) throw ParamError("schemes", "at least one scheme required");
  const Window window =
      options.window ? *options.window : Window::for_intensity(params.total_intensity());

  std::vector<CoverageTally> per_trial(options.n_trials);
  unsigned threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(options.n_trials)));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= options.n_trials) return;
      try {
        per_trial[t] = run_trial(params, schemes, window, options.seed, t);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(options.n_trials);
        return;
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  CoverageTally total(params.num_tiers(), {schemes.begin(), schemes.end()});
  for (const auto& t : per_trial) total.merge(t);
  return total;
}

std::vector<CoverageEstimate> estimate_coverage(const NetworkParams& params,
                                                std::span<const Scheme> schemes,
                                                const SimulationOptions& options) {
  return simulate(params, schemes, options).estimates();
}

std::vector<CoverageEstimate> estimate_coverage(const NetworkParams& params, Scheme scheme,
                                                const SimulationOptions& options) {
  const Scheme one[] = {scheme};
  return estimate_coverage(params, std::span<const Scheme>(one), options);
}

}  // namespace noma
