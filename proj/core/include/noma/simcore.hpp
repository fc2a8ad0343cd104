#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "noma/geometry.hpp"
#include "noma/params.hpp"

namespace noma {

/// Independent engine for one (seed, trial, stream) triple.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream);

/// One sampled realization of BSs, users, association and void state.
struct NetworkSnapshot {
  Window window;
  std::vector<PointSet> bs;  // per tier
  PointSet users;
  Association association;
  std::vector<std::uint8_t> nonvoid;  // per global BS: 1 iff at least one attached user

  // Flattened per-global-BS views.
  std::vector<Point> bs_position;
  std::vector<double> bs_power;

  std::uint64_t seed = 0;
  std::uint64_t trial = 0;

  std::size_t num_bs() const noexcept { return bs_position.size(); }
  std::size_t tier_of(std::size_t bs) const noexcept { return association.tier_of(bs); }
};

/// Assemble a snapshot from explicit point sets (association, void flags,
/// flattened views).
NetworkSnapshot make_snapshot(const NetworkParams& params, const Window& window,
                              std::vector<PointSet> bs, PointSet users);

/// Sample every tier and the users; deterministic in (seed, trial). Throws
/// SimulationError when the window holds no BS.
NetworkSnapshot build_snapshot(const NetworkParams& params, const Window& window,
                               std::uint64_t seed, std::uint64_t trial);

/// A BS serving two NOMA users, with every fading gain either receiver sees.
struct TaggedCell {
  std::size_t bs = 0;
  std::size_t tier = 0;
  std::size_t near_user = 0;
  std::size_t far_user = 0;
  double near_dist2 = 0.0;
  double far_dist2 = 0.0;
  // Unit-mean exponential gains indexed by global BS id; the entry of the
  // serving BS is the desired-link gain.
  std::vector<double> near_fading;
  std::vector<double> far_fading;
};

/// Draws two distinct attached users uniformly and all fading gains. Returns
/// nullopt for BSs with fewer than two users.
std::optional<TaggedCell> schedule_noma_users(const NetworkSnapshot& snapshot, std::size_t bs,
                                              std::mt19937_64& rng);

/// Received powers at both receivers of a tagged cell (watts-scale, pathloss
/// applied, full BS power on the desired link).
struct LinkBudget {
  double near_desired = 0.0;
  double far_desired = 0.0;
  double near_interference = 0.0;  // non-void BSs other than the server
  double far_interference = 0.0;
  double near_coop = 0.0;  // void BSs
  double far_coop = 0.0;
};

LinkBudget link_budget(const TaggedCell& cell, const NetworkSnapshot& snapshot, double alpha);

struct SirSample {
  bool near_first_stage_ok = false;
  bool near_sic_ok = false;
  bool near_covered = false;
  bool far_covered = false;
  double gamma_near = 0.0;
  double gamma_far = 0.0;
  double interference_near = 0.0;
  double interference_far = 0.0;
  double coop_signal_near = 0.0;
  double coop_signal_far = 0.0;
};

SirSample evaluate_sir(const LinkBudget& budget, Scheme scheme, double theta, double beta);

SirSample eval_noncoop(const TaggedCell& cell, const NetworkSnapshot& snapshot, double alpha,
                       double theta, double beta);
SirSample eval_coop(const TaggedCell& cell, const NetworkSnapshot& snapshot, double alpha,
                    double theta, double beta);

struct CoverageEstimate {
  Scheme scheme = Scheme::kNonCooperative;
  std::size_t tier = 0;
  Role role = Role::kNear;
  double p_hat = 0.0;
  double ci_halfwidth = 0.0;  // 95% normal approximation
  std::uint64_t successes = 0;
  std::uint64_t n_samples = 0;
  bool low_samples = false;  // fewer than kMinTaggedCells

  static constexpr std::uint64_t kMinTaggedCells = 100;
  static CoverageEstimate from_counts(Scheme scheme, std::size_t tier, Role role,
                                      std::uint64_t successes, std::uint64_t n);
};

/// Integer and running-sum statistics of a batch of trials. merge() is
/// associative; estimate_coverage always merges in trial order so float sums
/// are reproducible.
struct CoverageTally {
  std::size_t num_tiers = 0;
  std::vector<Scheme> schemes;
  // [scheme][tier][role]
  std::vector<std::uint64_t> successes;
  std::vector<std::uint64_t> tagged;  // [tier]
  // Inner-region BS statistics.
  std::vector<std::uint64_t> user_count_histogram;  // last bin is overflow
  std::uint64_t inner_bs = 0;
  std::uint64_t inner_void_bs = 0;
  double sum_near_dist2 = 0.0;
  double sum_far_dist2 = 0.0;
  std::uint64_t snapshots = 0;

  static constexpr std::size_t kHistogramBins = 128;

  CoverageTally() = default;
  CoverageTally(std::size_t num_tiers, std::vector<Scheme> schemes);

  std::uint64_t& success(std::size_t scheme_idx, std::size_t tier, Role role);
  std::uint64_t success(std::size_t scheme_idx, std::size_t tier, Role role) const;
  std::uint64_t total_tagged() const noexcept;

  void merge(const CoverageTally& other);
  std::vector<CoverageEstimate> estimates() const;
};

struct SimulationOptions {
  std::size_t n_trials = 100;
  std::uint64_t seed = 1;
  std::optional<Window> window;  // default: Window::for_intensity(lambda_sum)
  unsigned threads = 0;          // 0: hardware concurrency
};

/// Tally over all inner-region tagged cells of n_trials snapshots. Every
/// scheme is evaluated on the same draws.
CoverageTally simulate(const NetworkParams& params, std::span<const Scheme> schemes,
                       const SimulationOptions& options);

/// Per (scheme, tier, role) estimates, ordered scheme-major then tier then
/// near/far.
std::vector<CoverageEstimate> estimate_coverage(const NetworkParams& params,
                                                std::span<const Scheme> schemes,
                                                const SimulationOptions& options);
std::vector<CoverageEstimate> estimate_coverage(const NetworkParams& params, Scheme scheme,
                                                const SimulationOptions& options);

/// Single-trial tally; the unit of work behind simulate().
CoverageTally run_trial(const NetworkParams& params, std::span<const Scheme> schemes,
                        const Window& window, std::uint64_t seed, std::uint64_t trial);

}  // namespace noma
