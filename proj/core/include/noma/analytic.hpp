#pragma once

#include <cstddef>

#include "noma/extended_real.hpp"
#include "noma/params.hpp"
#include "noma/quadrature.hpp"

namespace noma {

/// Cell-load quantities derived from the user and BS intensities.
struct LoadModel {
  double cell_load = 0.0;      // L = mu / lambda_sum
  double nonvoid_prob = 0.0;   // q = 1 - (1 + 2L/7)^(-7/2)
};

LoadModel load_model(const NetworkParams& params);
LoadModel load_model_from_cell_load(double cell_load);

/// P[N = n] of the per-BS user count, evaluated in log space.
double user_count_pmf(const LoadModel& load, unsigned n);

struct DerivedThresholds {
  ExtendedReal theta_hat;    // max{theta_tilde, theta / (1 - beta)}
  ExtendedReal theta_tilde;  // theta / (beta (1 + theta) - theta)
  bool valid = false;        // beta > theta / (1 + theta)
};

/// Never throws for an inadmissible beta; `valid` is false instead.
DerivedThresholds derived_thresholds(double theta, double beta);

/// Lower end of the admissible power-allocation interval, theta / (1 + theta).
inline double min_admissible_beta(double theta) { return theta / (1.0 + theta); }
/// Lower end of the range where the cooperative closed forms were derived.
inline double coop_validity_beta(double theta) { return (1.0 + theta) / (2.0 + theta); }

struct CoveragePair {
  double near = 0.0;
  double far = 0.0;
  bool valid = false;         // beta admissible
  bool extrapolated = false;  // coop only: beta below (1 + theta) / (2 + theta)
};

struct AnalyticOptions {
  QuadratureOptions quadrature;
  KernelMode kernel_mode = KernelMode::kAppendix;
  TildeSign tilde_sign = TildeSign::kAsPrinted;
};

struct BetaOptimum {
  double beta_star = 0.0;
  double value = 0.0;
  bool at_upper_boundary = false;
};

/// Closed-form coverage of the two scheduled NOMA users of a tier-m cell.
/// The non-void probability defaults to the load model's q and can be pinned
/// explicitly for what-if evaluations.
class CoverageModel {
 public:
  explicit CoverageModel(const NetworkParams& params, AnalyticOptions options = {});
  CoverageModel(const NetworkParams& params, double nonvoid_prob, AnalyticOptions options = {});

  double nonvoid_prob() const noexcept { return q_; }
  double sir_threshold() const noexcept { return theta_; }
  const KernelEvaluator& kernels() const noexcept { return kernels_; }
  const AnalyticOptions& options() const noexcept { return options_; }

  CoveragePair noncoop(std::size_t m, double beta) const;
  /// Throws DivergentKernelError when the theorem-mode kernel diverges.
  CoveragePair coop(std::size_t m, double beta) const;
  /// Near-user half of coop(); independent of the kernel mode.
  double coop_near(std::size_t m, double beta) const;
  CoveragePair coverage(std::size_t m, double beta, Scheme scheme) const;

  /// (near + far) / 2; zero for inadmissible beta.
  double average(std::size_t m, double beta, Scheme scheme) const;

  /// Maximizes average() over (theta/(1+theta), 1] by 64-point grid
  /// bracketing and golden-section refinement to 1e-6 in beta.
  BetaOptimum optimize_beta(std::size_t m, Scheme scheme) const;

 private:
  KernelEvaluator kernels_;
  double theta_;
  double q_;
  AnalyticOptions options_;
};

// Free-function forms evaluated at params.beta[m] with q from the load model.
CoveragePair coverage_noncoop(const NetworkParams& params, std::size_t m,
                              const AnalyticOptions& options = {});
CoveragePair coverage_coop(const NetworkParams& params, std::size_t m,
                           const AnalyticOptions& options = {});
double average_coverage(const NetworkParams& params, std::size_t m, Scheme scheme,
                        const AnalyticOptions& options = {});
BetaOptimum optimize_beta(const NetworkParams& params, std::size_t m, Scheme scheme,
                          const AnalyticOptions& options = {});

}  // namespace noma
