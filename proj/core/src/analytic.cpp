#include "noma/analytic.hpp"

#include <cmath>
#include <string>

#include "noma/golden_section.hpp"

namespace noma {
namespace {

constexpr std::size_t kBetaGridPoints = 64;
constexpr double kBetaTolerance = 1e-6;

// q * l. An infinite kernel stays infinite even at q = 0: it comes from a
// zero-power desired signal (beta = 1 for the near user), the continuous
// extension in beta.
ExtendedReal scale_by_q(double q, ExtendedReal l) {
  if (l.is_infinite()) return l;
  if (q == 0.0) return ExtendedReal::finite(0.0);
  return ExtendedReal::finite(q * l.value());
}

double near_coverage(ExtendedReal exponent) {
  if (exponent.is_infinite()) return 0.0;
  return 2.0 / (2.0 + exponent.value());
}

double far_coverage(ExtendedReal exponent) {
  if (exponent.is_infinite()) return 0.0;
  const double e = exponent.value();
  return 2.0 / ((1.0 + e) * (2.0 + e));
}

}  // namespace

LoadModel load_model_from_cell_load(double cell_load) {
  if (!(cell_load >= 0.0)) throw ParamError("cell_load", "must be >= 0");
  LoadModel load;
  load.cell_load = cell_load;
  if (std::isinf(cell_load)) {
    load.nonvoid_prob = 1.0;
  } else {
    // -expm1(-3.5 log1p(2L/7)) keeps full precision as L -> 0.
    load.nonvoid_prob = -std::expm1(-3.5 * std::log1p(2.0 * cell_load / 7.0));
  }
  return load;
}

LoadModel load_model(const NetworkParams& params) {
  params.validate();
  return load_model_from_cell_load(params.user_intensity / params.total_intensity());
}

double user_count_pmf(const LoadModel& load, unsigned n) {
  const double L = load.cell_load;
  if (L == 0.0) return n == 0 ? 1.0 : 0.0;
  const double r = 2.0 * L / 7.0;
  const double nn = static_cast<double>(n);
  const double log_p = std::lgamma(nn + 3.5) - std::lgamma(nn + 1.0) - std::lgamma(3.5) +
                       nn * std::log(r) - (nn + 3.5) * std::log1p(r);
  return std::exp(log_p);
}

DerivedThresholds derived_thresholds(double theta, double beta) {
  if (!(theta > 0.0)) throw ParamError("sir_threshold", "must be > 0");
  if (!(beta >= 0.0 && beta <= 1.0)) throw ParamError("beta", "must lie in [0, 1]");
  DerivedThresholds t;
  const double margin = beta * (1.0 + theta) - theta;
  t.valid = margin > 0.0;
  if (!t.valid) {
    t.theta_hat = ExtendedReal::infinity();
    t.theta_tilde = ExtendedReal::infinity();
    return t;
  }
  const double tilde = theta / margin;
  t.theta_tilde = ExtendedReal::finite(tilde);
  if (beta == 1.0) {
    t.theta_hat = ExtendedReal::infinity();
  } else {
    t.theta_hat = ExtendedReal::finite(std::max(tilde, theta / (1.0 - beta)));
  }
  return t;
}

CoverageModel::CoverageModel(const NetworkParams& params, AnalyticOptions options)
    : CoverageModel(params, load_model(params).nonvoid_prob, options) {}

CoverageModel::CoverageModel(const NetworkParams& params, double nonvoid_prob,
                             AnalyticOptions options)
    : kernels_(params, options.quadrature),
      theta_(params.sir_threshold),
      q_(nonvoid_prob),
      options_(options) {
  if (!(q_ >= 0.0 && q_ <= 1.0)) throw ParamError("nonvoid_prob", "must lie in [0, 1]");
}

CoveragePair CoverageModel::noncoop(std::size_t m, double beta) const {
  const DerivedThresholds t = derived_thresholds(theta_, beta);
  CoveragePair out;
  out.valid = t.valid;
  if (!t.valid) return out;
  out.near = near_coverage(scale_by_q(q_, kernels_.ell(m, t.theta_hat)));
  out.far = far_coverage(scale_by_q(q_, kernels_.ell(m, t.theta_tilde)));
  return out;
}

CoveragePair CoverageModel::coop(std::size_t m, double beta) const {
  const DerivedThresholds t = derived_thresholds(theta_, beta);
  CoveragePair out;
  out.valid = t.valid;
  if (!t.valid) return out;
  out.extrapolated = beta < coop_validity_beta(theta_);
  out.near = coop_near(m, beta);

  const double tilde = t.theta_tilde.value();
  const ExtendedReal q_term =
      kernels_.q_kernel(m, t.theta_tilde, ExtendedReal::finite(tilde / theta_), q_,
                        options_.kernel_mode, options_.tilde_sign);
  if (q_term.is_divergent()) {
    throw DivergentKernelError("cooperative kernel diverges at y = " + std::to_string(tilde / theta_) +
                               " (tier " + std::to_string(m) + ")");
  }
  out.far = far_coverage(q_term);
  return out;
}

double CoverageModel::coop_near(std::size_t m, double beta) const {
  if (!derived_thresholds(theta_, beta).valid) return 0.0;
  const ExtendedReal arg =
      beta == 1.0 ? ExtendedReal::infinity() : ExtendedReal::finite(theta_ / (1.0 - beta));
  return near_coverage(scale_by_q(q_, kernels_.ell(m, arg)));
}

CoveragePair CoverageModel::coverage(std::size_t m, double beta, Scheme scheme) const {
  return scheme == Scheme::kNonCooperative ? noncoop(m, beta) : coop(m, beta);
}

double CoverageModel::average(std::size_t m, double beta, Scheme scheme) const {
  const CoveragePair c = coverage(m, beta, scheme);
  return 0.5 * (c.near + c.far);
}

BetaOptimum CoverageModel::optimize_beta(std::size_t m, Scheme scheme) const {
  const double lo = min_admissible_beta(theta_);
  auto objective = [&](double beta) { return average(m, beta, scheme); };
  const ScalarMaximum best =
      bracketed_maximize(objective, lo, 1.0, kBetaGridPoints, kBetaTolerance);
  BetaOptimum out{best.argmax, best.value, false};
  const double at_one = objective(1.0);
  if (at_one >= out.value) out = {1.0, at_one, true};
  out.at_upper_boundary = out.at_upper_boundary || (1.0 - out.beta_star) <= kBetaTolerance;
  return out;
}

CoveragePair coverage_noncoop(const NetworkParams& params, std::size_t m,
                              const AnalyticOptions& options) {
  return CoverageModel(params, options).noncoop(m, params.beta.at(m));
}

CoveragePair coverage_coop(const NetworkParams& params, std::size_t m,
                           const AnalyticOptions& options) {
  return CoverageModel(params, options).coop(m, params.beta.at(m));
}

double average_coverage(const NetworkParams& params, std::size_t m, Scheme scheme,
                        const AnalyticOptions& options) {
  return CoverageModel(params, options).average(m, params.beta.at(m), scheme);
}

BetaOptimum optimize_beta(const NetworkParams& params, std::size_t m, Scheme scheme,
                          const AnalyticOptions& options) {
  return CoverageModel(params, options).optimize_beta(m, scheme);
}

}  // namespace noma
