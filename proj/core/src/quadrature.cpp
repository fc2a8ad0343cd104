#include "noma/quadrature.hpp"

#include <array>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <string>

namespace noma {
namespace {

// QUADPACK qk15 abscissae and weights on [-1, 1]; Gauss nodes are the odd
// entries of kKronrodNodes.
constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;

  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment kronrod15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (std::size_t i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[i] * sum;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * sum;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

void check_alpha(double alpha) {
  if (!(alpha > 2.0)) throw ParamError("pathloss_exponent", "must be > 2");
}

bool is_alpha_four(double alpha) { return alpha == 4.0; }

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    const QuadratureOptions& options) {
  if (!(std::isfinite(a) && std::isfinite(b))) {
    throw ParamError("interval", "integration limits must be finite");
  }
  if (a == b) return {0.0, 0.0, 1};
  const double sign = b < a ? -1.0 : 1.0;
  if (b < a) std::swap(a, b);

  std::priority_queue<Segment> heap;
  Segment first = kronrod15(f, a, b);
  double total = first.value;
  double total_error = first.error;
  heap.push(first);
  std::size_t count = 1;

  auto tolerance = [&] { return std::max(options.abs_tol, options.rel_tol * std::abs(total)); };

  while (total_error > tolerance()) {
    if (count >= options.max_subdivisions) {
      throw QuadratureError("adaptive quadrature: tolerance not met after " + std::to_string(count) +
                                " subdivisions (error estimate " + std::to_string(total_error) + ")",
                            total_error);
    }
    Segment worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw QuadratureError("adaptive quadrature: interval reached floating-point resolution",
                            total_error);
    }
    heap.pop();
    Segment left = kronrod15(f, worst.a, mid);
    Segment right = kronrod15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++count;
  }

  // Re-sum to shed the drift accumulated by incremental updates.
  double value = 0.0;
  double error = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  return {sign * value, error, count};
}

double full_line_integral(double alpha) {
  check_alpha(alpha);
  const double x = 2.0 * std::numbers::pi / alpha;
  return x / std::sin(x);
}

QuadratureResult base_integral_adaptive(double b, double alpha, const QuadratureOptions& options) {
  check_alpha(alpha);
  if (!(b >= 0.0)) throw ParamError("b", "must be >= 0");
  const double gamma = 0.5 * alpha;
  return integrate_adaptive([gamma](double t) { return 1.0 / (1.0 + std::pow(t, gamma)); }, 0.0, b,
                            options);
}

double base_integral(double b, double alpha, const QuadratureOptions& options) {
  check_alpha(alpha);
  if (!(b >= 0.0)) throw ParamError("b", "must be >= 0");
  if (std::isinf(b)) return full_line_integral(alpha);
  if (is_alpha_four(alpha)) return std::atan(b);
  return base_integral_adaptive(b, alpha, options).value;
}

double tail_integral(double b, double alpha, const QuadratureOptions& options) {
  check_alpha(alpha);
  if (!(b >= 0.0)) throw ParamError("b", "must be >= 0");
  if (std::isinf(b)) return 0.0;
  if (is_alpha_four(alpha)) return b == 0.0 ? 0.5 * std::numbers::pi : std::atan(1.0 / b);
  if (b <= 1.0) return full_line_integral(alpha) - base_integral(b, alpha, options);
  // t = v^(-1/(gamma-1)) maps [b, inf) onto (0, b^(1-gamma)] with a bounded
  // integrand 1 / ((gamma-1)(1 + v^(gamma/(gamma-1)))).
  const double gamma = 0.5 * alpha;
  const double power = gamma / (gamma - 1.0);
  const double upper = std::pow(b, 1.0 - gamma);
  const auto r = integrate_adaptive([power](double v) { return 1.0 / (1.0 + std::pow(v, power)); },
                                    0.0, upper, options);
  return r.value / (gamma - 1.0);
}

ExtendedReal tilde_tail_integral(double a, double alpha, const QuadratureOptions& options) {
  check_alpha(alpha);
  if (!(a >= 0.0)) throw ParamError("a", "must be >= 0");
  if (a <= 1.0) return ExtendedReal::divergent();
  if (std::isinf(a)) return ExtendedReal::finite(0.0);
  // Same substitution as tail_integral; 1/(t^gamma - 1) becomes
  // 1 / ((gamma-1)(1 - v^(gamma/(gamma-1)))) on (0, a^(1-gamma)], a^(1-gamma) < 1.
  const double gamma = 0.5 * alpha;
  const double power = gamma / (gamma - 1.0);
  const double upper = std::pow(a, 1.0 - gamma);
  const auto r = integrate_adaptive([power](double v) { return 1.0 / (1.0 - std::pow(v, power)); },
                                    0.0, upper, options);
  return ExtendedReal::finite(-r.value / (gamma - 1.0));
}

KernelEvaluator::KernelEvaluator(const NetworkParams& params, QuadratureOptions options)
    : alpha_(params.pathloss_exponent), options_(options) {
  params.validate();
  tiers_.reserve(params.num_tiers());
  for (std::size_t k = 0; k < params.num_tiers(); ++k) {
    tiers_.push_back({params.tiers[k].power_watts, params.intensity_fraction(k)});
  }
}

KernelEvaluator::KernelEvaluator(std::vector<Tier> tiers, double pathloss_exponent,
                                 QuadratureOptions options)
    : tiers_(std::move(tiers)), alpha_(pathloss_exponent), options_(options) {
  check_alpha(alpha_);
  if (tiers_.empty()) throw ParamError("tiers", "at least one tier required");
  double sum = 0.0;
  for (const auto& t : tiers_) {
    if (!(t.power > 0.0)) throw ParamError("tiers.power_watts", "must be > 0");
    if (!(t.fraction >= 0.0)) throw ParamError("tiers.fraction", "must be >= 0");
    sum += t.fraction;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw ParamError("tiers.fraction", "fractions must sum to 1");
}

void KernelEvaluator::check_tier(std::size_t m) const {
  if (m >= tiers_.size()) throw ParamError("tier", "index out of range");
}

ExtendedReal KernelEvaluator::ell(std::size_t m, ExtendedReal x) const {
  check_tier(m);
  if (x.is_divergent()) throw ParamError("x", "divergent argument");
  if (x.is_infinite()) return ExtendedReal::infinity();
  const double xv = x.value();
  if (!(xv >= 0.0)) throw ParamError("x", "must be >= 0");
  if (xv == 0.0) return ExtendedReal::finite(0.0);

  // scale * (C - int_0^b) == scale * int_b^inf, with scale = 1/b.
  const double exponent = 2.0 / alpha_;
  const double pm = tiers_[m].power;
  double sum = 0.0;
  for (const auto& tier : tiers_) {
    if (tier.fraction == 0.0) continue;
    const double scale = std::pow(xv * tier.power / pm, exponent);
    const double lower = 1.0 / scale;
    sum += tier.fraction * scale * tail_integral(lower, alpha_, options_);
  }
  return ExtendedReal::finite(sum);
}

ExtendedReal KernelEvaluator::ell_tilde(std::size_t m, double y, TildeSign sign) const {
  check_tier(m);
  if (!(y > 0.0)) throw ParamError("y", "must be > 0");
  if (sign == TildeSign::kNegatedExponent) {
    // E[1 - exp(-s H)] = s / (1 + s) turns the integrand into 1/(1 + t^gamma).
    return ell(m, y);
  }
  const double exponent = 2.0 / alpha_;
  const double pm = tiers_[m].power;
  double sum = 0.0;
  for (const auto& tier : tiers_) {
    if (tier.fraction == 0.0) continue;
    const double scale = std::pow(y * tier.power / pm, exponent);
    const ExtendedReal integral = tilde_tail_integral(1.0 / scale, alpha_, options_);
    if (integral.is_divergent()) return ExtendedReal::divergent();
    sum += tier.fraction * scale * integral.value();
  }
  return ExtendedReal::finite(sum);
}

ExtendedReal KernelEvaluator::q_kernel(std::size_t m, ExtendedReal x, ExtendedReal y, double q,
                                       KernelMode mode, TildeSign sign) const {
  if (!(q >= 0.0 && q <= 1.0)) throw ParamError("q", "must lie in [0, 1]");
  const ExtendedReal lx = ell(m, x);
  if (q == 1.0) return lx;

  ExtendedReal void_term;
  if (mode == KernelMode::kAppendix) {
    void_term = ell(m, y);
  } else {
    if (!y.is_finite()) throw ParamError("y", "theorem-mode kernel needs a finite argument");
    void_term = ell_tilde(m, y.value(), sign);
    if (void_term.is_divergent()) return void_term;
  }

  if (lx.is_infinite()) {
    if (q == 0.0) return ExtendedReal::finite(0.0);
    if (void_term.is_infinite()) throw NumericalError("q_kernel: indeterminate inf - inf");
    return ExtendedReal::infinity();
  }
  if (void_term.is_infinite()) return ExtendedReal::finite(0.0);  // appendix: -inf clamped

  const double weight = mode == KernelMode::kAppendix ? -(1.0 - q) : (1.0 - q);
  const double combined = q * lx.value() + weight * void_term.value();
  return ExtendedReal::finite(std::max(combined, 0.0));
}

}  // namespace noma
