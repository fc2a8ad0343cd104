#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "noma/extended_real.hpp"
#include "noma/params.hpp"

namespace noma {

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  std::size_t max_subdivisions = std::size_t{1} << 20;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t subdivisions = 0;
};

/// Globally adaptive Gauss-Kronrod (7/15) on a bounded interval [a, b]: the
/// subinterval with the largest |K15 - G7| is bisected until the summed
/// estimate meets tolerance. Throws
/// QuadratureError when the embedded error estimate stays above
/// max(abs_tol, rel_tol * |value|).
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    const QuadratureOptions& options = {});

/// (pi/gamma) / sin(pi/gamma) with gamma = alpha/2: the integral of
/// 1/(1 + t^(alpha/2)) over [0, inf).
double full_line_integral(double alpha);

/// Integral of 1/(1 + t^(alpha/2)) over [0, b]. Uses atan(b) when alpha == 4.
double base_integral(double b, double alpha, const QuadratureOptions& options = {});

/// Same integral, always through adaptive quadrature.
QuadratureResult base_integral_adaptive(double b, double alpha, const QuadratureOptions& options = {});

/// Integral of 1/(1 + t^(alpha/2)) over [b, inf), computed without the
/// cancellation of full_line_integral - base_integral for large b.
double tail_integral(double b, double alpha, const QuadratureOptions& options = {});

/// -Integral of 1/(t^(alpha/2) - 1) over [a, inf) for a > 1; divergent for
/// a <= 1 (log singularity at t = 1).
ExtendedReal tilde_tail_integral(double a, double alpha, const QuadratureOptions& options = {});

/// Reading of the exponent inside the cooperative kernel's expectation.
enum class TildeSign {
  kAsPrinted,        // E[1 - exp(+t^(-alpha/2) H)]: negative, can diverge
  kNegatedExponent,  // E[1 - exp(-t^(-alpha/2) H)]: reduces to the l kernel
};

/// Interference functionals for one network. Depends only on power ratios,
/// intensity fractions and alpha.
class KernelEvaluator {
 public:
  struct Tier {
    double power = 0.0;
    double fraction = 0.0;  // lambda_k / lambda_sum
  };

  explicit KernelEvaluator(const NetworkParams& params, QuadratureOptions options = {});
  KernelEvaluator(std::vector<Tier> tiers, double pathloss_exponent, QuadratureOptions options = {});

  std::size_t num_tiers() const noexcept { return tiers_.size(); }
  double pathloss_exponent() const noexcept { return alpha_; }
  const QuadratureOptions& options() const noexcept { return options_; }

  /// l_m(x). Zero at x = 0, infinite at x = +inf, strictly increasing.
  ExtendedReal ell(std::size_t m, ExtendedReal x) const;
  ExtendedReal ell(std::size_t m, double x) const { return ell(m, ExtendedReal::finite(x)); }

  /// l~_m(y), y > 0.
  ExtendedReal ell_tilde(std::size_t m, double y, TildeSign sign = TildeSign::kAsPrinted) const;

  /// Positive-part combination of the two kernels. At q == 1 both modes
  /// return l_m(x).
  ExtendedReal q_kernel(std::size_t m, ExtendedReal x, ExtendedReal y, double q, KernelMode mode,
                        TildeSign sign = TildeSign::kAsPrinted) const;

 private:
  void check_tier(std::size_t m) const;

  std::vector<Tier> tiers_;
  double alpha_;
  QuadratureOptions options_;
};

}  // namespace noma
