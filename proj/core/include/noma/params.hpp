#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace noma {

struct TierParams {
  double power_watts = 0.0;  // P_m
  double intensity = 0.0;    // BSs per m^2

  friend bool operator==(const TierParams&, const TierParams&) = default;
};

/// Full scenario description of an M-tier network serving two NOMA users per
/// cell.
struct NetworkParams {
  std::vector<TierParams> tiers;
  double user_intensity = 0.0;  // users per m^2
  double pathloss_exponent = 4.0;
  double sir_threshold = 1.0;
  std::vector<double> beta;  // fraction of BS power given to the far user, per tier

  std::size_t num_tiers() const noexcept { return tiers.size(); }
  double total_intensity() const noexcept;
  /// lambda_k / sum(lambda)
  double intensity_fraction(std::size_t k) const;

  /// Throws ParamError naming the first offending field.
  void validate() const;

  friend bool operator==(const NetworkParams&, const NetworkParams&) = default;
};

enum class Scheme { kNonCooperative, kCooperative };

enum class Role { kNear, kFar };

/// Which combination of kernels forms the cooperative far-user exponent.
enum class KernelMode {
  kAppendix,  // [q l(x) - (1-q) l(y)]^+
  kTheorem,   // [q l(x) + (1-q) l~(y)]^+
};

std::string_view to_string(Scheme scheme) noexcept;
std::string_view to_string(Role role) noexcept;
std::string_view to_string(KernelMode mode) noexcept;

/// Throw ParamError on unknown names.
Scheme parse_scheme(std::string_view name);
KernelMode parse_kernel_mode(std::string_view name);

/// Two-tier macro/pico deployment: P = {20, 2} W, lambda_macro = 1e-6,
/// mu = 5e-4, theta = 1, alpha = 4, beta = 3/4.
NetworkParams table_one_params(double pico_intensity = 5e-5);

}  // namespace noma
