#include "noma/params.hpp"

#include <cmath>
#include <string>

#include "noma/errors.hpp"

namespace noma {

double NetworkParams::total_intensity() const noexcept {
  double sum = 0.0;
  for (const auto& t : tiers) sum += t.intensity;
  return sum;
}

double NetworkParams::intensity_fraction(std::size_t k) const {
  if (k >= tiers.size()) throw ParamError("tier", "index out of range");
  return tiers[k].intensity / total_intensity();
}

void NetworkParams::validate() const {
  if (tiers.empty()) throw ParamError("tiers", "at least one tier required");
  for (std::size_t k = 0; k < tiers.size(); ++k) {
    const std::string prefix = "tiers[" + std::to_string(k) + "].";
    if (!(tiers[k].power_watts > 0.0) || !std::isfinite(tiers[k].power_watts)) {
      throw ParamError(prefix + "power_watts", "must be a finite value > 0");
    }
    if (!(tiers[k].intensity > 0.0) || !std::isfinite(tiers[k].intensity)) {
      throw ParamError(prefix + "intensity", "must be a finite value > 0");
    }
  }
  if (!(user_intensity >= 0.0) || !std::isfinite(user_intensity)) {
    throw ParamError("user_intensity", "must be a finite value >= 0");
  }
  if (!(pathloss_exponent > 2.0) || !std::isfinite(pathloss_exponent)) {
    throw ParamError("pathloss_exponent", "must be > 2");
  }
  if (!(sir_threshold > 0.0) || !std::isfinite(sir_threshold)) {
    throw ParamError("sir_threshold", "must be a finite value > 0");
  }
  if (beta.size() != tiers.size()) {
    throw ParamError("beta", "needs one entry per tier (" + std::to_string(tiers.size()) + ")");
  }
  for (std::size_t k = 0; k < beta.size(); ++k) {
    if (!(beta[k] >= 0.0 && beta[k] <= 1.0)) {
      throw ParamError("beta[" + std::to_string(k) + "]", "must lie in [0, 1]");
    }
  }
}

std::string_view to_string(Scheme scheme) noexcept {
  return scheme == Scheme::kNonCooperative ? "noncoop" : "coop";
}

std::string_view to_string(Role role) noexcept { return role == Role::kNear ? "near" : "far"; }

std::string_view to_string(KernelMode mode) noexcept {
  return mode == KernelMode::kAppendix ? "appendix" : "theorem";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "noncoop") return Scheme::kNonCooperative;
  if (name == "coop") return Scheme::kCooperative;
  throw ParamError("scheme", "unknown scheme '" + std::string(name) + "' (noncoop|coop)");
}

KernelMode parse_kernel_mode(std::string_view name) {
  if (name == "appendix") return KernelMode::kAppendix;
  if (name == "theorem") return KernelMode::kTheorem;
  throw ParamError("kernel_mode", "unknown mode '" + std::string(name) + "' (appendix|theorem)");
}

NetworkParams table_one_params(double pico_intensity) {
  NetworkParams p;
  p.tiers = {{20.0, 1.0e-6}, {2.0, pico_intensity}};
  p.user_intensity = 5.0e-4;
  p.pathloss_exponent = 4.0;
  p.sir_threshold = 1.0;
  p.beta = {0.75, 0.75};
  return p;
}

}  // namespace noma
