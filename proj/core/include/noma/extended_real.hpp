#pragma once

#include <limits>

#include "noma/errors.hpp"

namespace noma {

/// Kernel values over the extended half-line. Infinite and divergent
/// outcomes are explicit states so they never flow through arithmetic as
/// IEEE infinities.
class ExtendedReal {
 public:
  enum class Kind { kFinite, kPosInfinity, kDivergent };

  constexpr ExtendedReal() = default;

  static constexpr ExtendedReal finite(double v) { return ExtendedReal(Kind::kFinite, v); }
  static constexpr ExtendedReal infinity() { return ExtendedReal(Kind::kPosInfinity, 0.0); }
  static constexpr ExtendedReal divergent() { return ExtendedReal(Kind::kDivergent, 0.0); }

  constexpr Kind kind() const noexcept { return kind_; }
  constexpr bool is_finite() const noexcept { return kind_ == Kind::kFinite; }
  constexpr bool is_infinite() const noexcept { return kind_ == Kind::kPosInfinity; }
  constexpr bool is_divergent() const noexcept { return kind_ == Kind::kDivergent; }

  double value() const {
    if (kind_ != Kind::kFinite) throw NumericalError("ExtendedReal: value() on non-finite outcome");
    return value_;
  }

  /// Finite value, +inf, or NaN for divergent. For display and comparisons only.
  double as_double() const noexcept {
    switch (kind_) {
      case Kind::kFinite:
        return value_;
      case Kind::kPosInfinity:
        return std::numeric_limits<double>::infinity();
      case Kind::kDivergent:
        break;
    }
    return std::numeric_limits<double>::quiet_NaN();
  }

  friend constexpr bool operator==(const ExtendedReal&, const ExtendedReal&) = default;

 private:
  constexpr ExtendedReal(Kind kind, double v) : kind_(kind), value_(v) {}

  Kind kind_ = Kind::kFinite;
  double value_ = 0.0;
};

}  // namespace noma
