#pragma once

#include <cmath>
#include <limits>
#include <string>

namespace dca {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// A real number or +inf. Curvature bounds never need -inf.
///
/// Stored as an IEEE double so that the coefficient tables can be evaluated
/// with plain arithmetic: 1/inf = 0 and, after normalizing -0 to +0, 1/0 = +inf.
class ExtReal {
 public:
  constexpr ExtReal() = default;
  constexpr ExtReal(double v) : v_(v == 0.0 ? 0.0 : v) {}  // NOLINT: implicit by design of the tables

  static constexpr ExtReal infinity() { return ExtReal(kInf); }

  constexpr double value() const { return v_; }
  bool is_inf() const { return std::isinf(v_) && v_ > 0; }
  bool is_finite() const { return std::isfinite(v_); }
  bool is_nan() const { return std::isnan(v_); }

  friend constexpr bool operator==(ExtReal a, ExtReal b) { return a.v_ == b.v_; }
  friend constexpr auto operator<=>(ExtReal a, ExtReal b) { return a.v_ <=> b.v_; }

 private:
  double v_ = 0.0;
};

/// 1/x on the extended reals: 1/(+inf) = 0, 1/0 = +inf (either sign of zero),
/// 1/x for negative finite x is the ordinary (negative) reciprocal.
inline double reciprocal(double x) {
  if (x == 0.0) return kInf;
  if (std::isinf(x)) return 0.0;
  return 1.0 / x;
}

inline double reciprocal(ExtReal x) { return reciprocal(x.value()); }

/// "inf" or a round-trippable decimal.
std::string format_ext(double x);

}  // namespace dca
