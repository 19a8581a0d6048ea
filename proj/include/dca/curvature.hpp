#pragma once

#include <string>
#include <vector>

#include "dca/ext_real.hpp"

namespace dca {

enum class CurvatureKind { hypoconvex, convex, strongly_convex };

/// Membership data for F_{mu,L}: lower curvature mu, upper curvature L (possibly +inf).
struct CurvatureClass {
  double mu = 0.0;
  ExtReal L = ExtReal::infinity();

  CurvatureKind kind() const {
    if (mu < 0) return CurvatureKind::hypoconvex;
    if (mu == 0) return CurvatureKind::convex;
    return CurvatureKind::strongly_convex;
  }
  bool smooth() const { return L.is_finite(); }

  friend bool operator==(const CurvatureClass&, const CurvatureClass&) = default;
};

/// Curvature bounds of the objective F = f1 - f2; the lower bound may be -inf.
struct ObjectiveBounds {
  double lower;
  double upper;

  friend bool operator==(const ObjectiveBounds&, const ObjectiveBounds&) = default;
};

/// (mu1, L1, mu2, L2) for f1 in F_{mu1,L1} and f2 in F_{mu2,L2}.
struct DcParams {
  CurvatureClass f1;
  CurvatureClass f2;

  double mu1() const { return f1.mu; }
  double mu2() const { return f2.mu; }
  double L1() const { return f1.L.value(); }
  double L2() const { return f2.L.value(); }

  /// F lies in F_{mu1 - L2, L1 - mu2}.
  ObjectiveBounds implied_objective_class() const { return {mu1() - L2(), L1() - mu2()}; }

  /// Exchanges the roles of f1 and f2.
  DcParams swapped() const { return {f2, f1}; }

  friend bool operator==(const DcParams&, const DcParams&) = default;
};

inline DcParams make_params(double mu1, double L1, double mu2, double L2) {
  return {{mu1, ExtReal(L1)}, {mu2, ExtReal(L2)}};
}

struct ValidationReport {
  bool valid = true;
  std::vector<std::string> violations;
  /// mu1 + mu2 > 0 or mu1 = mu2 = 0: required by every decrease certificate.
  bool decrease_precondition = false;
  bool f_nonconvex = false;   // L2 > mu1
  bool f_nonconcave = false;  // L1 > mu2
  bool f1_smooth = false;
  bool f2_smooth = false;
};

ValidationReport validate(const DcParams& params);

/// Moves rho/2 |x|^2 into both terms. The objective is unchanged.
DcParams shift_curvature(const DcParams& params, double rho);

}  // namespace dca
