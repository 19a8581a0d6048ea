#pragma once

#include <cmath>
#include <random>

#include "dca/curvature.hpp"
#include "dca/regimes.hpp"

namespace dca::test {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline double log_uniform(Rng& rng, double lo, double hi) {
  return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

inline bool rel_close(double a, double b, double tol) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

// Valid smooth parameters meeting the decrease precondition. About a third of
// the draws make one term hypoconvex.
inline DcParams random_smooth_params(Rng& rng) {
  for (;;) {
    const double L1 = log_uniform(rng, 0.1, 10.0), L2 = log_uniform(rng, 0.1, 10.0);
    double mu1 = uniform(rng, 0.0, L1), mu2 = uniform(rng, 0.0, L2);
    const double pick = uniform(rng, 0.0, 3.0);
    if (pick < 0.5) mu2 = -uniform(rng, 0.0, mu1);
    else if (pick < 1.0) mu1 = -uniform(rng, 0.0, mu2);
    const DcParams p = make_params(mu1, L1, mu2, L2);
    const auto v = validate(p);
    if (v.valid && v.decrease_precondition) return p;
  }
}

inline int regime_or_zero(const DcParams& p) {
  const auto v = validate(p);
  if (!v.valid || !v.decrease_precondition) return 0;
  return classify(p).index;
}

// A point is on a boundary when a small move of one parameter changes its
// regime. L1 = L2 is such a boundary for the p1/p2 pair.
inline bool on_regime_boundary(const DcParams& p, double step = 1e-6) {
  const int here = regime_or_zero(p);
  for (int axis = 0; axis < 4; ++axis)
    for (double sgn : {-1.0, 1.0}) {
      DcParams q = p;
      if (axis < 2) {
        double& mu = axis == 0 ? q.f1.mu : q.f2.mu;
        mu += sgn * step * std::max(1.0, std::abs(mu));
      } else {
        ExtReal& L = axis == 2 ? q.f1.L : q.f2.L;
        if (!L.is_finite()) continue;
        L = ExtReal(L.value() * (1 + sgn * step));
      }
      if (regime_or_zero(q) != here) return true;
    }
  return false;
}

/// The smooth coefficient table written out row by row, for interior
/// points (finite L, nonzero mu wherever a reciprocal appears).
struct LiteralRow {
  double sigma, sigma_plus, alpha;
  bool domain;
};

inline LiteralRow literal_table1(int i, double L1, double L2, double m1, double m2) {
  const double S1 = 1 / m1 + 1 / m2 + 1 / L2;
  const double S2 = 1 / m1 + 1 / m2 + 1 / L1;
  switch (i) {
    case 1:
      return {(1 / L2) * (L2 - m1) / (L1 - m1), (1 / L2) * (1 + (1 / L2 - 1 / L1) / (1 / m1 - 1 / L1)),
              m1 / L2 * (L1 - L2) / (L1 - m1),
              L1 >= L2 && L2 > m1 && m1 >= 0 && (m2 >= 0 || (m1 > -m2 && -m2 > 0 && S1 <= (1 / L1) * (2 + L2 / m2)))};
    case 2:
      return {(1 / L1) * (1 + (1 / L1 - 1 / L2) / (1 / m2 - 1 / L2)), (1 / L1) * (L1 - m2) / (L2 - m2),
              m2 / L1 * (L2 - L1) / (L2 - m2),
              L2 >= L1 && L1 > m2 && m2 >= 0 && (m1 >= 0 || (m2 > -m1 && -m1 > 0 && S2 <= (1 / L2) * (2 + L1 / m1)))};
    case 3:
      return {(1 / L1) * S1 / (S1 - 1 / L1), 1 / (L2 + m2), -m2 / (L2 + m2),
              m1 > -m2 && -m2 > 0 && L2 > m1 && L1 > m2 && (1 / L1) * (2 + L2 / m2) <= S1 && S1 <= 0};
    case 4:
      return {1 / (L1 + m1), (1 / L2) * S2 / (S2 - 1 / L2), -m1 / (L1 + m1),
              m2 > -m1 && -m1 > 0 && L2 > m1 && L1 > m2 && (1 / L2) * (2 + L1 / m1) <= S2 && S2 <= 0};
    case 5:
      return {0, (m1 + m2) / (m2 * m2), (m1 + m2) / (-m2),
              m1 > -m2 && -m2 > 0 && L1 > m2 && std::max((1 / L1) * (2 + L2 / m2), 0.0) < S1};
    case 6:
      return {(m1 + m2) / (m1 * m1), 0, (m1 + m2) / (-m1),
              m2 > -m1 && -m1 > 0 && L2 > m1 && std::max((1 / L2) * (2 + L1 / m1), 0.0) < S2};
    case 7:
      // mu2 (1/mu1 + 1/mu2 + 1/L2), expanded so that mu2 = 0 gives 1.
      return {0, (L2 + m1) / (L2 * L2), m1 / L2, L1 > m1 && m1 > L2 && L2 > 0 && 1 + m2 / m1 + m2 / L2 >= 0};
    case 8:
      return {(L1 + m2) / (L1 * L1), 0, m2 / L1, L2 > m2 && m2 > L1 && L1 > 0 && 1 + m1 / m2 + m1 / L1 >= 0};
  }
  return {0, 0, 0, false};
}

}  // namespace dca::test
