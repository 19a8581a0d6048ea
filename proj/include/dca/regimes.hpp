#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dca/curvature.hpp"

namespace dca {

/// One evaluated domain condition. `margin` is the signed distance by which
/// the condition holds (negative when it fails).
struct PredicateEval {
  std::string name;
  bool holds = false;
  double margin = 0.0;
};

/// One-step decrease coefficients: F(x) - F(x+) >= sigma |G|^2/2 + sigma_plus |G+|^2/2.
struct Coefficients {
  double sigma = 0.0;
  double sigma_plus = 0.0;
  double alpha = 0.0;  // weight used by the proof combination
};

struct RegimeCertificate {
  int index = 0;      // 1..8
  std::string label;  // "p1".."p8", or "p1,7"/"p2,8" for the one-nonsmooth table
  double sigma = 0.0;
  double sigma_plus = 0.0;
  double p = 0.0;  // sigma + sigma_plus
  double alpha = 0.0;
  bool one_nonsmooth_table = false;
  /// Regimes whose domains held at this point (more than one only on boundaries).
  std::vector<int> matched;
  std::vector<PredicateEval> domain_trace;

  /// p7/p8 converge linearly; their sublinear certificate is valid but loose.
  bool linear_rate_regime() const { return index == 7 || index == 8; }
};

struct ThresholdValues {
  double S1 = 0.0;  // 1/mu1 + 1/mu2 + 1/L2
  double S2 = 0.0;  // 1/mu1 + 1/mu2 + 1/L1
};

struct AsymptoticConstants {
  std::optional<double> p5_inf;
  std::optional<double> p6_inf;
  /// L1 > mu2 and L2 > mu1.
  bool hypotheses_hold = false;

  /// Throw denominator_zero when the constant is undefined.
  double p5() const;
  double p6() const;
};

inline constexpr double kPredicateRelTol = 1e-12;
inline constexpr double kBoundaryAgreementTol = 1e-9;

/// Coefficients of a smooth-table row evaluated without checking its domain.
Coefficients table1_row(int index, const DcParams& params);

/// Coefficients of a one-nonsmooth row (index 1..6, where 1 stands for p1,7 and
/// 2 for p2,8) evaluated without checking its domain.
Coefficients table2_row(int index, const DcParams& params);

/// Domain conditions of a smooth-table row.
std::vector<PredicateEval> table1_domain(int index, const DcParams& params);

/// Classifies parameters with at least one finite L into one of the eight regimes.
/// On a boundary shared by several regimes the lowest index is returned after
/// checking that the coefficient pairs agree.
RegimeCertificate classify(const DcParams& params);

/// Exactly one of L1, L2 infinite: the simplified table.
RegimeCertificate classify_nonsmooth(const DcParams& params);

ThresholdValues thresholds(const DcParams& params);

AsymptoticConstants asymptotic_constants(const DcParams& params);

struct GridSpec {
  double lo = 0.0;
  double hi = 1.0;
  int steps = 2;

  double at(int i) const { return steps <= 1 ? lo : lo + (hi - lo) * i / (steps - 1); }
  /// Parses "lo:hi:steps".
  static GridSpec parse(const std::string& text);
};

struct RegimeMapRow {
  double mu1 = 0.0;
  double mu2 = 0.0;
  int regime = 0;  // 0 outside the valid set
  double p = 0.0;
};

/// One classification per (mu1, mu2) node, row-major in mu1 then mu2.
std::vector<RegimeMapRow> regime_map(ExtReal L1, ExtReal L2, const GridSpec& mu1_grid,
                                     const GridSpec& mu2_grid);
std::vector<RegimeMapRow> regime_map_serial(ExtReal L1, ExtReal L2, const GridSpec& mu1_grid,
                                            const GridSpec& mu2_grid);

}  // namespace dca
