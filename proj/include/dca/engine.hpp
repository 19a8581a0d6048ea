#pragma once

#include <optional>
#include <span>
#include <vector>

#include "dca/oracles.hpp"

namespace dca {

struct TrajectoryPoint {
  int k = 0;
  Vec x;
  double f1 = 0.0;
  double f2 = 0.0;
  double F = 0.0;
  Vec g1;  // g1^k; for k >= 1 this is g2^{k-1}
  Vec g2;
  double G_norm_sq = 0.0;
  std::optional<double> T;           // T(x^k), needs x^{k+1}
  std::optional<double> dx_norm_sq;  // |x^k - x^{k+1}|^2
};

enum class StopReason { max_iters, criticality_tol, subproblem_unbounded };
enum class CriticalityMeasure { gap_norm, t_measure };

const char* to_string(StopReason r);

struct Trajectory {
  std::vector<TrajectoryPoint> points;
  DcInstance instance;
  StopReason stop_reason = StopReason::max_iters;
  SubgradSelection policy;
  bool inexact = false;

  /// Number of completed iterations.
  int iterations() const { return static_cast<int>(points.size()) - 1; }
  /// First n iterations (n + 1 points).
  Trajectory prefix(int n) const;
};

struct RunOptions {
  int max_iters = 20;
  double tol = 0.0;  // stop once the selected measure is <= tol
  CriticalityMeasure measure = CriticalityMeasure::gap_norm;
  SubgradSelection policy;
};

/// Runs DCA from x0. A subproblem without minimizer ends the run with
/// stop_reason = subproblem_unbounded and the partial trajectory.
Trajectory run_dca(const DcInstance& instance, std::span<const double> x0, const RunOptions& options);

inline Trajectory run_dca(const DcInstance& instance, std::span<const double> x0, int N, double tol,
                          const SubgradSelection& policy) {
  return run_dca(instance, x0, RunOptions{N, tol, CriticalityMeasure::gap_norm, policy});
}

/// T(x) = f1(x) - f1(x+) - <g1+, x - x+>.
double t_measure(const DcInstance& instance, std::span<const double> x, std::span<const double> x_plus,
                 std::span<const double> g1_plus);

/// T(x) through f1(x) - <g2, x> - inf_w { f1(w) - <g2, w> }, quadratic f1 only.
double t_measure_conjugate_form(const QuadraticFamily& f1, std::span<const double> x,
                                std::span<const double> g2);

}  // namespace dca
