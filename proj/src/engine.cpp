#include "dca/engine.hpp"

#include <cmath>

#include "dca/errors.hpp"

namespace dca {

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::max_iters: return "max_iters";
    case StopReason::criticality_tol: return "criticality_tol";
    case StopReason::subproblem_unbounded: return "subproblem_unbounded";
  }
  return "max_iters";
}

Trajectory Trajectory::prefix(int n) const {
  if (n < 0 || n > iterations()) throw Error(ErrorKind::bad_input, "prefix longer than trajectory");
  Trajectory out;
  out.instance = instance;
  out.policy = policy;
  out.inexact = inexact;
  out.stop_reason = StopReason::max_iters;
  out.points.assign(points.begin(), points.begin() + n + 1);
  out.points.back().T.reset();
  out.points.back().dx_norm_sq.reset();
  return out;
}

double t_measure(const DcInstance& instance, std::span<const double> x, std::span<const double> x_plus,
                 std::span<const double> g1_plus) {
  return value_at(instance.f1, x) - value_at(instance.f1, x_plus) - dot(g1_plus, sub(x, x_plus));
}

double t_measure_conjugate_form(const QuadraticFamily& f1, std::span<const double> x, std::span<const double> g2) {
  const FunctionSpec spec{f1, {}};
  return value_at(spec, x) - dot(g2, x) - quadratic_conjugate_min(f1, g2);
}

Trajectory run_dca(const DcInstance& instance, std::span<const double> x0, const RunOptions& options) {
  check_instance(instance);
  if (x0.size() != instance.dimension()) throw Error(ErrorKind::bad_input, "x0 has the wrong dimension");
  if (options.max_iters < 0) throw Error(ErrorKind::bad_input, "max_iters must be >= 0");

  Trajectory traj;
  traj.instance = instance;
  traj.policy = options.policy;

  auto make_point = [&](int k, Vec x, Vec g1, double f1) {
    TrajectoryPoint pt;
    pt.k = k;
    pt.x = std::move(x);
    pt.f1 = f1;
    const OracleAnswer a2 = evaluate(instance.f2, pt.x, options.policy);
    pt.f2 = a2.value;
    pt.g2 = a2.subgradient;
    pt.g1 = std::move(g1);
    pt.F = pt.f1 - pt.f2;
    pt.G_norm_sq = dist_sq(pt.g1, pt.g2);
    return pt;
  };

  const OracleAnswer a1 = evaluate(instance.f1, x0, options.policy);
  traj.points.push_back(make_point(0, Vec(x0.begin(), x0.end()), a1.subgradient, a1.value));

  for (int k = 0; k < options.max_iters; ++k) {
    TrajectoryPoint& cur = traj.points.back();
    SubproblemSolution sol;
    try {
      sol = solve_dca_subproblem(instance.f1, cur.g2);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::subproblem_unbounded) throw;
      traj.stop_reason = StopReason::subproblem_unbounded;
      return traj;
    }
    if (!sol.exact) traj.inexact = true;
    // The optimality condition of the subproblem puts g2^k in the f1
    // subdifferential at x^{k+1}; it is the subgradient carried forward.
    Vec g1_next = cur.g2;
    const double f1_next = value_at(instance.f1, sol.x);
    cur.T = cur.f1 - f1_next - dot(g1_next, sub(cur.x, sol.x));
    cur.dx_norm_sq = dist_sq(cur.x, sol.x);
    const double t_cur = *cur.T;
    traj.points.push_back(make_point(k + 1, std::move(sol.x), std::move(g1_next), f1_next));

    const double measure = options.measure == CriticalityMeasure::gap_norm
                               ? std::sqrt(traj.points.back().G_norm_sq)
                               : t_cur;
    if (measure <= options.tol) {
      traj.stop_reason = StopReason::criticality_tol;
      break;
    }
  }
  return traj;
}

}  // namespace dca
