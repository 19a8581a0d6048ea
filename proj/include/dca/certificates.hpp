#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "dca/engine.hpp"
#include "dca/regimes.hpp"

namespace dca {

/// Absolute slack tolerances are applied after dividing by
/// max(1, |F(x)| + |F(x+)|), the magnitude that limits the rounding of lhs.
struct CertificateTolerances {
  double slack_tol = 1e-9;
  double eq_tol = 1e-7;
};

/// Data of one DCA step x -> x+ as used by the proofs.
struct StepData {
  Vec dx;      // x - x+
  Vec G;       // g1 - g2 at x
  Vec G_plus;  // g1+ - g2+ at x+
  double dF = 0.0;
  double scale = 1.0;
};

StepData step_data(const Trajectory& traj, int k);

/// Regime of the trajectory's declared parameters. Throws precondition_violated
/// outside "mu1 + mu2 > 0 or mu1 = mu2 = 0" and both_nonsmooth when L1 = L2 = inf.
RegimeCertificate regime_for(const DcParams& params);

struct OneStepCheck {
  RegimeCertificate regime;
  int k = 0;
  double lhs = 0.0;  // F(x) - F(x+)
  double rhs = 0.0;  // sigma |G|^2/2 + sigma+ |G+|^2/2
  double slack = 0.0;
  double scale = 1.0;
  bool passed = false;
  bool equality_hit = false;
};

OneStepCheck check_one_step(const Trajectory& traj, int k, const CertificateTolerances& tol = {});
OneStepCheck check_one_step(const StepData& step, const RegimeCertificate& regime, int k,
                            const CertificateTolerances& tol = {});

struct CombinationCheck {
  double rhs = 0.0;
  double slack = 0.0;
  bool passed = false;
};

/// Right-hand side of the alpha-weighted sum of interpolation inequalities the
/// proofs start from (G+-weighted for odd regimes, G-weighted for even ones).
double combination_rhs(const DcParams& params, int regime_index, double alpha, const StepData& step);

CombinationCheck replay_proof_combination(const Trajectory& traj, int k, const RegimeCertificate& regime,
                                          const CertificateTolerances& tol = {});

struct RatePrediction {
  double bound_no_fstar = 0.0;
  std::optional<double> bound_with_fstar;
  double p_used = 0.0;
  int N = 0;
  bool linear_rate_warning = false;
};

struct RateCheck {
  RatePrediction prediction;
  double observed = 0.0;  // min_k |G^k|^2 / 2
  bool holds = false;
  std::optional<bool> holds_with_fstar;
  /// F(x^N) - F* - |G^N|^2 / (2 (L1 - mu2)), when computable.
  std::optional<double> fstar_gap_slack;
  bool fstar_verified = false;
};

/// N-step bounds on min_k |G^k|^2 / 2. With require_fstar the
/// absence of F* raises missing_fstar.
RateCheck check_rate(const Trajectory& traj, std::optional<double> fstar = std::nullopt,
                     bool require_fstar = false, const CertificateTolerances& tol = {});

struct NonsmoothStepCheck {
  int k = 0;
  double T = 0.0;
  double lhs = 0.0;  // mu2|dx|^2/2 + T, or (mu1+mu2)/mu1 T
  double dF = 0.0;
  double slack = 0.0;
  bool passed = false;
  bool t_nonnegative = true;  // only asserted when mu1 >= 0 or mu2 >= 0
};

struct NonsmoothRateCheck {
  std::vector<NonsmoothStepCheck> steps;
  double bound = 0.0;
  double observed = 0.0;
  bool holds = false;
  bool steps_hold = false;
  bool t_sign_ok = true;
};

/// L1 = L2 = inf: per-step T bounds and the N-step bound on min T (+ mu2/2 min |dx|^2).
NonsmoothRateCheck check_nonsmooth_rate(const Trajectory& traj, double fstar,
                                        const CertificateTolerances& tol = {});

/// Everything certify reports for one trajectory.
struct TrajectoryReport {
  bool nonsmooth = false;
  std::optional<RegimeCertificate> regime;
  std::vector<OneStepCheck> one_step;
  std::vector<CombinationCheck> combination;
  std::optional<RateCheck> rate;
  std::optional<NonsmoothRateCheck> nonsmooth_rate;
  std::optional<FstarChoice> fstar;
  CertificateTolerances tolerances;
  bool passed = true;
};

TrajectoryReport certify(const Trajectory& traj, const CertificateTolerances& tol = {});

/// Parameters classified into the given regime (1..8), drawn by rejection.
DcParams draw_regime(int regime, std::mt19937_64& rng);

struct SweepConfig {
  int instances = 10'000;
  std::vector<int> horizons{1, 5, 25};
  int dimension = 3;
  std::uint64_t seed = 1;
  CertificateTolerances tol;
};

struct SweepResult {
  int instances = 0;
  std::array<int, 9> per_regime{};  // index 0 unused
  long one_step_checks = 0;
  long one_step_failures = 0;
  long combination_failures = 0;
  long rate_checks = 0;
  long rate_failures = 0;
  long fstar_rate_checks = 0;
  long fstar_rate_failures = 0;
  double worst_scaled_slack = 0.0;

  bool clean() const {
    return one_step_failures == 0 && combination_failures == 0 && rate_failures == 0 &&
           fstar_rate_failures == 0;
  }
  friend bool operator==(const SweepResult&, const SweepResult&) = default;
};

/// Random quadratic DC instances, stratified over the eight regimes.
SweepResult soundness_sweep(const SweepConfig& config);
SweepResult soundness_sweep_serial(const SweepConfig& config);

struct NonsmoothSweepResult {
  int instances = 0;
  int mu2_nonnegative = 0;
  int mu2_negative = 0;
  long step_checks = 0;
  long step_failures = 0;
  long rate_checks = 0;
  long rate_failures = 0;
  long t_sign_failures = 0;

  bool clean() const { return step_failures == 0 && rate_failures == 0 && t_sign_failures == 0; }
  friend bool operator==(const NonsmoothSweepResult&, const NonsmoothSweepResult&) = default;
};

/// L1 = L2 = inf instances built from abs-plus-quadratic terms.
NonsmoothSweepResult nonsmooth_sweep(const SweepConfig& config);
NonsmoothSweepResult nonsmooth_sweep_serial(const SweepConfig& config);

}  // namespace dca
