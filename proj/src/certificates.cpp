#include "dca/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "dca/errors.hpp"
#include "dca/interpolation.hpp"

namespace dca {

StepData step_data(const Trajectory& traj, int k) {
  if (k < 0 || k + 1 >= static_cast<int>(traj.points.size()))
    throw Error(ErrorKind::bad_input, "step index outside trajectory");
  const TrajectoryPoint& a = traj.points[k];
  const TrajectoryPoint& b = traj.points[k + 1];
  StepData s;
  s.dx = sub(a.x, b.x);
  s.G = sub(a.g1, a.g2);
  s.G_plus = sub(b.g1, b.g2);
  s.dF = a.F - b.F;
  s.scale = std::max(1.0, std::abs(a.F) + std::abs(b.F));
  return s;
}

RegimeCertificate regime_for(const DcParams& params) {
  const bool s1 = params.f1.smooth(), s2 = params.f2.smooth();
  if (!s1 && !s2) {
    if (!validate(params).valid) return classify(params);  // reports the violations
    throw Error(ErrorKind::both_nonsmooth, "L1 = L2 = inf has no subgradient-gap certificate");
  }
  if (s1 != s2) return classify_nonsmooth(params);
  return classify(params);
}

OneStepCheck check_one_step(const StepData& step, const RegimeCertificate& regime, int k,
                            const CertificateTolerances& tol) {
  OneStepCheck c;
  c.regime = regime;
  c.k = k;
  c.lhs = step.dF;
  c.rhs = 0.5 * regime.sigma * norm_sq(step.G) + 0.5 * regime.sigma_plus * norm_sq(step.G_plus);
  c.slack = c.lhs - c.rhs;
  c.scale = step.scale;
  c.passed = c.slack / c.scale >= -tol.slack_tol;
  c.equality_hit = std::abs(c.slack) / c.scale <= tol.eq_tol;
  return c;
}

OneStepCheck check_one_step(const Trajectory& traj, int k, const CertificateTolerances& tol) {
  return check_one_step(step_data(traj, k), regime_for(traj.instance.params()), k, tol);
}

double combination_rhs(const DcParams& params, int regime_index, double alpha, const StepData& step) {
  const double q1 = interpolation_rhs(params.f1, step.G, step.dx);
  const double q2 = interpolation_rhs(params.f2, step.G_plus, step.dx);
  if (regime_index % 2 == 1) return q1 + (1.0 + 2.0 * alpha) * q2 - alpha * dot(step.G_plus, step.dx);
  return q2 + (1.0 + 2.0 * alpha) * q1 - alpha * dot(step.G, step.dx);
}

CombinationCheck replay_proof_combination(const Trajectory& traj, int k, const RegimeCertificate& regime,
                                          const CertificateTolerances& tol) {
  const StepData step = step_data(traj, k);
  CombinationCheck c;
  c.rhs = combination_rhs(traj.instance.params(), regime.index, regime.alpha, step);
  c.slack = step.dF - c.rhs;
  const double certified = 0.5 * regime.sigma * norm_sq(step.G) + 0.5 * regime.sigma_plus * norm_sq(step.G_plus);
  // The combination must be implied by interpolation and must dominate the certificate.
  c.passed = c.slack / step.scale >= -tol.slack_tol && (c.rhs - certified) / step.scale >= -tol.slack_tol;
  return c;
}

RateCheck check_rate(const Trajectory& traj, std::optional<double> fstar, bool require_fstar,
                     const CertificateTolerances& tol) {
  const DcParams params = traj.instance.params();
  const RegimeCertificate regime = regime_for(params);
  const int N = traj.iterations();
  if (N < 1) throw Error(ErrorKind::bad_input, "rate check needs at least one iteration");
  if (!(regime.p > 0)) throw Error(ErrorKind::denominator_zero, "p = sigma + sigma_plus is zero");

  RateCheck r;
  bool fstar_verified = false;
  if (!fstar) {
    if (const auto choice = choose_fstar(traj.instance)) {
      fstar = choice->value;
      fstar_verified = choice->verified;
    }
  }
  if (require_fstar && !fstar) throw Error(ErrorKind::missing_fstar, "no F* available for the rate bound");

  const double F0 = traj.points.front().F, FN = traj.points.back().F;
  const double pN = regime.p * N;
  r.prediction.p_used = regime.p;
  r.prediction.N = N;
  r.prediction.bound_no_fstar = (F0 - FN) / pN;
  r.prediction.linear_rate_warning = regime.linear_rate_regime();
  double min_g = kInf;
  for (const auto& pt : traj.points) min_g = std::min(min_g, pt.G_norm_sq);
  r.observed = 0.5 * min_g;
  const double scale = std::max(1.0, std::abs(F0) + std::abs(FN));
  r.holds = r.observed * pN <= F0 - FN + tol.slack_tol * scale;

  const double L1 = params.L1(), mu2 = params.mu2();
  if (fstar && L1 > mu2) {
    const double extra = reciprocal(L1 - mu2);
    const double fscale = std::max(1.0, std::abs(F0) + std::abs(*fstar));
    r.prediction.bound_with_fstar = (F0 - *fstar) / (pN + extra);
    r.holds_with_fstar = r.observed * (pN + extra) <= F0 - *fstar + tol.slack_tol * fscale;
    r.fstar_gap_slack = FN - *fstar - 0.5 * traj.points.back().G_norm_sq * extra;
    r.fstar_verified = fstar_verified;
  }
  return r;
}

NonsmoothRateCheck check_nonsmooth_rate(const Trajectory& traj, double fstar, const CertificateTolerances& tol) {
  const DcParams params = traj.instance.params();
  if (params.f1.smooth() || params.f2.smooth())
    throw Error(ErrorKind::both_smooth, "the T-measure bounds are for L1 = L2 = inf");
  const ValidationReport v = validate(params);
  if (!v.decrease_precondition) throw Error(ErrorKind::precondition_violated, "requires mu1 + mu2 > 0 or mu1 = mu2 = 0");
  const double mu1 = params.mu1(), mu2 = params.mu2();
  const int N = traj.iterations();
  if (N < 1) throw Error(ErrorKind::bad_input, "rate check needs at least one iteration");

  NonsmoothRateCheck r;
  r.steps_hold = true;
  double min_t = kInf, min_dx = kInf;
  for (int k = 0; k < N; ++k) {
    const TrajectoryPoint& a = traj.points[k];
    const TrajectoryPoint& b = traj.points[k + 1];
    NonsmoothStepCheck s;
    s.k = k;
    s.T = *a.T;
    s.dF = a.F - b.F;
    s.lhs = mu2 >= 0 ? 0.5 * mu2 * *a.dx_norm_sq + s.T : (mu1 + mu2) / mu1 * s.T;
    s.slack = s.dF - s.lhs;
    const double scale = std::max(1.0, std::abs(a.F) + std::abs(b.F));
    s.passed = s.slack / scale >= -tol.slack_tol;
    if (mu1 >= 0 || mu2 >= 0) s.t_nonnegative = s.T / scale >= -tol.slack_tol;
    r.steps_hold = r.steps_hold && s.passed;
    r.t_sign_ok = r.t_sign_ok && s.t_nonnegative;
    min_t = std::min(min_t, s.T);
    min_dx = std::min(min_dx, *a.dx_norm_sq);
    r.steps.push_back(s);
  }
  const double F0 = traj.points.front().F;
  const double budget = (F0 - fstar) / N;
  if (mu2 >= 0) {
    r.observed = min_t + 0.5 * mu2 * min_dx;
    r.bound = budget;
  } else {
    r.observed = min_t;
    r.bound = mu1 / (mu1 + mu2) * budget;
  }
  const double scale = std::isfinite(fstar) ? std::max(1.0, std::abs(F0) + std::abs(fstar)) : 1.0;
  r.holds = r.observed <= r.bound + tol.slack_tol * scale / N;
  return r;
}

TrajectoryReport certify(const Trajectory& traj, const CertificateTolerances& tol) {
  TrajectoryReport rep;
  rep.tolerances = tol;
  rep.fstar = choose_fstar(traj.instance);
  const DcParams params = traj.instance.params();
  const int N = traj.iterations();
  if (!params.f1.smooth() && !params.f2.smooth()) {
    rep.nonsmooth = true;
    if (N >= 1) {
      rep.nonsmooth_rate = check_nonsmooth_rate(traj, rep.fstar ? rep.fstar->value : -kInf, tol);
      rep.passed = rep.nonsmooth_rate->holds && rep.nonsmooth_rate->steps_hold && rep.nonsmooth_rate->t_sign_ok;
    }
    return rep;
  }
  rep.regime = regime_for(params);
  for (int k = 0; k < N; ++k) {
    rep.one_step.push_back(check_one_step(step_data(traj, k), *rep.regime, k, tol));
    rep.combination.push_back(replay_proof_combination(traj, k, *rep.regime, tol));
    rep.passed = rep.passed && rep.one_step.back().passed && rep.combination.back().passed;
  }
  if (N >= 1) {
    rep.rate = check_rate(traj, std::nullopt, false, tol);
    rep.passed = rep.passed && rep.rate->holds && rep.rate->holds_with_fstar.value_or(true);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Randomized sweeps.

namespace {

using Rng = std::mt19937_64;

Rng instance_rng(std::uint64_t seed, int index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index)};
  return Rng(seq);
}

double uni(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

// Parameters of an odd regime drawn from a region where that row is likely to
// apply; the caller keeps the draw only when the classifier agrees.
DcParams draw_odd(int odd, Rng& rng) {
  switch (odd) {
    case 1: {
      const double L2 = uni(rng, 0.2, 5.0);
      const double L1 = L2 * uni(rng, 1.0, 4.0);
      const double mu1 = uni(rng, 0.0, 1.0) < 0.15 ? 0.0 : uni(rng, 0.0, L2);
      double mu2;
      const double u = uni(rng, 0.0, 1.0);
      if (u < 0.15) mu2 = 0.0;
      else if (u < 0.55) mu2 = uni(rng, 0.0, 0.95 * L2);
      else mu2 = -uni(rng, 0.0, mu1);
      return make_params(mu1, L1, mu2, L2);
    }
    case 3: {
      const double mu1 = uni(rng, 0.1, 3.0);
      const double L2 = mu1 * uni(rng, 1.05, 5.0);
      // S1 <= 0 exactly when |mu2| <= mu1 L2 / (mu1 + L2).
      const double mu2 = -uni(rng, 0.0, 1.0) * mu1 * L2 / (mu1 + L2);
      const double L1 = uni(rng, 0.2, 10.0);
      return make_params(mu1, std::max(L1, 1.05 * mu1), mu2, L2);
    }
    case 5: {
      const double mu1 = uni(rng, 0.1, 3.0);
      const double L2 = uni(rng, 0.1, 5.0);
      const double mu2 = -uni(rng, mu1 * L2 / (mu1 + L2), mu1);
      const double L1 = mu1 * uni(rng, 1.05, 5.0);
      return make_params(mu1, L1, mu2, L2);
    }
    case 7: {
      const double L2 = uni(rng, 0.1, 2.0);
      const double mu1 = L2 * uni(rng, 1.05, 4.0);
      const double L1 = mu1 * uni(rng, 1.05, 4.0);
      double mu2;
      if (uni(rng, 0.0, 1.0) < 0.5) mu2 = uni(rng, 0.0, 0.95 * L2);
      else mu2 = -uni(rng, 0.0, mu1 * L2 / (mu1 + L2));
      return make_params(mu1, L1, mu2, L2);
    }
    default:
      throw Error(ErrorKind::bad_input, "odd regime expected");
  }
}

}  // namespace

DcParams draw_regime(int regime, std::mt19937_64& rng) {
  for (int attempt = 0; attempt < 10'000; ++attempt) {
    const int odd = regime % 2 == 1 ? regime : regime - 1;
    DcParams p = draw_odd(odd, rng);
    if (regime % 2 == 0) p = p.swapped();
    const ValidationReport v = validate(p);
    if (!v.valid || !v.decrease_precondition) continue;
    try {
      if (classify(p).index == regime) return p;
    } catch (const Error&) {
    }
  }
  throw Error(ErrorKind::no_regime, "could not sample regime " + std::to_string(regime));
}

namespace {


// Curvatures of one quadratic term inside [mu, L], positive when the term
// must give a solvable subproblem. The first two coordinates sit on the ends.
Vec draw_curvatures(double mu, double L, bool positive, int d, Rng& rng) {
  const double lo = positive && mu <= 0 ? 0.05 * L : mu;
  Vec c(d);
  for (int j = 0; j < d; ++j) c[j] = j == 0 ? lo : j == 1 ? L : uni(rng, lo, L);
  std::shuffle(c.begin(), c.end(), rng);
  return c;
}

struct InstanceTally {
  int regime = 0;
  long one_step_checks = 0, one_step_failures = 0, combination_failures = 0;
  long rate_checks = 0, rate_failures = 0, fstar_rate_checks = 0, fstar_rate_failures = 0;
  double worst_scaled_slack = kInf;
};

InstanceTally sweep_one(const SweepConfig& cfg, int index) {
  Rng rng = instance_rng(cfg.seed, index);
  InstanceTally t;
  t.regime = index % 8 + 1;
  const DcParams params = draw_regime(t.regime, rng);
  const int d = cfg.dimension;

  Vec c1 = draw_curvatures(params.mu1(), params.L1(), true, d, rng);
  Vec c2 = draw_curvatures(params.mu2(), params.L2(), false, d, rng);
  if (index % 2 == 1) {
    // Keep F bounded below when the classes allow it, so F* is available.
    for (int j = 0; j < d; ++j)
      if (c2[j] >= c1[j]) c2[j] = std::max(params.mu2(), c1[j] - 0.5 * (c1[j] - params.mu2()));
  }
  Vec b1(d), b2(d), x0(d);
  for (int j = 0; j < d; ++j) {
    b1[j] = uni(rng, -1.0, 1.0);
    b2[j] = uni(rng, -1.0, 1.0);
    x0[j] = uni(rng, -2.0, 2.0);
  }
  DcInstance inst{{QuadraticFamily{c1, b1}, params.f1}, {QuadraticFamily{c2, b2}, params.f2}, std::nullopt};
  const int horizon = *std::max_element(cfg.horizons.begin(), cfg.horizons.end());
  const Trajectory traj = run_dca(inst, x0, RunOptions{horizon, -1.0, CriticalityMeasure::gap_norm, {}});
  const RegimeCertificate regime = regime_for(params);

  for (int k = 0; k < traj.iterations(); ++k) {
    const StepData step = step_data(traj, k);
    const OneStepCheck c = check_one_step(step, regime, k, cfg.tol);
    ++t.one_step_checks;
    if (!c.passed) ++t.one_step_failures;
    t.worst_scaled_slack = std::min(t.worst_scaled_slack, c.slack / c.scale);
    if (!replay_proof_combination(traj, k, regime, cfg.tol).passed) ++t.combination_failures;
  }
  const std::optional<double> fstar = analytic_fstar(inst);
  for (int N : cfg.horizons) {
    if (N > traj.iterations()) continue;
    const RateCheck r = check_rate(traj.prefix(N), fstar, false, cfg.tol);
    ++t.rate_checks;
    if (!r.holds) ++t.rate_failures;
    if (r.holds_with_fstar) {
      ++t.fstar_rate_checks;
      const bool gap_ok =
          !r.fstar_gap_slack || *r.fstar_gap_slack >= -cfg.tol.slack_tol * std::max(1.0, std::abs(*fstar));
      if (!*r.holds_with_fstar || !gap_ok) ++t.fstar_rate_failures;
    }
  }
  return t;
}

SweepResult merge(const std::vector<InstanceTally>& tallies) {
  SweepResult r;
  r.instances = static_cast<int>(tallies.size());
  r.worst_scaled_slack = kInf;
  for (const auto& t : tallies) {
    ++r.per_regime[t.regime];
    r.one_step_checks += t.one_step_checks;
    r.one_step_failures += t.one_step_failures;
    r.combination_failures += t.combination_failures;
    r.rate_checks += t.rate_checks;
    r.rate_failures += t.rate_failures;
    r.fstar_rate_checks += t.fstar_rate_checks;
    r.fstar_rate_failures += t.fstar_rate_failures;
    r.worst_scaled_slack = std::min(r.worst_scaled_slack, t.worst_scaled_slack);
  }
  if (tallies.empty()) r.worst_scaled_slack = 0.0;
  return r;
}

struct NonsmoothTally {
  bool mu2_negative = false;
  long step_checks = 0, step_failures = 0, rate_checks = 0, rate_failures = 0, t_sign_failures = 0;
};

NonsmoothTally nonsmooth_one(const SweepConfig& cfg, int index) {
  Rng rng = instance_rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL, index);
  NonsmoothTally t;
  t.mu2_negative = index % 2 == 1;
  const double c1 = uni(rng, 0.1, 3.0);
  const double c2 = t.mu2_negative ? -uni(rng, 0.0, 0.95) * c1 : (index % 6 == 0 ? 0.0 : uni(rng, 0.0, 0.95) * c1);
  const AbsQuadraticFamily f1{uni(rng, 0.05, 2.0), c1, uni(rng, -1.0, 1.0)};
  const AbsQuadraticFamily f2{uni(rng, 0.05, 2.0), c2, uni(rng, -1.0, 1.0)};
  const DcInstance inst{{f1, {c1, ExtReal::infinity()}}, {f2, {c2, ExtReal::infinity()}}, std::nullopt};
  const Vec x0{uni(rng, -3.0, 3.0)};
  constexpr SubgradPolicy policies[] = {SubgradPolicy::least_norm, SubgradPolicy::leftmost, SubgradPolicy::rightmost,
                                        SubgradPolicy::weighted};
  const SubgradSelection sel{policies[index % 4], uni(rng, 0.0, 1.0)};
  const int horizon = *std::max_element(cfg.horizons.begin(), cfg.horizons.end());
  const Trajectory traj = run_dca(inst, x0, RunOptions{horizon, -1.0, CriticalityMeasure::gap_norm, sel});
  const std::optional<double> fstar = analytic_fstar(inst);
  if (!fstar) throw Error(ErrorKind::missing_fstar, "nonsmooth sweep instance is unbounded below");

  if (traj.iterations() >= 1) {
    const NonsmoothRateCheck full = check_nonsmooth_rate(traj, *fstar, cfg.tol);
    for (const auto& s : full.steps) {
      ++t.step_checks;
      if (!s.passed) ++t.step_failures;
      if (!s.t_nonnegative) ++t.t_sign_failures;
    }
  }
  for (int N : cfg.horizons) {
    if (N > traj.iterations()) continue;
    ++t.rate_checks;
    if (!check_nonsmooth_rate(traj.prefix(N), *fstar, cfg.tol).holds) ++t.rate_failures;
  }
  return t;
}

NonsmoothSweepResult merge(const std::vector<NonsmoothTally>& tallies) {
  NonsmoothSweepResult r;
  r.instances = static_cast<int>(tallies.size());
  for (const auto& t : tallies) {
    (t.mu2_negative ? r.mu2_negative : r.mu2_nonnegative)++;
    r.step_checks += t.step_checks;
    r.step_failures += t.step_failures;
    r.rate_checks += t.rate_checks;
    r.rate_failures += t.rate_failures;
    r.t_sign_failures += t.t_sign_failures;
  }
  return r;
}

template <class Tally, class Fn>
std::vector<Tally> run_parallel(int n, Fn fn) {
  std::vector<Tally> out(n);
  int failed_at = n;
  std::optional<Error> failure;
#pragma omp parallel for schedule(dynamic, 16)
  for (int i = 0; i < n; ++i) {
    try {
      out[i] = fn(i);
    } catch (const Error& e) {
#pragma omp critical(dca_sweep_error)
      if (i < failed_at) {
        failed_at = i;
        failure.emplace(e);
      }
    }
  }
  if (failure) throw *failure;
  return out;
}

template <class Tally, class Fn>
std::vector<Tally> run_serial(int n, Fn fn) {
  std::vector<Tally> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(fn(i));
  return out;
}

void check_config(const SweepConfig& cfg) {
  if (cfg.instances < 0 || cfg.dimension < 1 || cfg.horizons.empty())
    throw Error(ErrorKind::bad_input, "sweep needs instances >= 0, dimension >= 1 and a horizon");
  for (int N : cfg.horizons)
    if (N < 1) throw Error(ErrorKind::bad_input, "horizons must be >= 1");
}

}  // namespace

SweepResult soundness_sweep(const SweepConfig& config) {
  check_config(config);
  return merge(run_parallel<InstanceTally>(config.instances, [&](int i) { return sweep_one(config, i); }));
}

SweepResult soundness_sweep_serial(const SweepConfig& config) {
  check_config(config);
  return merge(run_serial<InstanceTally>(config.instances, [&](int i) { return sweep_one(config, i); }));
}

NonsmoothSweepResult nonsmooth_sweep(const SweepConfig& config) {
  check_config(config);
  return merge(run_parallel<NonsmoothTally>(config.instances, [&](int i) { return nonsmooth_one(config, i); }));
}

NonsmoothSweepResult nonsmooth_sweep_serial(const SweepConfig& config) {
  check_config(config);
  return merge(run_serial<NonsmoothTally>(config.instances, [&](int i) { return nonsmooth_one(config, i); }));
}

}  // namespace dca
