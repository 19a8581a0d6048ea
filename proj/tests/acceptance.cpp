// Acceptance gate: one PASS/FAIL line per criterion. Criterion 8 is reported
// but does not affect the exit code.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "dca/certificates.hpp"
#include "dca/errors.hpp"
#include "dca/oracles.hpp"
#include "dca/probe.hpp"
#include "support.hpp"

using namespace dca;
using dca::test::log_uniform;
using dca::test::uniform;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

constexpr double kConvexTol = 1e-12;
constexpr double kSymmetryTol = 1e-10;
constexpr double kSlackTol = -1e-9;
constexpr double kWitnessSlack = 1e-7;
constexpr double kProbeRecovery = 1e-3;
constexpr double kTrendTol = 0.15;

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

int mirror(int i) { return i % 2 == 1 ? i + 1 : i - 1; }

Outcome convex_constant() {
  dca::test::Rng rng(101);
  double worst = 0;
  for (int n = 0; n < 100; ++n) {
    const double L1 = log_uniform(rng, 1e-2, 1e2), L2 = log_uniform(rng, 1e-2, 1e2);
    const double expect = 1 / L1 + 1 / L2;
    worst = std::max(worst, std::abs(classify(make_params(0, L1, 0, L2)).p - expect) / expect);
  }
  return {worst <= kConvexTol, fmt("max rel err %.2e", worst)};
}

Outcome partition_and_symmetry() {
  const std::pair<double, double> Ls[] = {{2, 1}, {1, 2}, {3, 3}, {10, 1.5}, {0.5, 4}};
  long nodes = 0, multi_interior = 0, mirror_fail = 0, errors = 0;
  for (const auto& [L1, L2] : Ls) {
    const GridSpec g1{-L1, L1, 400}, g2{-L2, L2, 400};
    for (int i = 0; i < g1.steps; ++i)
      for (int j = 0; j < g2.steps; ++j) {
        const DcParams p = make_params(g1.at(i), L1, g2.at(j), L2);
        const auto v = validate(p);
        if (!v.valid || !v.decrease_precondition) continue;
        ++nodes;
        try {
          const auto a = classify(p);
          if (a.matched.size() != 1) {
            if (!dca::test::on_regime_boundary(p)) ++multi_interior;
            continue;
          }
          const auto b = classify(p.swapped());
          if (b.index != mirror(a.index) || !dca::test::rel_close(a.sigma, b.sigma_plus, kSymmetryTol) ||
              !dca::test::rel_close(a.sigma_plus, b.sigma, kSymmetryTol))
            ++mirror_fail;
        } catch (const Error&) {
          ++errors;
        }
      }
  }
  return {multi_interior == 0 && mirror_fail == 0 && errors == 0,
          fmt("%.0f valid nodes, %.0f interior multi-matches, %.0f mirror failures, %.0f errors", nodes,
              multi_interior, mirror_fail, errors)};
}

Outcome soundness() {
  SweepConfig cfg;
  cfg.instances = 10'000;
  cfg.horizons = {1, 5, 25};
  cfg.tol.slack_tol = -kSlackTol;
  const auto r = soundness_sweep(cfg);
  bool all_regimes = true;
  for (int i = 1; i <= 8; ++i) all_regimes = all_regimes && r.per_regime[i] > 0;
  const long failures = r.one_step_failures + r.combination_failures + r.rate_failures + r.fstar_rate_failures;
  return {r.clean() && all_regimes,
          fmt("%.0f one-step checks, %.0f rate checks (%.0f with F*), %.0f failures", r.one_step_checks,
              r.rate_checks, r.fstar_rate_checks, failures)};
}

Outcome equality_witnesses() {
  dca::test::Rng rng(104);
  int bad = 0, total = 0;
  double worst = 0;
  for (int r = 1; r <= 8; ++r)
    for (int n = 0; n < 20; ++n) {
      const DcParams p = draw_regime(r, rng);
      for (int d : {1, 2}) {
        ++total;
        try {
          const PepVariables v = extremal_instance(r, p, d);
          StepData s;
          s.dx = sub(v.x[0], v.x[1]);
          s.G = sub(v.g1[0], v.g2[0]);
          s.G_plus = sub(v.g1[1], v.g2[1]);
          s.dF = v.objective_decrease();
          s.scale = std::max(1.0, std::abs(v.f1[0] - v.f2[0]) + std::abs(v.f1[1] - v.f2[1]));
          const auto c = check_one_step(s, classify(p), 0);
          const bool feasible =
              check_interpolation_serial(v.triplets_f1(), p.f1, kWitnessTol, SlackScale::relative).feasible &&
              check_interpolation_serial(v.triplets_f2(), p.f2, kWitnessTol, SlackScale::relative).feasible;
          worst = std::max(worst, std::abs(c.slack));
          if (!feasible || std::abs(c.slack) > kWitnessSlack) ++bad;
        } catch (const Error&) {
          ++bad;
        }
      }
    }
  return {bad == 0, fmt("%.0f witnesses, %.0f bad, max |slack| %.2e", total, bad, worst)};
}

Outcome probe_consistency() {
  const DcParams pts[] = {make_params(0.5, 2, 0, 1), make_params(0, 1, 0.5, 2), make_params(2, 4, -1, 3),
                          make_params(-1, 3, 2, 4)};
  bool ok = true;
  std::string detail = "N=1 rel:";
  for (int r = 1; r <= 4; ++r) {
    ProbeOptions o;
    o.N = 1;
    o.d = 2;
    o.warm_start = false;
    const auto res = probe(pts[r - 1], o);
    const double rel = res.best_ratio / res.certified_bound;
    ok = ok && res.regime.index == r && res.witness_feasible && rel >= 1 - kProbeRecovery &&
         !res.certificate_violation;
    detail += fmt(" p%.0f=%.6f", r, rel);
  }
  ProbeOptions o;
  o.N = 3;
  o.d = 2;
  const auto res = probe(make_params(2, 10, -1.5, 3), o);
  ok = ok && res.regime.index == 5 && res.best_ratio < res.certified_bound;
  detail += fmt("; N=3 p5 best %.6f < bound %.6f", res.best_ratio, res.certified_bound);
  return {ok, detail};
}

Outcome nonsmooth_suite() {
  SweepConfig cfg;
  cfg.instances = 1'000;
  cfg.tol.slack_tol = -kSlackTol;
  const auto r = nonsmooth_sweep(cfg);
  return {r.clean() && r.mu2_negative > 0 && r.mu2_nonnegative > 0,
          fmt("mu2>=0: %.0f, mu2<0: %.0f, %.0f step checks, %.0f failures", r.mu2_nonnegative, r.mu2_negative,
              r.step_checks, r.step_failures + r.rate_failures + r.t_sign_failures)};
}

std::vector<Triplet> sample(const FunctionSpec& f, dca::test::Rng& rng) {
  std::vector<Triplet> out;
  for (int i = 0; i < 50; ++i) {
    Vec x(f.dimension());
    for (auto& v : x) v = uniform(rng, -3, 3);
    const auto a = evaluate(f, x);
    out.push_back({x, a.subgradient, a.value});
  }
  return out;
}

Outcome interpolation_oracle() {
  dca::test::Rng rng(107);
  std::vector<FunctionSpec> specs;
  for (int n = 0; n < 20; ++n) {
    specs.push_back({QuadraticFamily{{uniform(rng, -1, 3), uniform(rng, -1, 3), uniform(rng, -1, 3)},
                                     {uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1)}},
                     {}});
    specs.push_back({AbsQuadraticFamily{uniform(rng, 0.5, 2), uniform(rng, -1, 2), uniform(rng, -1, 1)}, {}});
    MaxQuadraticsFamily m;
    for (int k = 0; k < 3; ++k) m.pieces.push_back({uniform(rng, -1, 2), uniform(rng, -2, 2), uniform(rng, -1, 1)});
    specs.push_back({m, {}});
  }
  int feasible_fail = 0, missed = 0;
  double worst = 0;
  for (const auto& f : specs) {
    const auto t = sample(f, rng);
    const CurvatureClass cert = certified_class(f);
    const auto r = check_interpolation(t, cert, -kSlackTol);
    worst = std::min(worst, r.min_slack);
    if (r.min_slack < kSlackTol) ++feasible_fail;
    // Lower curvature above every piece.
    const double top = cert.L.is_finite() ? cert.L.value() : cert.mu + 3;
    if (check_interpolation(t, {top + 0.5, ExtReal::infinity()}, -kSlackTol).feasible) ++missed;
    // A finite upper curvature for a term with a kink.
    if (const auto* a = std::get_if<AbsQuadraticFamily>(&f.family))
      if (check_interpolation(t, {a->c, ExtReal(a->c + 0.01)}, -kSlackTol).feasible) ++missed;
  }
  return {feasible_fail == 0 && missed == 0,
          fmt("%.0f specs, %.0f certified-class failures (min slack %.2e), %.0f under-declared accepted",
              static_cast<double>(specs.size()), feasible_fail, worst, missed)};
}

Outcome asymptotic_trend() {
  const DcParams p = make_params(2, 10, -1.5, 3);
  const double target = asymptotic_constants(p).p5();
  const std::vector<int> Ns{2, 4, 6, 8, 10};
  std::vector<double> ratios;
  std::string detail = "1/ratio:";
  for (int N : Ns) {
    ProbeOptions o;
    o.N = N;
    o.d = 2;
    const auto r = probe(p, o);
    ratios.push_back(r.best_ratio);
    detail += fmt(" %.4f", 1 / r.best_ratio);
  }
  const auto fit = fit_rate_trend(Ns, ratios);
  const double rel = std::abs(fit.a - target) / target;
  detail += fmt("; a=%.5f b=%.5f p5_inf=%.5f rel %.3f", fit.a, fit.b, target, rel);
  return {rel <= kTrendTol, detail};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double limit_s;
    bool gating;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {"convex-case constant (rel 1e-12)", 1, true, convex_constant},
      {"regime partition and swap symmetry (1e-10)", 30, true, partition_and_symmetry},
      {"certificate soundness sweep (slack >= -1e-9)", 300, true, soundness},
      {"equality witnesses (|slack| <= 1e-7)", 10, true, equality_witnesses},
      {"probe consistency (>= (1-1e-3)/p at N=1)", 600, true, probe_consistency},
      {"nonsmooth suite (slack >= -1e-9)", 60, true, nonsmooth_suite},
      {"interpolation checker oracle (min slack >= -1e-9)", 30, true, interpolation_oracle},
      {"asymptotic trend (a within 15% of p5_inf, soft)", 1800, false, asymptotic_trend},
  };
  int gating_failures = 0, id = 0;
  for (const auto& c : criteria) {
    ++id;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = o.pass && secs < c.limit_s;
    if (!pass && c.gating) ++gating_failures;
    std::printf("[%s] %d %s: %s (%.1f s, limit %.0f s)%s\n", pass ? "PASS" : "FAIL", id, c.name, o.detail.c_str(),
                secs, c.limit_s, c.gating ? "" : " [soft]");
    std::fflush(stdout);
  }
  return gating_failures == 0 ? 0 : 1;
}
