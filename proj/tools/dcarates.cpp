// dcarates: classify DC parameter points, run DCA, verify rate certificates
// and probe their tightness.
#include <omp.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dca/certificates.hpp"
#include "dca/errors.hpp"
#include "dca/io.hpp"
#include "dca/probe.hpp"
#include "dca/regimes.hpp"

namespace {

using nlohmann::json;
using namespace dca;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitCheckFailed = 2;

// CLI11 reads TOML/INI by default; this maps a JSON object onto option names.
// Nested objects address subcommands: {"probe": {"N": 3}, "jobs": 2}.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}"; }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    json j;
    try {
      input >> j;
    } catch (const json::exception& e) {
      throw CLI::ConversionError(std::string("config file is not valid JSON: ") + e.what());
    }
    std::vector<CLI::ConfigItem> items;
    flatten(j, {}, items);
    return items;
  }

 private:
  static std::string scalar(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
  }

  static void flatten(const json& j, std::vector<std::string> parents, std::vector<CLI::ConfigItem>& out) {
    if (!j.is_object()) throw CLI::ConversionError("config file must hold a JSON object");
    for (const auto& [key, value] : j.items()) {
      if (value.is_object()) {
        auto nested = parents;
        nested.push_back(key);
        flatten(value, nested, out);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array())
        for (const auto& e : value) item.inputs.push_back(scalar(e));
      else
        item.inputs.push_back(scalar(value));
      out.push_back(std::move(item));
    }
  }
};

// Accepts "inf" so that nonsmooth terms can be given on the command line.
double parse_ext(const std::string& text, const char* what) {
  if (text == "inf" || text == "+inf" || text == "Inf") return kInf;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty())
    throw Error(ErrorKind::bad_input, std::string("cannot parse ") + what + " = '" + text + "'");
  return v;
}

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_ext(item, what));
  if (out.empty()) throw Error(ErrorKind::bad_input, std::string(what) + " is empty");
  return out;
}

std::string fmt(double v) { return format_ext(v); }

struct ParamFlags {
  std::string file;
  std::string mu1, L1, mu2, L2;

  void attach(CLI::App* app) {
    app->add_option("--params", file, "JSON file with mu1, L1, mu2, L2");
    app->add_option("--mu1", mu1, "lower curvature of f1");
    app->add_option("--L1", L1, "upper curvature of f1 (number or inf)");
    app->add_option("--mu2", mu2, "lower curvature of f2");
    app->add_option("--L2", L2, "upper curvature of f2 (number or inf)");
  }

  DcParams get() const {
    const bool any_flag = !mu1.empty() || !L1.empty() || !mu2.empty() || !L2.empty();
    if (!file.empty() && any_flag) throw Error(ErrorKind::bad_input, "--params conflicts with --mu1/--L1/--mu2/--L2");
    if (!file.empty()) return io::params_from_json(io::read_json_file(file));
    if (mu1.empty() || L1.empty() || mu2.empty() || L2.empty())
      throw Error(ErrorKind::bad_input, "need --params or all of --mu1 --L1 --mu2 --L2");
    return make_params(parse_ext(mu1, "mu1"), parse_ext(L1, "L1"), parse_ext(mu2, "mu2"), parse_ext(L2, "L2"));
  }
};

DcParams checked(const DcParams& p) {
  const auto report = validate(p);
  if (!report.valid) {
    std::string why;
    for (const auto& v : report.violations) why += (why.empty() ? "" : "; ") + v;
    throw Error(ErrorKind::invalid_params, why);
  }
  return p;
}

json provenance(const json& tolerances) {
  return {{"revision", DCA_FORMULA_REVISION}, {"tolerances", tolerances}};
}

void emit(const std::string& path, const json& j) {
  if (!path.empty()) io::write_text_file(path, j.dump(2) + "\n");
}

json tol_json(const CertificateTolerances& t) { return {{"slack_tol", t.slack_tol}, {"eq_tol", t.eq_tol}}; }

void print_regime(const RegimeCertificate& c) {
  std::printf("regime %d (%s)%s\n", c.index, c.label.c_str(), c.one_nonsmooth_table ? "  [one nonsmooth term]" : "");
  std::printf("  sigma      = %s\n  sigma_plus = %s\n  p          = %s\n  alpha      = %s\n", fmt(c.sigma).c_str(),
              fmt(c.sigma_plus).c_str(), fmt(c.p).c_str(), fmt(c.alpha).c_str());
  if (c.matched.size() > 1) {
    std::printf("  boundary point, matched:");
    for (int m : c.matched) std::printf(" %d", m);
    std::printf("\n");
  }
  if (c.linear_rate_regime()) std::printf("  note: this regime converges linearly; the sublinear bound is loose\n");
}

// classify ------------------------------------------------------------------

struct ClassifyCmd {
  ParamFlags params;
  std::string out;

  int run() const {
    const DcParams p = checked(params.get());
    const RegimeCertificate c = regime_for(p);
    print_regime(c);
    json j = provenance({{"predicate_rel_tol", kPredicateRelTol}, {"boundary_agreement_tol", kBoundaryAgreementTol}});
    j["params"] = io::to_json(p);
    j["certificate"] = io::to_json(c);
    if (p.f1.smooth() && p.f2.smooth()) {
      const auto th = thresholds(p);
      j["thresholds"] = {{"S1", io::ext_to_json(th.S1)}, {"S2", io::ext_to_json(th.S2)}};
    }
    emit(out, j);
    return kExitOk;
  }
};

// regime-map ----------------------------------------------------------------

struct RegimeMapCmd {
  std::string L1, L2, grid, grid_mu1, grid_mu2, out;

  int run() const {
    if (grid.empty() && (grid_mu1.empty() || grid_mu2.empty()))
      throw Error(ErrorKind::bad_input, "need --grid or both --grid-mu1 and --grid-mu2");
    const GridSpec g1 = GridSpec::parse(grid_mu1.empty() ? grid : grid_mu1);
    const GridSpec g2 = GridSpec::parse(grid_mu2.empty() ? grid : grid_mu2);
    const auto rows = regime_map(ExtReal(parse_ext(L1, "L1")), ExtReal(parse_ext(L2, "L2")), g1, g2);
    std::map<int, long> counts;
    for (const auto& r : rows) ++counts[r.regime];
    std::printf("%zu nodes\n", rows.size());
    for (const auto& [idx, n] : counts) std::printf("  regime %d: %ld\n", idx, n);
    if (!out.empty()) {
      std::ostringstream csv;
      io::write_regime_map_csv(csv, rows);
      io::write_text_file(out, csv.str());
    }
    return kExitOk;
  }
};

// run / certify ---------------------------------------------------------------

struct TolFlags {
  CertificateTolerances tol;
  void attach(CLI::App* app) {
    app->add_option("--slack-tol", tol.slack_tol, "scaled slack below -tol fails a check")->capture_default_str();
    app->add_option("--eq-tol", tol.eq_tol, "scaled |slack| below which a step is an equality")->capture_default_str();
  }
};

int report_certificate(const TrajectoryReport& r) {
  if (r.regime) print_regime(*r.regime);
  if (r.nonsmooth) std::printf("both terms nonsmooth: T-measure bounds\n");
  int failed_steps = 0, equalities = 0;
  for (const auto& s : r.one_step) {
    failed_steps += !s.passed;
    equalities += s.equality_hit;
  }
  if (!r.one_step.empty())
    std::printf("one-step checks: %zu, failed %d, equalities %d\n", r.one_step.size(), failed_steps, equalities);
  if (r.rate) {
    std::printf("N-step bound (N=%d): observed %s <= %s : %s\n", r.rate->prediction.N, fmt(r.rate->observed).c_str(),
                fmt(r.rate->prediction.bound_no_fstar).c_str(), r.rate->holds ? "holds" : "FAILS");
    if (r.rate->holds_with_fstar)
      std::printf("N-step bound with F*: %s <= %s : %s%s\n", fmt(r.rate->observed).c_str(),
                  fmt(*r.rate->prediction.bound_with_fstar).c_str(), *r.rate->holds_with_fstar ? "holds" : "FAILS",
                  r.rate->fstar_verified ? "" : " (F* unverified)");
  }
  if (r.nonsmooth_rate)
    std::printf("T bound: observed %s <= %s : %s, per-step %s\n", fmt(r.nonsmooth_rate->observed).c_str(),
                fmt(r.nonsmooth_rate->bound).c_str(), r.nonsmooth_rate->holds ? "holds" : "FAILS",
                r.nonsmooth_rate->steps_hold ? "hold" : "FAIL");
  std::printf("certificate: %s\n", r.passed ? "PASS" : "FAIL");
  return r.passed ? kExitOk : kExitCheckFailed;
}

json report_json(const TrajectoryReport& r) {
  json j = provenance(tol_json(r.tolerances));
  j["report"] = io::to_json(r);
  return j;
}

struct RunCmd {
  std::string instance, x0, measure = "gap", policy = "least_norm", out, csv, cert_out;
  int N = 20;
  double tol = 0.0, weight = 0.5;
  bool do_certify = false;
  TolFlags tols;

  int run() const {
    const DcInstance inst = io::instance_from_json(io::read_json_file(instance));
    Vec start = parse_list(x0, "x0");
    if (start.size() == 1 && inst.dimension() > 1) start.assign(inst.dimension(), start[0]);
    if (start.size() != inst.dimension()) throw Error(ErrorKind::bad_input, "x0 has the wrong dimension");
    if (N < 0) throw Error(ErrorKind::bad_input, "N must be >= 0");
    RunOptions opt;
    opt.max_iters = N;
    opt.tol = tol;
    if (measure == "gap") opt.measure = CriticalityMeasure::gap_norm;
    else if (measure == "T") opt.measure = CriticalityMeasure::t_measure;
    else throw Error(ErrorKind::bad_input, "--measure must be gap or T");
    const std::map<std::string, SubgradPolicy> policies{{"least_norm", SubgradPolicy::least_norm},
                                                        {"leftmost", SubgradPolicy::leftmost},
                                                        {"rightmost", SubgradPolicy::rightmost},
                                                        {"weighted", SubgradPolicy::weighted}};
    const auto it = policies.find(policy);
    if (it == policies.end()) throw Error(ErrorKind::bad_input, "unknown --policy '" + policy + "'");
    opt.policy = {it->second, weight};

    const Trajectory traj = run_dca(inst, start, opt);
    const auto& last = traj.points.back();
    std::printf("%d iterations (%s)%s\n", traj.iterations(), to_string(traj.stop_reason),
                traj.inexact ? " [inexact]" : "");
    std::printf("F(x^0) = %s, F(x^N) = %s, |G^N|^2 = %s\n", fmt(traj.points.front().F).c_str(), fmt(last.F).c_str(),
                fmt(last.G_norm_sq).c_str());

    json tj = io::to_json(traj);
    tj["revision"] = DCA_FORMULA_REVISION;
    tj["run_options"] = {{"N", N}, {"tol", tol}, {"measure", measure}};
    emit(out, tj);
    if (!csv.empty()) {
      std::ostringstream s;
      io::write_trajectory_csv(s, traj);
      io::write_text_file(csv, s.str());
    }
    if (!do_certify) return kExitOk;
    const TrajectoryReport r = certify(traj, tols.tol);
    emit(cert_out, report_json(r));
    return report_certificate(r);
  }
};

struct CertifyCmd {
  std::string traj, out, fstar;
  TolFlags tols;

  int run() const {
    Trajectory t = io::trajectory_from_json(io::read_json_file(traj));
    if (!fstar.empty()) t.instance.fstar_hint = parse_ext(fstar, "fstar");
    const TrajectoryReport r = certify(t, tols.tol);
    emit(out, report_json(r));
    return report_certificate(r);
  }
};

// interp-check ----------------------------------------------------------------

struct InterpCmd {
  std::string triplets, mu, L, scale = "absolute", out;
  double tol = kInterpTol;

  int run() const {
    const json j = io::read_json_file(triplets);
    const json& arr = j.is_object() && j.contains("triplets") ? j.at("triplets") : j;
    CurvatureClass cls;
    if (j.is_object() && j.contains("class")) {
      const json& c = j.at("class");
      cls = {io::ext_from_json(c.at("mu")), ExtReal(io::ext_from_json(c.at("L")))};
    }
    if (!mu.empty()) cls.mu = parse_ext(mu, "mu");
    if (!L.empty()) cls.L = ExtReal(parse_ext(L, "L"));
    if (!(j.is_object() && j.contains("class")) && (mu.empty() || L.empty()))
      throw Error(ErrorKind::bad_input, "need --mu and --L or a 'class' entry in the file");
    SlackScale s;
    if (scale == "absolute") s = SlackScale::absolute;
    else if (scale == "relative") s = SlackScale::relative;
    else throw Error(ErrorKind::bad_input, "--scale must be absolute or relative");

    const auto pts = io::triplets_from_json(arr);
    const InterpReport r = check_interpolation(pts, cls, tol, s);
    std::printf("%zu points, class mu=%s L=%s: min slack %s at (%zu,%zu): %s\n", r.n, fmt(cls.mu).c_str(),
                fmt(cls.L.value()).c_str(), fmt(r.min_slack).c_str(), r.worst_i, r.worst_j,
                r.feasible ? "feasible" : "INFEASIBLE");
    json o = provenance({{"tol", tol}, {"scale", scale}});
    o["report"] = io::to_json(r);
    emit(out, o);
    return r.feasible ? kExitOk : kExitCheckFailed;
  }
};

// probe -----------------------------------------------------------------------

struct ProbeCmd {
  ParamFlags params;
  ProbeOptions opt;
  bool no_warm = false;
  std::string initial, out;

  int run() {
    const DcParams p = checked(params.get());
    opt.warm_start = !no_warm;
    if (!initial.empty()) opt.initial = io::pep_from_json(io::read_json_file(initial));
    const ProbeResult r = probe(p, opt);
    std::printf("regime %d (%s), N=%d, d=%d\n", r.regime.index, r.regime.label.c_str(), opt.N, opt.d);
    std::printf("best ratio %s (start %d), certified bound %s, gap %s\n", fmt(r.best_ratio).c_str(), r.best_start,
                fmt(r.certified_bound).c_str(), fmt(r.gap).c_str());
    std::printf("witness %s, %ld evaluations%s\n", r.witness_feasible ? "interpolation-feasible" : "INFEASIBLE",
                r.evaluations, r.budget_exhausted ? " (budget exhausted)" : "");
    if (r.certificate_violation) std::printf("CERTIFICATE VIOLATION: best ratio exceeds the certified bound\n");
    json j = provenance({{"witness_tol", kWitnessTol}, {"violation_margin", 1e-6}});
    j["options"] = {{"N", opt.N}, {"d", opt.d}, {"budget", opt.budget}, {"seed", opt.seed},
                    {"starts", opt.starts}, {"warm_start", opt.warm_start}};
    j["params"] = io::to_json(p);
    j["result"] = io::to_json(r);
    emit(out, j);
    return r.certificate_violation ? kExitCheckFailed : kExitOk;
  }
};

// report ----------------------------------------------------------------------

struct ReportCmd {
  ParamFlags params;
  int sweep = 0;
  std::uint64_t seed = 1;
  TolFlags tols;
  std::string out;

  int run() const {
    const bool have_params = !params.file.empty() || !params.mu1.empty() || !params.L1.empty() ||
                             !params.mu2.empty() || !params.L2.empty();
    if (!have_params && sweep == 0) throw Error(ErrorKind::bad_input, "need parameters or --sweep");
    json j = provenance(tol_json(tols.tol));
    int code = kExitOk;
    if (have_params) {
      const DcParams p = params.get();
      const ValidationReport v = validate(p);
      j["params"] = io::to_json(p);
      j["valid"] = v.valid;
      j["violations"] = v.violations;
      j["decrease_precondition"] = v.decrease_precondition;
      j["f_nonconvex"] = v.f_nonconvex;
      j["f_nonconcave"] = v.f_nonconcave;
      const auto b = p.implied_objective_class();
      j["objective_class"] = {{"lower", io::ext_to_json(b.lower)}, {"upper", io::ext_to_json(b.upper)}};
      std::printf("F in F_{%s, %s}; nonconvex %s, nonconcave %s\n", fmt(b.lower).c_str(), fmt(b.upper).c_str(),
                  v.f_nonconvex ? "yes" : "no", v.f_nonconcave ? "yes" : "no");
      if (!v.valid) {
        for (const auto& s : v.violations) std::printf("invalid: %s\n", s.c_str());
        emit(out, j);
        return kExitInvalid;
      }
      if (!v.decrease_precondition) {
        std::printf("no decrease certificate: needs mu1 + mu2 > 0 or mu1 = mu2 = 0\n");
      } else if (!p.f1.smooth() && !p.f2.smooth()) {
        std::printf("both terms nonsmooth: only the T-measure bounds apply\n");
      } else {
        const RegimeCertificate c = regime_for(p);
        print_regime(c);
        j["certificate"] = io::to_json(c);
        if (p.f1.smooth() && p.f2.smooth()) {
          const auto a = asymptotic_constants(p);
          j["p5_inf"] = a.p5_inf ? io::ext_to_json(*a.p5_inf) : json(nullptr);
          j["p6_inf"] = a.p6_inf ? io::ext_to_json(*a.p6_inf) : json(nullptr);
          if (a.p5_inf) std::printf("  p5_inf = %s\n", fmt(*a.p5_inf).c_str());
          if (a.p6_inf) std::printf("  p6_inf = %s\n", fmt(*a.p6_inf).c_str());
        }
      }
    }
    if (sweep > 0) {
      SweepConfig cfg;
      cfg.instances = sweep;
      cfg.seed = seed;
      cfg.tol = tols.tol;
      const SweepResult s = soundness_sweep(cfg);
      const NonsmoothSweepResult n = nonsmooth_sweep(cfg);
      std::printf("soundness sweep: %d instances, %ld one-step checks (%ld failed), %ld rate checks (%ld failed), "
                  "%ld F* rate checks (%ld failed), worst scaled slack %s\n",
                  s.instances, s.one_step_checks, s.one_step_failures, s.rate_checks, s.rate_failures,
                  s.fstar_rate_checks, s.fstar_rate_failures, fmt(s.worst_scaled_slack).c_str());
      std::printf("nonsmooth sweep: %d instances, %ld step checks (%ld failed), %ld rate checks (%ld failed), "
                  "%ld T sign failures\n",
                  n.instances, n.step_checks, n.step_failures, n.rate_checks, n.rate_failures, n.t_sign_failures);
      json per = json::array();
      for (int i = 1; i <= 8; ++i) per.push_back(s.per_regime[i]);
      j["sweep"] = {{"instances", s.instances},          {"seed", seed},
                    {"per_regime", per},                 {"one_step_checks", s.one_step_checks},
                    {"one_step_failures", s.one_step_failures}, {"combination_failures", s.combination_failures},
                    {"rate_checks", s.rate_checks},      {"rate_failures", s.rate_failures},
                    {"fstar_rate_checks", s.fstar_rate_checks}, {"fstar_rate_failures", s.fstar_rate_failures},
                    {"worst_scaled_slack", s.worst_scaled_slack}};
      j["nonsmooth_sweep"] = {{"instances", n.instances},       {"step_checks", n.step_checks},
                              {"step_failures", n.step_failures}, {"rate_checks", n.rate_checks},
                              {"rate_failures", n.rate_failures}, {"t_sign_failures", n.t_sign_failures}};
      if (!s.clean() || !n.clean()) code = kExitCheckFailed;
    }
    emit(out, j);
    return code;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DCA rate certificates: classify, run, certify, probe"};
  app.require_subcommand(1);
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON file with option defaults (flags take precedence)");
  app.set_version_flag("--version", std::string("dcarates formula revision ") + DCA_FORMULA_REVISION);
  int jobs = 0;
  app.add_option("--jobs", jobs, "OpenMP threads for grids, sweeps and probe starts (0: runtime default)")
      ->check(CLI::NonNegativeNumber);

  ClassifyCmd classify_cmd;
  auto* classify_app = app.add_subcommand("classify", "regime and one-step coefficients of a parameter point");
  classify_cmd.params.attach(classify_app);
  classify_app->add_option("--out", classify_cmd.out, "JSON output");

  RegimeMapCmd map_cmd;
  auto* map_app = app.add_subcommand("regime-map", "regime index over a (mu1, mu2) grid");
  map_app->add_option("--L1", map_cmd.L1, "upper curvature of f1")->required();
  map_app->add_option("--L2", map_cmd.L2, "upper curvature of f2")->required();
  map_app->add_option("--grid", map_cmd.grid, "lo:hi:steps for both axes");
  map_app->add_option("--grid-mu1", map_cmd.grid_mu1, "lo:hi:steps for mu1");
  map_app->add_option("--grid-mu2", map_cmd.grid_mu2, "lo:hi:steps for mu2");
  map_app->add_option("--out", map_cmd.out, "CSV output (mu1,mu2,regime,p)");

  RunCmd run_cmd;
  auto* run_app = app.add_subcommand("run", "run DCA on an instance file");
  run_app->add_option("--instance", run_cmd.instance, "instance JSON")->required();
  run_app->add_option("--x0", run_cmd.x0, "starting point, comma separated (one value is broadcast)")->required();
  run_app->add_option("--N", run_cmd.N, "maximum number of iterations")->capture_default_str();
  run_app->add_option("--tol", run_cmd.tol, "stop once the criticality measure is <= tol")->capture_default_str();
  run_app->add_option("--measure", run_cmd.measure, "criticality measure: gap or T")->capture_default_str();
  run_app->add_option("--policy", run_cmd.policy, "subgradient at kinks: least_norm, leftmost, rightmost, weighted")
      ->capture_default_str();
  run_app->add_option("--weight", run_cmd.weight, "weight of the rightmost element for --policy weighted")
      ->capture_default_str();
  run_app->add_flag("--certify", run_cmd.do_certify, "check the rate certificates on the trajectory");
  run_app->add_option("--out", run_cmd.out, "trajectory JSON");
  run_app->add_option("--csv", run_cmd.csv, "trajectory CSV (k,F,G_norm_sq,T,dx_norm_sq)");
  run_app->add_option("--cert-out", run_cmd.cert_out, "certificate JSON (with --certify)");
  run_cmd.tols.attach(run_app);

  CertifyCmd cert_cmd;
  auto* cert_app = app.add_subcommand("certify", "check the rate certificates on a saved trajectory");
  cert_app->add_option("--traj", cert_cmd.traj, "trajectory JSON written by run --out")->required();
  cert_app->add_option("--fstar", cert_cmd.fstar, "lower bound F* to use when no analytic value exists");
  cert_app->add_option("--out", cert_cmd.out, "certificate JSON");
  cert_cmd.tols.attach(cert_app);

  InterpCmd interp_cmd;
  auto* interp_app = app.add_subcommand("interp-check", "pairwise interpolation inequalities of a triplet set");
  interp_app->add_option("--triplets", interp_cmd.triplets, "JSON array of {x, g, f}, or {class, triplets}")
      ->required();
  interp_app->add_option("--mu", interp_cmd.mu, "lower curvature of the class");
  interp_app->add_option("--L", interp_cmd.L, "upper curvature of the class (number or inf)");
  interp_app->add_option("--tol", interp_cmd.tol, "slack below -tol is a violation")->capture_default_str();
  interp_app->add_option("--scale", interp_cmd.scale, "absolute or relative slack")->capture_default_str();
  interp_app->add_option("--out", interp_cmd.out, "report JSON");

  ProbeCmd probe_cmd;
  auto* probe_app = app.add_subcommand("probe", "worst-case search over interpolable N-step data");
  probe_cmd.params.attach(probe_app);
  probe_app->add_option("--N", probe_cmd.opt.N, "number of DCA steps (1..10)")->capture_default_str();
  probe_app->add_option("--d", probe_cmd.opt.d, "dimension (1..3)")->capture_default_str();
  probe_app->add_option("--budget", probe_cmd.opt.budget, "objective evaluations over all starts")
      ->capture_default_str();
  probe_app->add_option("--seed", probe_cmd.opt.seed, "random seed")->capture_default_str();
  probe_app->add_option("--starts", probe_cmd.opt.starts, "number of starts")->capture_default_str();
  probe_app->add_flag("--no-warm-start", probe_cmd.no_warm, "use cold starts only");
  probe_app->add_option("--initial", probe_cmd.initial, "PEP variables JSON used as start 0");
  probe_app->add_option("--out", probe_cmd.out, "result JSON");

  ReportCmd report_cmd;
  auto* report_app = app.add_subcommand("report", "validation, regime and asymptotic constants; optional sweeps");
  report_cmd.params.attach(report_app);
  report_app->add_option("--sweep", report_cmd.sweep, "random instances for the soundness sweeps (0: none)")
      ->capture_default_str();
  report_app->add_option("--seed", report_cmd.seed, "sweep seed")->capture_default_str();
  report_cmd.tols.attach(report_app);
  report_app->add_option("--out", report_cmd.out, "report JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (jobs > 0) omp_set_num_threads(jobs);
    if (*classify_app) return classify_cmd.run();
    if (*map_app) return map_cmd.run();
    if (*run_app) return run_cmd.run();
    if (*cert_app) return cert_cmd.run();
    if (*interp_app) return interp_cmd.run();
    if (*probe_app) return probe_cmd.run();
    if (*report_app) return report_cmd.run();
  } catch (const Error& e) {
    std::fprintf(stderr, "dcarates: %s\n", e.what());
    return kExitInvalid;
  } catch (const json::exception& e) {
    std::fprintf(stderr, "dcarates: malformed JSON: %s\n", e.what());
    return kExitInvalid;
  }
  return kExitInvalid;
}
