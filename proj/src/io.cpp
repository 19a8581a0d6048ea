#include "dca/io.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "dca/errors.hpp"

namespace dca::io {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// JSON has no infinities; they travel as "inf" / "-inf" / "nan".
json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double num_from(const json& j, const char* what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
    if (s == "nan") return std::nan("");
  }
  throw Error(ErrorKind::bad_input, std::string("expected a number for '") + what + "'");
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorKind::bad_input, std::string("missing field '") + key + "'");
  return j.at(key);
}

double num_field(const json& j, const char* key) { return num_from(field(j, key), key); }

Vec vec_from(const json& j, const char* what) {
  if (!j.is_array()) throw Error(ErrorKind::bad_input, std::string("expected an array for '") + what + "'");
  Vec v;
  for (const auto& e : j) v.push_back(num_from(e, what));
  return v;
}

json vec_json(const Vec& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

json vecs_json(const std::vector<Vec>& vs) {
  json a = json::array();
  for (const auto& v : vs) a.push_back(vec_json(v));
  return a;
}

std::vector<Vec> vecs_from(const json& j, const char* what) {
  if (!j.is_array()) throw Error(ErrorKind::bad_input, std::string("expected an array for '") + what + "'");
  std::vector<Vec> out;
  for (const auto& e : j) out.push_back(vec_from(e, what));
  return out;
}

const char* policy_name(SubgradPolicy p) {
  switch (p) {
    case SubgradPolicy::least_norm: return "least_norm";
    case SubgradPolicy::leftmost: return "leftmost";
    case SubgradPolicy::rightmost: return "rightmost";
    case SubgradPolicy::weighted: return "weighted";
  }
  return "least_norm";
}

SubgradPolicy policy_from(const std::string& s) {
  if (s == "least_norm") return SubgradPolicy::least_norm;
  if (s == "leftmost") return SubgradPolicy::leftmost;
  if (s == "rightmost") return SubgradPolicy::rightmost;
  if (s == "weighted") return SubgradPolicy::weighted;
  throw Error(ErrorKind::bad_input, "unknown subgradient policy '" + s + "'");
}

StopReason stop_from(const std::string& s) {
  if (s == "max_iters") return StopReason::max_iters;
  if (s == "criticality_tol") return StopReason::criticality_tol;
  if (s == "subproblem_unbounded") return StopReason::subproblem_unbounded;
  throw Error(ErrorKind::bad_input, "unknown stop reason '" + s + "'");
}

json optional_num(const std::optional<double>& v) { return v ? num(*v) : json(nullptr); }

}  // namespace

json ext_to_json(double v) { return num(v); }

double ext_from_json(const json& j) { return num_from(j, "value"); }

json to_json(const DcParams& p) {
  return {{"mu1", num(p.mu1())}, {"L1", num(p.L1())}, {"mu2", num(p.mu2())}, {"L2", num(p.L2())}};
}

DcParams params_from_json(const json& j) {
  return make_params(num_field(j, "mu1"), num_field(j, "L1"), num_field(j, "mu2"), num_field(j, "L2"));
}

json to_json(const FunctionSpec& spec) {
  return std::visit(overloaded{
                        [](const QuadraticFamily& q) {
                          return json{{"family", "quadratic"}, {"c", vec_json(q.c)}, {"b", vec_json(q.b)}};
                        },
                        [](const MaxQuadraticsFamily& m) {
                          json pieces = json::array();
                          for (const auto& p : m.pieces) pieces.push_back({{"c", p.c}, {"b", p.b}, {"e", p.e}});
                          return json{{"family", "max_quadratics"}, {"pieces", pieces}};
                        },
                        [](const AbsQuadraticFamily& a) {
                          return json{{"family", "abs_quadratic"}, {"a", a.a}, {"c", a.c}, {"b", a.b}};
                        },
                    },
                    spec.family);
}

FunctionSpec function_from_json(const json& j, const CurvatureClass& declared) {
  const json& fam = field(j, "family");
  if (!fam.is_string()) throw Error(ErrorKind::bad_input, "'family' must be a string");
  const std::string name = fam.get<std::string>();
  FunctionSpec spec;
  spec.declared = declared;
  if (name == "quadratic") {
    spec.family = QuadraticFamily{vec_from(field(j, "c"), "c"), vec_from(field(j, "b"), "b")};
  } else if (name == "max_quadratics") {
    MaxQuadraticsFamily m;
    const json& pieces = field(j, "pieces");
    if (!pieces.is_array()) throw Error(ErrorKind::bad_input, "'pieces' must be an array");
    for (const auto& p : pieces) m.pieces.push_back({num_field(p, "c"), num_field(p, "b"), num_field(p, "e")});
    spec.family = std::move(m);
  } else if (name == "abs_quadratic") {
    spec.family = AbsQuadraticFamily{num_field(j, "a"), num_field(j, "c"), num_field(j, "b")};
  } else {
    throw Error(ErrorKind::bad_input, "unknown family '" + name + "'");
  }
  return spec;
}

json to_json(const DcInstance& inst) {
  return {{"f1", to_json(inst.f1)},
          {"f2", to_json(inst.f2)},
          {"declared", to_json(inst.params())},
          {"Fstar", optional_num(inst.fstar_hint)}};
}

DcInstance instance_from_json(const json& j) {
  const DcParams declared = params_from_json(field(j, "declared"));
  DcInstance inst{function_from_json(field(j, "f1"), declared.f1), function_from_json(field(j, "f2"), declared.f2),
                  std::nullopt};
  if (j.contains("Fstar") && !j.at("Fstar").is_null()) inst.fstar_hint = num_from(j.at("Fstar"), "Fstar");
  check_instance(inst);
  return inst;
}

json to_json(const Trajectory& traj) {
  json pts = json::array();
  for (const auto& p : traj.points) {
    json e{{"k", p.k},     {"x", vec_json(p.x)},   {"f1", num(p.f1)},   {"f2", num(p.f2)},
           {"F", num(p.F)}, {"g1", vec_json(p.g1)}, {"g2", vec_json(p.g2)}, {"G_norm_sq", num(p.G_norm_sq)}};
    if (p.T) e["T"] = num(*p.T);
    if (p.dx_norm_sq) e["dx_norm_sq"] = num(*p.dx_norm_sq);
    pts.push_back(std::move(e));
  }
  return {{"instance", to_json(traj.instance)},
          {"stop_reason", to_string(traj.stop_reason)},
          {"policy", {{"policy", policy_name(traj.policy.policy)}, {"weight", traj.policy.weight}}},
          {"inexact", traj.inexact},
          {"points", pts}};
}

Trajectory trajectory_from_json(const json& j) {
  Trajectory t;
  t.instance = instance_from_json(field(j, "instance"));
  t.stop_reason = stop_from(field(j, "stop_reason").get<std::string>());
  const json& pol = field(j, "policy");
  t.policy.policy = policy_from(field(pol, "policy").get<std::string>());
  t.policy.weight = num_field(pol, "weight");
  t.inexact = field(j, "inexact").get<bool>();
  for (const auto& e : field(j, "points")) {
    TrajectoryPoint p;
    p.k = field(e, "k").get<int>();
    p.x = vec_from(field(e, "x"), "x");
    p.f1 = num_field(e, "f1");
    p.f2 = num_field(e, "f2");
    p.F = num_field(e, "F");
    p.g1 = vec_from(field(e, "g1"), "g1");
    p.g2 = vec_from(field(e, "g2"), "g2");
    p.G_norm_sq = num_field(e, "G_norm_sq");
    if (e.contains("T")) p.T = num_field(e, "T");
    if (e.contains("dx_norm_sq")) p.dx_norm_sq = num_field(e, "dx_norm_sq");
    t.points.push_back(std::move(p));
  }
  if (t.points.empty()) throw Error(ErrorKind::bad_input, "trajectory has no points");
  return t;
}

json to_json(const std::vector<Triplet>& triplets) {
  json a = json::array();
  for (const auto& t : triplets) a.push_back({{"x", vec_json(t.x)}, {"g", vec_json(t.g)}, {"f", num(t.f)}});
  return a;
}

std::vector<Triplet> triplets_from_json(const json& j) {
  if (!j.is_array()) throw Error(ErrorKind::bad_input, "triplets must be an array");
  std::vector<Triplet> out;
  for (const auto& e : j) out.push_back({vec_from(field(e, "x"), "x"), vec_from(field(e, "g"), "g"), num_field(e, "f")});
  return out;
}

json to_json(const RegimeCertificate& c) {
  json trace = json::array();
  for (const auto& p : c.domain_trace) trace.push_back({{"name", p.name}, {"holds", p.holds}, {"margin", num(p.margin)}});
  return {{"index", c.index},
          {"label", c.label},
          {"sigma", num(c.sigma)},
          {"sigma_plus", num(c.sigma_plus)},
          {"p", num(c.p)},
          {"alpha", num(c.alpha)},
          {"one_nonsmooth_table", c.one_nonsmooth_table},
          {"linear_rate_regime", c.linear_rate_regime()},
          {"matched", c.matched},
          {"domain_trace", trace}};
}

json to_json(const InterpReport& r) {
  json rows = json::array();
  for (std::size_t i = 0; i < r.n; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < r.n; ++j) row.push_back(num(r.at(i, j)));
    rows.push_back(std::move(row));
  }
  return {{"n", r.n},
          {"feasible", r.feasible},
          {"min_slack", num(r.min_slack)},
          {"worst_pair", {r.worst_i, r.worst_j}},
          {"slack", rows}};
}

json to_json(const TrajectoryReport& r) {
  json out{{"nonsmooth", r.nonsmooth},
           {"passed", r.passed},
           {"tolerances", {{"slack_tol", r.tolerances.slack_tol}, {"eq_tol", r.tolerances.eq_tol}}}};
  out["regime"] = r.regime ? to_json(*r.regime) : json(nullptr);
  out["fstar"] = r.fstar ? json{{"value", num(r.fstar->value)}, {"verified", r.fstar->verified}} : json(nullptr);
  json steps = json::array();
  for (std::size_t i = 0; i < r.one_step.size(); ++i) {
    const auto& s = r.one_step[i];
    json e{{"k", s.k},         {"lhs", num(s.lhs)},     {"rhs", num(s.rhs)},
           {"slack", num(s.slack)}, {"scale", num(s.scale)}, {"passed", s.passed},
           {"equality_hit", s.equality_hit}};
    if (i < r.combination.size())
      e["combination"] = {{"rhs", num(r.combination[i].rhs)},
                          {"slack", num(r.combination[i].slack)},
                          {"passed", r.combination[i].passed}};
    steps.push_back(std::move(e));
  }
  out["one_step"] = steps;
  if (r.rate) {
    const auto& q = *r.rate;
    out["rate"] = {{"N", q.prediction.N},
                   {"p_used", num(q.prediction.p_used)},
                   {"bound_no_fstar", num(q.prediction.bound_no_fstar)},
                   {"bound_with_fstar", optional_num(q.prediction.bound_with_fstar)},
                   {"observed", num(q.observed)},
                   {"holds", q.holds},
                   {"holds_with_fstar", q.holds_with_fstar ? json(*q.holds_with_fstar) : json(nullptr)},
                   {"fstar_gap_slack", optional_num(q.fstar_gap_slack)},
                   {"fstar_verified", q.fstar_verified},
                   {"linear_rate_warning", q.prediction.linear_rate_warning}};
  }
  if (r.nonsmooth_rate) {
    const auto& q = *r.nonsmooth_rate;
    json ns = json::array();
    for (const auto& s : q.steps)
      ns.push_back({{"k", s.k},
                    {"T", num(s.T)},
                    {"lhs", num(s.lhs)},
                    {"dF", num(s.dF)},
                    {"slack", num(s.slack)},
                    {"passed", s.passed},
                    {"t_nonnegative", s.t_nonnegative}});
    out["nonsmooth_rate"] = {{"bound", num(q.bound)},     {"observed", num(q.observed)}, {"holds", q.holds},
                             {"steps_hold", q.steps_hold}, {"t_sign_ok", q.t_sign_ok},   {"steps", ns}};
  }
  return out;
}

json to_json(const PepVariables& v) {
  return {{"N", v.N},           {"d", v.d},           {"x", vecs_json(v.x)},  {"g1", vecs_json(v.g1)},
          {"g2", vecs_json(v.g2)}, {"f1", vec_json(v.f1)}, {"f2", vec_json(v.f2)}};
}

PepVariables pep_from_json(const json& j) {
  PepVariables v;
  v.N = field(j, "N").get<int>();
  v.d = field(j, "d").get<int>();
  v.x = vecs_from(field(j, "x"), "x");
  v.g1 = vecs_from(field(j, "g1"), "g1");
  v.g2 = vecs_from(field(j, "g2"), "g2");
  v.f1 = vec_from(field(j, "f1"), "f1");
  v.f2 = vec_from(field(j, "f2"), "f2");
  const std::size_t n = static_cast<std::size_t>(v.N) + 1;
  if (v.N < 1 || v.x.size() != n || v.g1.size() != n || v.g2.size() != n || v.f1.size() != n || v.f2.size() != n)
    throw Error(ErrorKind::bad_input, "PEP variables need N + 1 entries per field");
  for (std::size_t k = 0; k < n; ++k)
    if (v.x[k].size() != static_cast<std::size_t>(v.d) || v.g1[k].size() != v.x[k].size() ||
        v.g2[k].size() != v.x[k].size())
      throw Error(ErrorKind::bad_input, "PEP vectors must have dimension d");
  return v;
}

json to_json(const ProbeResult& r) {
  return {{"best_ratio", num(r.best_ratio)},
          {"certified_bound", num(r.certified_bound)},
          {"gap", num(r.gap)},
          {"witness", to_json(r.witness)},
          {"witness_feasible", r.witness_feasible},
          {"feasibility_f1", {{"feasible", r.feasibility_f1.feasible}, {"min_slack", num(r.feasibility_f1.min_slack)}}},
          {"feasibility_f2", {{"feasible", r.feasibility_f2.feasible}, {"min_slack", num(r.feasibility_f2.min_slack)}}},
          {"certificate_violation", r.certificate_violation},
          {"budget_exhausted", r.budget_exhausted},
          {"best_start", r.best_start},
          {"evaluations", r.evaluations},
          {"regime", to_json(r.regime)}};
}

namespace {

std::string csv_num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "k,F,G_norm_sq,T,dx_norm_sq\n";
  for (const auto& p : traj.points) {
    out << p.k << ',' << csv_num(p.F) << ',' << csv_num(p.G_norm_sq) << ',';
    if (p.T) out << csv_num(*p.T);
    out << ',';
    if (p.dx_norm_sq) out << csv_num(*p.dx_norm_sq);
    out << '\n';
  }
}

void write_regime_map_csv(std::ostream& out, const std::vector<RegimeMapRow>& rows) {
  out << "mu1,mu2,regime,p\n";
  for (const auto& r : rows) out << csv_num(r.mu1) << ',' << csv_num(r.mu2) << ',' << r.regime << ',' << csv_num(r.p) << '\n';
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::bad_input, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::bad_input, "'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::bad_input, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorKind::bad_input, "failed writing '" + path + "'");
}

}  // namespace dca::io
