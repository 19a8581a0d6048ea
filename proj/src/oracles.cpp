#include "dca/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dca/errors.hpp"

namespace dca {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Values within this relative distance of the envelope count as active.
constexpr double kActiveTol = 1e-12;

double tie_tol(double v) { return kActiveTol * std::max(1.0, std::abs(v)); }

// Real roots of A x^2 + B x + C, computed without cancellation.
void quadratic_roots(double A, double B, double C, std::vector<double>& out) {
  if (A == 0.0) {
    if (B != 0.0) out.push_back(-C / B);
    return;
  }
  const double disc = B * B - 4.0 * A * C;
  if (disc < 0.0) return;
  const double q = -0.5 * (B + std::copysign(std::sqrt(disc), B));
  if (q != 0.0) {
    out.push_back(q / A);
    out.push_back(C / q);
  } else {
    out.push_back(0.0);
  }
}

// Upper envelope of a list of quadratics in one dimension as consecutive
// intervals; `starts[k]` is the left end of interval k (-inf for the first).
struct Envelope {
  std::vector<double> starts;
  std::vector<QuadPiece> pieces;
  std::vector<int> owners;  // piece index per interval
};

Envelope max_envelope(const std::vector<QuadPiece>& pieces) {
  std::vector<double> roots;
  for (std::size_t i = 0; i < pieces.size(); ++i)
    for (std::size_t j = i + 1; j < pieces.size(); ++j)
      quadratic_roots(0.5 * (pieces[i].c - pieces[j].c), pieces[i].b - pieces[j].b, pieces[i].e - pieces[j].e,
                      roots);
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());

  auto argmax = [&](double x) {
    int best = 0;
    for (std::size_t i = 1; i < pieces.size(); ++i)
      if (pieces[i].value(x) > pieces[best].value(x)) best = static_cast<int>(i);
    return best;
  };
  Envelope env;
  const std::size_t n = roots.size();
  for (std::size_t k = 0; k <= n; ++k) {
    double probe;
    if (n == 0) probe = 0.0;
    else if (k == 0) probe = roots[0] - 1.0 - std::abs(roots[0]);
    else if (k == n) probe = roots[n - 1] + 1.0 + std::abs(roots[n - 1]);
    else probe = 0.5 * (roots[k - 1] + roots[k]);
    const int owner = argmax(probe);
    const double start = k == 0 ? -kInf : roots[k - 1];
    if (!env.owners.empty() && env.owners.back() == owner) continue;
    env.starts.push_back(start);
    env.pieces.push_back(pieces[owner]);
    env.owners.push_back(owner);
  }
  return env;
}

// f restricted to consecutive intervals as quadratic pieces (one-dimensional families).
Envelope piecewise(const FunctionSpec& spec) {
  return std::visit(overloaded{
                        [](const QuadraticFamily& q) {
                          if (q.c.size() != 1) throw Error(ErrorKind::bad_input, "piecewise form needs dimension 1");
                          return Envelope{{-kInf}, {QuadPiece{q.c[0], q.b[0], 0.0}}, {0}};
                        },
                        [](const MaxQuadraticsFamily& m) { return max_envelope(m.pieces); },
                        [](const AbsQuadraticFamily& a) {
                          if (a.a == 0.0) return Envelope{{-kInf}, {QuadPiece{a.c, a.b, 0.0}}, {0}};
                          return Envelope{{-kInf, 0.0},
                                          {QuadPiece{a.c, a.b - a.a, 0.0}, QuadPiece{a.c, a.b + a.a, 0.0}},
                                          {0, 1}};
                        },
                    },
                    spec.family);
}

double max_value(const MaxQuadraticsFamily& m, double x) {
  double v = -kInf;
  for (const auto& p : m.pieces) v = std::max(v, p.value(x));
  return v;
}

std::pair<double, double> max_slopes(const MaxQuadraticsFamily& m, double x) {
  const double top = max_value(m, x);
  double lo = kInf, hi = -kInf;
  for (const auto& p : m.pieces) {
    if (p.value(x) >= top - tie_tol(top)) {
      lo = std::min(lo, p.slope(x));
      hi = std::max(hi, p.slope(x));
    }
  }
  return {lo, hi};
}

double select(std::pair<double, double> range, const SubgradSelection& sel) {
  const auto [lo, hi] = range;
  switch (sel.policy) {
    case SubgradPolicy::least_norm: return std::clamp(0.0, lo, hi);
    case SubgradPolicy::leftmost: return lo;
    case SubgradPolicy::rightmost: return hi;
    case SubgradPolicy::weighted: return (1.0 - sel.weight) * lo + sel.weight * hi;
  }
  return lo;
}

const char* policy_tag(SubgradPolicy p) {
  switch (p) {
    case SubgradPolicy::least_norm: return "least_norm";
    case SubgradPolicy::leftmost: return "leftmost";
    case SubgradPolicy::rightmost: return "rightmost";
    case SubgradPolicy::weighted: return "weighted";
  }
  return "least_norm";
}

void require_dim1(std::span<const double> x) {
  if (x.size() != 1) throw Error(ErrorKind::bad_input, "family is one-dimensional");
}

[[noreturn]] void unbounded(const std::string& why) { throw Error(ErrorKind::subproblem_unbounded, why); }

}  // namespace

std::size_t FunctionSpec::dimension() const {
  if (const auto* q = std::get_if<QuadraticFamily>(&family)) return q->c.size();
  return 1;
}

std::string FunctionSpec::family_name() const {
  return std::visit(overloaded{
                        [](const QuadraticFamily&) { return std::string("quadratic"); },
                        [](const MaxQuadraticsFamily&) { return std::string("max_quadratics"); },
                        [](const AbsQuadraticFamily&) { return std::string("abs_quadratic"); },
                    },
                    family);
}

std::pair<double, double> subdifferential_1d(const FunctionSpec& spec, double x) {
  return std::visit(overloaded{
                        [&](const QuadraticFamily& q) {
                          if (q.c.size() != 1) throw Error(ErrorKind::bad_input, "family is not one-dimensional");
                          const double g = q.c[0] * x + q.b[0];
                          return std::pair{g, g};
                        },
                        [&](const MaxQuadraticsFamily& m) { return max_slopes(m, x); },
                        [&](const AbsQuadraticFamily& a) {
                          const double smooth = a.c * x + a.b;
                          if (x > 0) return std::pair{smooth + a.a, smooth + a.a};
                          if (x < 0) return std::pair{smooth - a.a, smooth - a.a};
                          return std::pair{smooth - a.a, smooth + a.a};
                        },
                    },
                    spec.family);
}

double value_at(const FunctionSpec& spec, std::span<const double> x) {
  return std::visit(overloaded{
                        [&](const QuadraticFamily& q) {
                          if (x.size() != q.c.size()) throw Error(ErrorKind::bad_input, "dimension mismatch");
                          double v = 0.0;
                          for (std::size_t i = 0; i < x.size(); ++i) v += 0.5 * q.c[i] * x[i] * x[i] + q.b[i] * x[i];
                          return v;
                        },
                        [&](const MaxQuadraticsFamily& m) {
                          require_dim1(x);
                          return max_value(m, x[0]);
                        },
                        [&](const AbsQuadraticFamily& a) {
                          require_dim1(x);
                          return a.a * std::abs(x[0]) + 0.5 * a.c * x[0] * x[0] + a.b * x[0];
                        },
                    },
                    spec.family);
}

OracleAnswer evaluate(const FunctionSpec& spec, std::span<const double> x, const SubgradSelection& selection) {
  OracleAnswer out;
  out.value = value_at(spec, x);
  if (const auto* q = std::get_if<QuadraticFamily>(&spec.family)) {
    out.subgradient.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out.subgradient[i] = q->c[i] * x[i] + q->b[i];
    out.selection_tag = "gradient";
    return out;
  }
  const auto range = subdifferential_1d(spec, x[0]);
  if (range.first == range.second) {
    out.subgradient = {range.first};
    out.selection_tag = "gradient";
  } else {
    out.subgradient = {select(range, selection)};
    out.selection_tag = policy_tag(selection.policy);
  }
  return out;
}

std::vector<double> kinks(const FunctionSpec& spec) {
  return std::visit(overloaded{
                        [](const QuadraticFamily&) { return std::vector<double>{}; },
                        [](const MaxQuadraticsFamily& m) {
                          std::vector<double> out;
                          const Envelope env = max_envelope(m.pieces);
                          for (std::size_t k = 1; k < env.pieces.size(); ++k) {
                            const double x = env.starts[k];
                            const double left = env.pieces[k - 1].slope(x), right = env.pieces[k].slope(x);
                            if (std::abs(left - right) > tie_tol(std::max(std::abs(left), std::abs(right))))
                              out.push_back(x);
                          }
                          return out;
                        },
                        [](const AbsQuadraticFamily& a) {
                          return a.a > 0 ? std::vector<double>{0.0} : std::vector<double>{};
                        },
                    },
                    spec.family);
}

CurvatureClass certified_class(const FunctionSpec& spec) {
  return std::visit(overloaded{
                        [](const QuadraticFamily& q) {
                          if (q.c.empty()) throw Error(ErrorKind::bad_input, "empty quadratic");
                          const auto [lo, hi] = std::minmax_element(q.c.begin(), q.c.end());
                          return CurvatureClass{*lo, ExtReal(*hi)};
                        },
                        [&](const MaxQuadraticsFamily& m) {
                          if (m.pieces.empty()) throw Error(ErrorKind::bad_input, "max of zero pieces");
                          const Envelope env = max_envelope(m.pieces);
                          double lo = kInf, hi = -kInf;
                          for (const auto& p : env.pieces) {
                            lo = std::min(lo, p.c);
                            hi = std::max(hi, p.c);
                          }
                          const bool smooth = kinks(spec).empty();
                          return CurvatureClass{lo, smooth ? ExtReal(hi) : ExtReal::infinity()};
                        },
                        [](const AbsQuadraticFamily& a) {
                          return CurvatureClass{a.c, a.a > 0 ? ExtReal::infinity() : ExtReal(a.c)};
                        },
                    },
                    spec.family);
}

bool declared_class_certified(const FunctionSpec& spec) {
  const CurvatureClass cert = certified_class(spec);
  return spec.declared.mu <= cert.mu && cert.L <= spec.declared.L;
}

SubproblemSolution solve_dca_subproblem(const FunctionSpec& f1, std::span<const double> g2) {
  SubproblemSolution sol;
  if (const auto* q = std::get_if<QuadraticFamily>(&f1.family)) {
    if (g2.size() != q->c.size()) throw Error(ErrorKind::bad_input, "dimension mismatch");
    sol.x.resize(g2.size());
    sol.g1.resize(g2.size());
    for (std::size_t i = 0; i < g2.size(); ++i) {
      const double c = q->c[i], z = g2[i] - q->b[i];
      if (c > 0) sol.x[i] = z / c;
      else if (c == 0 && z == 0) sol.x[i] = 0.0;
      else unbounded("quadratic subproblem has no minimizer in coordinate " + std::to_string(i));
      sol.g1[i] = c * sol.x[i] + q->b[i];
    }
    sol.residual = std::sqrt(dist_sq(sol.g1, g2));
    return sol;
  }

  require_dim1(g2);
  const double g = g2[0];
  double w = 0.0;
  if (const auto* a = std::get_if<AbsQuadraticFamily>(&f1.family)) {
    const double z = g - a->b;
    if (a->c > 0) {
      w = std::copysign(std::max(std::abs(z) - a->a, 0.0), z) / a->c;
      if (w == 0.0) w = 0.0;
    } else if (a->c == 0 && std::abs(z) <= a->a) {
      w = 0.0;
    } else {
      unbounded("abs-quadratic subproblem has no minimizer");
    }
  } else {
    const auto& m = std::get<MaxQuadraticsFamily>(f1.family);
    const Envelope env = max_envelope(m.pieces);
    // Tails of h(w) = f1(w) - g w.
    const QuadPiece& left = env.pieces.front();
    const QuadPiece& right = env.pieces.back();
    auto tail_ok = [&](const QuadPiece& p, double dir) {
      return p.c > 0 || (p.c == 0 && dir * (p.b - g) >= 0);
    };
    if (!tail_ok(left, -1.0) || !tail_ok(right, 1.0)) unbounded("max-of-quadratics subproblem is unbounded below");

    std::vector<double> candidates(env.starts.begin() + 1, env.starts.end());
    for (std::size_t k = 0; k < env.pieces.size(); ++k) {
      const QuadPiece& p = env.pieces[k];
      if (p.c <= 0) continue;
      const double s = (g - p.b) / p.c;
      const double lo = env.starts[k];
      const double hi = k + 1 < env.starts.size() ? env.starts[k + 1] : kInf;
      if (s >= lo && s <= hi) candidates.push_back(s);
    }
    // A flat tail (c = 0, slope g) is constant; any finite point of it is a minimizer candidate.
    if (left.c == 0 && left.b == g)
      candidates.push_back(env.starts.size() > 1 ? env.starts[1] - 1.0 : 0.0);
    if (right.c == 0 && right.b == g) candidates.push_back(env.starts.back() + (env.starts.size() > 1 ? 1.0 : 0.0));
    if (candidates.empty()) unbounded("max-of-quadratics subproblem has no minimizer");

    double best = kInf;
    for (double c : candidates) best = std::min(best, max_value(m, c) - g * c);
    w = kInf;
    for (double c : candidates)
      if (max_value(m, c) - g * c <= best + tie_tol(best) && std::abs(c) < std::abs(w)) w = c;
  }
  const auto range = subdifferential_1d(f1, w);
  sol.x = {w};
  sol.g1 = {std::clamp(g, range.first, range.second)};
  sol.residual = std::abs(sol.g1[0] - g);
  return sol;
}

SubproblemSolution solve_dca_subproblem_gd(const FunctionSpec& f1, std::span<const double> g2,
                                           std::span<const double> start, double tol, int max_iters) {
  const CurvatureClass cls = certified_class(f1);
  if (!cls.smooth() || cls.mu <= 0)
    throw Error(ErrorKind::bad_input, "gradient-descent subproblem needs a smooth strongly convex f1");
  const double step = 1.0 / cls.L.value();
  SubproblemSolution sol;
  sol.x.assign(start.begin(), start.end());
  sol.exact = false;
  for (int it = 0; it <= max_iters; ++it) {
    const Vec grad = evaluate(f1, sol.x).subgradient;
    const Vec r = sub(grad, g2);
    sol.residual = std::sqrt(norm_sq(r));
    sol.g1 = grad;
    if (sol.residual <= tol) break;
    for (std::size_t i = 0; i < sol.x.size(); ++i) sol.x[i] -= step * r[i];
  }
  return sol;
}

double quadratic_conjugate_min(const QuadraticFamily& f1, std::span<const double> g) {
  double v = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double z = g[i] - f1.b[i];
    if (f1.c[i] > 0) v -= z * z / (2.0 * f1.c[i]);
    else if (!(f1.c[i] == 0 && z == 0)) return -kInf;
  }
  return v;
}

void check_instance(const DcInstance& instance) {
  for (const FunctionSpec* f : {&instance.f1, &instance.f2}) {
    std::visit(overloaded{
                   [](const QuadraticFamily& q) {
                     if (q.c.empty() || q.c.size() != q.b.size())
                       throw Error(ErrorKind::bad_input, "quadratic needs equal-length non-empty c and b");
                     if (!all_finite(q.c) || !all_finite(q.b))
                       throw Error(ErrorKind::bad_input, "quadratic coefficients must be finite");
                   },
                   [](const MaxQuadraticsFamily& m) {
                     if (m.pieces.empty()) throw Error(ErrorKind::bad_input, "max_quadratics needs pieces");
                     for (const auto& p : m.pieces)
                       if (!std::isfinite(p.c) || !std::isfinite(p.b) || !std::isfinite(p.e))
                         throw Error(ErrorKind::bad_input, "piece coefficients must be finite");
                   },
                   [](const AbsQuadraticFamily& a) {
                     if (!(a.a >= 0) || !std::isfinite(a.a) || !std::isfinite(a.c) || !std::isfinite(a.b))
                       throw Error(ErrorKind::bad_input, "abs_quadratic needs finite a >= 0, c, b");
                   },
               },
               f->family);
  }
  if (instance.f1.dimension() != instance.f2.dimension())
    throw Error(ErrorKind::bad_input, "f1 and f2 dimensions differ");
  if (!declared_class_certified(instance.f1) || !declared_class_certified(instance.f2))
    throw Error(ErrorKind::bad_input, "a declared curvature class does not contain its function");
  const ValidationReport r = validate(instance.params());
  if (!r.valid) {
    std::string msg;
    for (const auto& v : r.violations) msg += (msg.empty() ? "" : "; ") + v;
    throw Error(ErrorKind::invalid_params, msg);
  }
}

std::optional<double> analytic_fstar(const DcInstance& instance) {
  const auto* q1 = std::get_if<QuadraticFamily>(&instance.f1.family);
  const auto* q2 = std::get_if<QuadraticFamily>(&instance.f2.family);
  if (q1 && q2) {
    double v = 0.0;
    for (std::size_t i = 0; i < q1->c.size(); ++i) {
      const double c = q1->c[i] - q2->c[i], b = q1->b[i] - q2->b[i];
      if (c > 0) v -= b * b / (2.0 * c);
      else if (!(c == 0 && b == 0)) return std::nullopt;
    }
    return v;
  }
  if (instance.dimension() != 1) return std::nullopt;

  const Envelope e1 = piecewise(instance.f1), e2 = piecewise(instance.f2);
  std::vector<double> cuts;
  for (std::size_t k = 1; k < e1.starts.size(); ++k) cuts.push_back(e1.starts[k]);
  for (std::size_t k = 1; k < e2.starts.size(); ++k) cuts.push_back(e2.starts[k]);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  auto piece_at = [](const Envelope& env, double x) {
    std::size_t k = 0;
    while (k + 1 < env.starts.size() && env.starts[k + 1] <= x) ++k;
    return env.pieces[k];
  };
  double best = kInf;
  for (std::size_t k = 0; k <= cuts.size(); ++k) {
    const double lo = k == 0 ? -kInf : cuts[k - 1];
    const double hi = k == cuts.size() ? kInf : cuts[k];
    double probe;
    if (std::isinf(lo) && std::isinf(hi)) probe = 0.0;
    else if (std::isinf(lo)) probe = hi - 1.0;
    else if (std::isinf(hi)) probe = lo + 1.0;
    else probe = 0.5 * (lo + hi);
    const QuadPiece p1 = piece_at(e1, probe), p2 = piece_at(e2, probe);
    const QuadPiece d{p1.c - p2.c, p1.b - p2.b, p1.e - p2.e};
    if (d.c < 0 && (std::isinf(lo) || std::isinf(hi))) return std::nullopt;
    if (d.c == 0 && std::isinf(lo) && d.b > 0) return std::nullopt;
    if (d.c == 0 && std::isinf(hi) && d.b < 0) return std::nullopt;
    if (std::isfinite(lo)) best = std::min(best, d.value(lo));
    if (std::isfinite(hi)) best = std::min(best, d.value(hi));
    if (d.c > 0) {
      const double s = -d.b / d.c;
      if (s >= lo && s <= hi) best = std::min(best, d.value(s));
    }
    if (d.c == 0 && d.b == 0) best = std::min(best, d.e);
  }
  return best;
}

std::optional<FstarChoice> choose_fstar(const DcInstance& instance) {
  if (const auto v = analytic_fstar(instance)) return FstarChoice{*v, true};
  if (instance.fstar_hint) return FstarChoice{*instance.fstar_hint, false};
  return std::nullopt;
}

}  // namespace dca
