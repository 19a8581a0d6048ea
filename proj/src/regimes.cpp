#include "dca/regimes.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>

#include "dca/errors.hpp"

namespace dca {

namespace {

// Extended-real shorthands for one parameter point. Reciprocals of zero
// curvature are +inf, reciprocals of infinite L are 0.
struct Terms {
  double m1, m2, L1, L2;
  double a1, a2, l1, l2;

  explicit Terms(const DcParams& p)
      : m1(p.mu1()),
        m2(p.mu2()),
        L1(p.L1()),
        L2(p.L2()),
        a1(reciprocal(m1)),
        a2(reciprocal(m2)),
        l1(reciprocal(L1)),
        l2(reciprocal(L2)) {}

  double S1() const { return a1 + a2 + l2; }
  double S2() const { return a1 + a2 + l1; }
  // L1^{-1} (2 + L2/mu2); only meaningful for mu2 < 0.
  double T1() const { return l1 * (2.0 + L2 / m2); }
};

double clean(double v) { return v == 0.0 ? 0.0 : v; }

// (num) / (L - mu) with the L = inf limit 0.
double over_gap(double num, double L, double mu) { return std::isinf(L) ? 0.0 : num / (L - mu); }

// mu2 * (1/mu1 + 1/mu2 + 1/L2) written as 1 + mu2 (1/mu1 + 1/L2), which stays
// finite at mu2 = 0.
double mu_times_threshold(double mu, double a_other, double l) {
  if (mu == 0.0) return 1.0;
  return 1.0 + mu * (a_other + l);
}

double rel_scale(double a, double b) {
  double s = 1.0;
  if (std::isfinite(a)) s = std::max(s, std::abs(a));
  if (std::isfinite(b)) s = std::max(s, std::abs(b));
  return s;
}

// a >= b (or a > b: strict and non-strict conditions share the closure so that
// boundary points are claimed by every adjacent regime).
PredicateEval ge(std::string name, double a, double b) {
  const double margin = (a == b) ? 0.0 : a - b;
  return {std::move(name), margin >= -kPredicateRelTol * rel_scale(a, b), margin};
}

PredicateEval exact(std::string name, bool holds, double margin) {
  return {std::move(name), holds, margin};
}

PredicateEval any_of(std::string name, const PredicateEval& a, const PredicateEval& b) {
  return {std::move(name), a.holds || b.holds, std::max(a.margin, b.margin)};
}

PredicateEval all_of(std::string name, const PredicateEval& a, const PredicateEval& b) {
  return {std::move(name), a.holds && b.holds, std::min(a.margin, b.margin)};
}

// Odd rows of the table; even rows are obtained by exchanging the two terms.
Coefficients odd_row(int odd, const Terms& t) {
  Coefficients c;
  switch (odd) {
    case 1:
      c.sigma = t.l2 * over_gap(t.L2 - t.m1, t.L1, t.m1);
      c.sigma_plus = t.l2 * (1.0 + (t.l2 - t.l1) / (t.a1 - t.l1));
      c.alpha = t.m1 * t.l2 * (std::isinf(t.L1) ? 1.0 : (t.L1 - t.L2) / (t.L1 - t.m1));
      break;
    case 3: {
      const double S1 = t.S1();
      c.sigma = t.l1 == 0.0 ? 0.0 : t.l1 * S1 / (S1 - t.l1);
      c.sigma_plus = reciprocal(t.L2 + t.m2);
      c.alpha = -t.m2 * reciprocal(t.L2 + t.m2);
      break;
    }
    case 5:
      c.sigma = 0.0;
      c.sigma_plus = (t.m1 + t.m2) / (t.m2 * t.m2);
      c.alpha = (t.m1 + t.m2) / (-t.m2);
      break;
    case 7:
      c.sigma = 0.0;
      c.sigma_plus = (t.L2 + t.m1) / (t.L2 * t.L2);
      c.alpha = t.m1 / t.L2;
      break;
    default:
      throw Error(ErrorKind::bad_input, "unknown regime row " + std::to_string(odd));
  }
  c.sigma = clean(c.sigma);
  c.sigma_plus = clean(c.sigma_plus);
  c.alpha = clean(c.alpha);
  return c;
}

// `i` and `j` label the terms in predicate names ("1","2" or "2","1").
std::vector<PredicateEval> odd_domain(int odd, const Terms& t, const std::string& i, const std::string& j) {
  const std::string mu_i = "mu" + i, mu_j = "mu" + j, L_i = "L" + i, L_j = "L" + j;
  const std::string S = "S" + i;
  const std::string T = "T" + i + " = " + L_i + "^-1 (2 + " + L_j + "/" + mu_j + ")";
  const bool hypo_j = t.m2 < 0 && t.m1 + t.m2 > 0;
  const auto hypo = exact(mu_i + " > -" + mu_j + " > 0", hypo_j, std::min(t.m1 + t.m2, -t.m2));
  std::vector<PredicateEval> out;
  switch (odd) {
    case 1: {
      out.push_back(ge(L_i + " >= " + L_j, t.L1, t.L2));
      out.push_back(ge(L_j + " > " + mu_i, t.L2, t.m1));
      out.push_back(exact(mu_i + " >= 0", t.m1 >= 0, t.m1));
      const auto convex_j = exact(mu_j + " >= 0", t.m2 >= 0, t.m2);
      if (hypo_j) {
        out.push_back(any_of(mu_j + " >= 0 or (" + mu_i + " > -" + mu_j + " > 0 and " + S + " <= T" + i + ")",
                             convex_j, all_of("", hypo, ge(S + " <= " + T, t.T1(), t.S1()))));
      } else {
        out.push_back(any_of(mu_j + " >= 0 or " + mu_i + " > -" + mu_j + " > 0", convex_j, hypo));
      }
      break;
    }
    case 3:
      out.push_back(hypo);
      out.push_back(ge(L_j + " > " + mu_i, t.L2, t.m1));
      out.push_back(ge(L_i + " > " + mu_j, t.L1, t.m2));
      if (hypo_j) {
        out.push_back(ge(T + " <= " + S, t.S1(), t.T1()));
        out.push_back(ge(S + " <= 0", 0.0, t.S1()));
      }
      break;
    case 5:
      out.push_back(hypo);
      out.push_back(ge(L_i + " > " + mu_j, t.L1, t.m2));
      if (hypo_j) {
        out.push_back(ge(S + " > 0", t.S1(), 0.0));
        // Past mu_i >= L_j the p1 competitor is gone and the p5 combination
        // stays valid for every S >= 0, which closes the table's gap there.
        out.push_back(any_of(S + " > T" + i + " or " + mu_i + " >= " + L_j, ge(S + " > " + T, t.S1(), t.T1()),
                             ge(mu_i + " >= " + L_j, t.m1, t.L2)));
      }
      break;
    case 7:
      out.push_back(ge(L_i + " > " + mu_i, t.L1, t.m1));
      out.push_back(ge(mu_i + " > " + L_j, t.m1, t.L2));
      out.push_back(ge(mu_j + " * " + S + " >= 0", mu_times_threshold(t.m2, t.a1, t.l2), 0.0));
      break;
    default:
      throw Error(ErrorKind::bad_input, "unknown regime row " + std::to_string(odd));
  }
  return out;
}

bool all_hold(const std::vector<PredicateEval>& preds) {
  return std::all_of(preds.begin(), preds.end(), [](const PredicateEval& p) { return p.holds; });
}

void require_valid(const DcParams& params) {
  const ValidationReport r = validate(params);
  if (!r.valid) {
    std::string msg;
    for (const auto& v : r.violations) msg += (msg.empty() ? "" : "; ") + v;
    throw Error(ErrorKind::invalid_params, msg);
  }
  if (!r.decrease_precondition)
    throw Error(ErrorKind::precondition_violated, "requires mu1 + mu2 > 0 or mu1 = mu2 = 0");
}

bool agree(double a, double b) { return std::abs(a - b) <= kBoundaryAgreementTol * std::max(1.0, std::abs(a)); }

RegimeCertificate finish(std::vector<int> matched, const std::vector<Coefficients>& coeffs,
                         std::vector<PredicateEval> trace, bool one_nonsmooth) {
  if (matched.empty()) throw Error(ErrorKind::no_regime, "no regime domain holds");
  const int first = matched.front();
  const Coefficients& c = coeffs[first];
  for (int other : matched) {
    const Coefficients& o = coeffs[other];
    if (!agree(c.sigma, o.sigma) || !agree(c.sigma_plus, o.sigma_plus)) {
      std::ostringstream os;
      os.precision(17);
      os << "regimes " << first << " and " << other << " both hold with (sigma, sigma+) = (" << c.sigma << ", "
         << c.sigma_plus << ") vs (" << o.sigma << ", " << o.sigma_plus << ")";
      throw Error(ErrorKind::boundary_disagreement, os.str());
    }
  }
  RegimeCertificate cert;
  cert.index = first;
  cert.one_nonsmooth_table = one_nonsmooth;
  cert.label = one_nonsmooth && first == 1   ? "p1,7"
               : one_nonsmooth && first == 2 ? "p2,8"
                                             : "p" + std::to_string(first);
  cert.sigma = c.sigma;
  cert.sigma_plus = c.sigma_plus;
  cert.p = c.sigma + c.sigma_plus;
  cert.alpha = c.alpha;
  cert.matched = std::move(matched);
  cert.domain_trace = std::move(trace);
  return cert;
}

}  // namespace

double AsymptoticConstants::p5() const {
  if (!p5_inf) throw Error(ErrorKind::denominator_zero, "p5_inf undefined: (L2 + mu2) mu1^2 = 0");
  return *p5_inf;
}

double AsymptoticConstants::p6() const {
  if (!p6_inf) throw Error(ErrorKind::denominator_zero, "p6_inf undefined: (L1 + mu1) mu2^2 = 0");
  return *p6_inf;
}

Coefficients table1_row(int index, const DcParams& params) {
  if (index < 1 || index > 8) throw Error(ErrorKind::bad_input, "regime index out of range");
  if (index % 2 == 1) return odd_row(index, Terms(params));
  Coefficients c = odd_row(index - 1, Terms(params.swapped()));
  std::swap(c.sigma, c.sigma_plus);
  return c;
}

std::vector<PredicateEval> table1_domain(int index, const DcParams& params) {
  if (index < 1 || index > 8) throw Error(ErrorKind::bad_input, "regime index out of range");
  if (index % 2 == 1) return odd_domain(index, Terms(params), "1", "2");
  return odd_domain(index - 1, Terms(params.swapped()), "2", "1");
}

Coefficients table2_row(int index, const DcParams& params) {
  const Terms t(params);
  Coefficients c;
  switch (index) {
    case 1:  // p1,7 with L1 = inf
      c = {0.0, (t.L2 + t.m1) / (t.L2 * t.L2), t.m1 / t.L2};
      break;
    case 2:  // p2,8 with L2 = inf
      c = {(t.L1 + t.m2) / (t.L1 * t.L1), 0.0, t.m2 / t.L1};
      break;
    case 3: {  // L2 = inf
      const double s = t.a1 + t.a2;
      c = {t.l1 * s / (s - t.l1), 0.0, 0.0};
      break;
    }
    case 4: {  // L1 = inf
      const double s = t.a1 + t.a2;
      c = {0.0, t.l2 * s / (s - t.l2), 0.0};
      break;
    }
    case 5:
      c = {0.0, (t.m1 + t.m2) / (t.m2 * t.m2), (t.m1 + t.m2) / (-t.m2)};
      break;
    case 6:
      c = {(t.m1 + t.m2) / (t.m1 * t.m1), 0.0, (t.m1 + t.m2) / (-t.m1)};
      break;
    default:
      throw Error(ErrorKind::bad_input, "one-nonsmooth row index out of range");
  }
  c.sigma = clean(c.sigma);
  c.sigma_plus = clean(c.sigma_plus);
  c.alpha = clean(c.alpha);
  return c;
}

RegimeCertificate classify(const DcParams& params) {
  require_valid(params);
  if (!params.f1.smooth() && !params.f2.smooth())
    throw Error(ErrorKind::both_nonsmooth, "L1 = L2 = inf has no subgradient-gap certificate");

  std::vector<int> matched;
  std::vector<Coefficients> coeffs(9);
  std::vector<PredicateEval> trace;
  for (int i = 1; i <= 8; ++i) {
    auto preds = table1_domain(i, params);
    if (all_hold(preds)) {
      matched.push_back(i);
      coeffs[i] = table1_row(i, params);
      for (auto& p : preds) {
        p.name = "p" + std::to_string(i) + ": " + p.name;
        trace.push_back(std::move(p));
      }
    }
  }
  return finish(std::move(matched), coeffs, std::move(trace), false);
}

RegimeCertificate classify_nonsmooth(const DcParams& params) {
  if (params.f1.smooth() && params.f2.smooth())
    throw Error(ErrorKind::both_smooth, "one of L1, L2 must be inf");
  if (!params.f1.smooth() && !params.f2.smooth())
    throw Error(ErrorKind::both_nonsmooth, "exactly one of L1, L2 must be inf");
  require_valid(params);

  const Terms t(params);
  std::vector<int> matched;
  std::vector<Coefficients> coeffs(9);
  std::vector<PredicateEval> trace;
  auto consider = [&](int row, std::vector<PredicateEval> preds) {
    if (!all_hold(preds)) return;
    matched.push_back(row);
    coeffs[row] = table2_row(row, params);
    for (auto& p : preds) {
      p.name = "p" + std::to_string(row) + ": " + p.name;
      trace.push_back(std::move(p));
    }
  };

  if (!params.f1.smooth()) {
    consider(1, {exact("mu1 >= 0", t.m1 >= 0, t.m1),
                 ge("mu2 * S1 >= 0", mu_times_threshold(t.m2, t.a1, t.l2), 0.0)});
    consider(4, {exact("mu2 > -mu1 > 0", t.m1 < 0 && t.m1 + t.m2 > 0, std::min(t.m1 + t.m2, -t.m1))});
    consider(5, {exact("mu1 > -mu2 > 0", t.m2 < 0 && t.m1 + t.m2 > 0, std::min(t.m1 + t.m2, -t.m2)),
                 ge("S1 > 0", t.m2 < 0 ? t.S1() : 1.0, 0.0)});
  } else {
    consider(2, {exact("mu2 >= 0", t.m2 >= 0, t.m2),
                 ge("mu1 * S2 >= 0", mu_times_threshold(t.m1, t.a2, t.l1), 0.0)});
    consider(3, {exact("mu1 > -mu2 > 0", t.m2 < 0 && t.m1 + t.m2 > 0, std::min(t.m1 + t.m2, -t.m2))});
    consider(6, {exact("mu2 > -mu1 > 0", t.m1 < 0 && t.m1 + t.m2 > 0, std::min(t.m1 + t.m2, -t.m1)),
                 ge("S2 > 0", t.m1 < 0 ? t.S2() : 1.0, 0.0)});
  }
  std::sort(matched.begin(), matched.end());
  return finish(std::move(matched), coeffs, std::move(trace), true);
}

ThresholdValues thresholds(const DcParams& params) {
  const Terms t(params);
  return {t.S1(), t.S2()};
}

AsymptoticConstants asymptotic_constants(const DcParams& params) {
  const Terms t(params);
  AsymptoticConstants out;
  out.hypotheses_hold = t.L1 > t.m2 && t.L2 > t.m1;
  // (L + mu_a) / (L + mu_b) tends to 1 as L -> inf.
  auto curvature_ratio = [](double L, double mu_num, double mu_den) {
    return std::isinf(L) ? 1.0 : (L + mu_num) / (L + mu_den);
  };
  if (t.L2 + t.m2 != 0.0 && t.m1 != 0.0)
    out.p5_inf = curvature_ratio(t.L2, t.m1, t.m2) * (t.m1 + t.m2) / (t.m1 * t.m1);
  if (t.L1 + t.m1 != 0.0 && t.m2 != 0.0)
    out.p6_inf = curvature_ratio(t.L1, t.m2, t.m1) * (t.m1 + t.m2) / (t.m2 * t.m2);
  return out;
}

GridSpec GridSpec::parse(const std::string& text) {
  GridSpec g;
  std::istringstream is(text);
  std::string lo, hi, steps;
  if (!std::getline(is, lo, ':') || !std::getline(is, hi, ':') || !std::getline(is, steps))
    throw Error(ErrorKind::bad_input, "grid must be lo:hi:steps, got '" + text + "'");
  try {
    std::size_t used = 0;
    g.lo = std::stod(lo, &used);
    g.hi = std::stod(hi);
    g.steps = std::stoi(steps);
  } catch (const std::exception&) {
    throw Error(ErrorKind::bad_input, "grid must be lo:hi:steps, got '" + text + "'");
  }
  if (g.steps < 1 || !std::isfinite(g.lo) || !std::isfinite(g.hi))
    throw Error(ErrorKind::bad_input, "grid needs finite bounds and steps >= 1");
  return g;
}

namespace {

RegimeMapRow classify_node(ExtReal L1, ExtReal L2, double mu1, double mu2) {
  RegimeMapRow row{mu1, mu2, 0, 0.0};
  const DcParams params{{mu1, L1}, {mu2, L2}};
  const ValidationReport r = validate(params);
  if (!r.valid || !r.decrease_precondition) return row;
  const RegimeCertificate cert = classify(params);
  row.regime = cert.index;
  row.p = cert.p;
  return row;
}

void check_map_inputs(ExtReal L1, ExtReal L2) {
  if (L1.is_inf() && L2.is_inf()) throw Error(ErrorKind::both_nonsmooth, "regime map needs a finite L");
  if (!(L1.value() > 0) || !(L2.value() > 0)) throw Error(ErrorKind::invalid_params, "L1, L2 must be > 0");
}

}  // namespace

std::vector<RegimeMapRow> regime_map_serial(ExtReal L1, ExtReal L2, const GridSpec& mu1_grid,
                                            const GridSpec& mu2_grid) {
  check_map_inputs(L1, L2);
  std::vector<RegimeMapRow> rows;
  rows.reserve(static_cast<std::size_t>(mu1_grid.steps) * mu2_grid.steps);
  for (int i = 0; i < mu1_grid.steps; ++i)
    for (int j = 0; j < mu2_grid.steps; ++j) rows.push_back(classify_node(L1, L2, mu1_grid.at(i), mu2_grid.at(j)));
  return rows;
}

std::vector<RegimeMapRow> regime_map(ExtReal L1, ExtReal L2, const GridSpec& mu1_grid, const GridSpec& mu2_grid) {
  check_map_inputs(L1, L2);
  const long n1 = mu1_grid.steps, n2 = mu2_grid.steps;
  std::vector<RegimeMapRow> rows(static_cast<std::size_t>(n1 * n2));
  // Errors cannot leave an OpenMP region; keep the one at the lowest node index.
  long failed_at = n1 * n2;
  std::optional<Error> failure;
#pragma omp parallel for schedule(static)
  for (long idx = 0; idx < n1 * n2; ++idx) {
    const int i = static_cast<int>(idx / n2), j = static_cast<int>(idx % n2);
    try {
      rows[idx] = classify_node(L1, L2, mu1_grid.at(i), mu2_grid.at(j));
    } catch (const Error& e) {
#pragma omp critical(dca_regime_map_error)
      if (idx < failed_at) {
        failed_at = idx;
        failure.emplace(e);
      }
    }
  }
  if (failure) throw *failure;
  return rows;
}

}  // namespace dca
