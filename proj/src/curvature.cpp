#include "dca/curvature.hpp"

#include <cmath>
#include <sstream>

#include "dca/errors.hpp"

namespace dca {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_params: return "InvalidParams";
    case ErrorKind::no_regime: return "NoRegime";
    case ErrorKind::precondition_violated: return "PreconditionViolated";
    case ErrorKind::both_smooth: return "BothSmooth";
    case ErrorKind::both_nonsmooth: return "BothNonsmooth";
    case ErrorKind::denominator_zero: return "DenominatorZero";
    case ErrorKind::boundary_disagreement: return "BoundaryDisagreement";
    case ErrorKind::subproblem_unbounded: return "SubproblemUnbounded";
    case ErrorKind::missing_fstar: return "MissingFstar";
    case ErrorKind::infeasible_construction: return "InfeasibleConstruction";
    case ErrorKind::bad_input: return "BadInput";
  }
  return "Unknown";
}

std::string format_ext(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

namespace {

void check_term(const CurvatureClass& c, const char* mu_name, const char* L_name, ValidationReport& r) {
  const double mu = c.mu;
  const double L = c.L.value();
  auto fail = [&](std::string msg) {
    r.valid = false;
    r.violations.push_back(std::move(msg));
  };
  if (std::isnan(mu)) fail(std::string(mu_name) + " is NaN");
  if (std::isnan(L)) fail(std::string(L_name) + " is NaN");
  if (std::isinf(mu)) fail(std::string(mu_name) + " must be finite");
  if (!std::isnan(L) && !(L > 0)) fail(std::string(L_name) + " > 0 violated");
  if (!std::isnan(mu) && !std::isnan(L) && !(mu < L))
    fail(std::string(mu_name) + " < " + L_name + " violated");
}

}  // namespace

ValidationReport validate(const DcParams& params) {
  ValidationReport r;
  check_term(params.f1, "mu1", "L1", r);
  check_term(params.f2, "mu2", "L2", r);
  const double mu1 = params.mu1(), mu2 = params.mu2();
  r.decrease_precondition = (mu1 + mu2 > 0) || (mu1 == 0 && mu2 == 0);
  r.f_nonconvex = params.L2() > mu1;
  r.f_nonconcave = params.L1() > mu2;
  r.f1_smooth = params.f1.smooth();
  r.f2_smooth = params.f2.smooth();
  return r;
}

DcParams shift_curvature(const DcParams& params, double rho) {
  if (!std::isfinite(rho)) throw Error(ErrorKind::invalid_params, "curvature shift must be finite");
  DcParams out = params;
  out.f1.mu += rho;
  out.f2.mu += rho;
  out.f1.L = ExtReal(params.L1() + rho);
  out.f2.L = ExtReal(params.L2() + rho);
  return out;
}

}  // namespace dca
