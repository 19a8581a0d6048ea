#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dca/curvature.hpp"
#include "dca/vec.hpp"

namespace dca {

/// sum_j c_j x_j^2 / 2 + b_j x_j
struct QuadraticFamily {
  Vec c;
  Vec b;
};

struct QuadPiece {
  double c = 0.0;
  double b = 0.0;
  double e = 0.0;

  double value(double x) const { return 0.5 * c * x * x + b * x + e; }
  double slope(double x) const { return c * x + b; }
};

/// max_i (c_i x^2 / 2 + b_i x + e_i), one-dimensional.
struct MaxQuadraticsFamily {
  std::vector<QuadPiece> pieces;
};

/// a|x| + c x^2 / 2 + b x with a >= 0, one-dimensional.
struct AbsQuadraticFamily {
  double a = 0.0;
  double c = 0.0;
  double b = 0.0;
};

using Family = std::variant<QuadraticFamily, MaxQuadraticsFamily, AbsQuadraticFamily>;

struct FunctionSpec {
  Family family;
  CurvatureClass declared;

  std::size_t dimension() const;
  std::string family_name() const;
};

/// How to pick one element of the subdifferential at a kink. `weighted` takes
/// (1 - weight) * leftmost + weight * rightmost.
enum class SubgradPolicy { least_norm, leftmost, rightmost, weighted };

struct SubgradSelection {
  SubgradPolicy policy = SubgradPolicy::least_norm;
  double weight = 0.5;
};

struct OracleAnswer {
  double value = 0.0;
  Vec subgradient;
  std::string selection_tag;  // "gradient" away from kinks, else the policy used
};

OracleAnswer evaluate(const FunctionSpec& spec, std::span<const double> x,
                      const SubgradSelection& selection = {});

double value_at(const FunctionSpec& spec, std::span<const double> x);

/// [left, right] derivative interval of a one-dimensional family.
std::pair<double, double> subdifferential_1d(const FunctionSpec& spec, double x);

/// Tightest (mu, L) the family provably satisfies. L is +inf at kinks.
CurvatureClass certified_class(const FunctionSpec& spec);

/// Declared class contains the certified one: declared mu <= certified mu and
/// certified L <= declared L.
bool declared_class_certified(const FunctionSpec& spec);

/// Kinks of a one-dimensional family (points with distinct one-sided derivatives).
std::vector<double> kinks(const FunctionSpec& spec);

struct SubproblemSolution {
  Vec x;
  Vec g1;  // element of the f1 subdifferential at x closest to g2
  double residual = 0.0;  // |g1 - g2|
  bool exact = true;
};

/// argmin_w f1(w) - <g2, w>, solved in closed form or by piecewise enumeration.
/// Throws Error(subproblem_unbounded) when no minimizer exists.
SubproblemSolution solve_dca_subproblem(const FunctionSpec& f1, std::span<const double> g2);

/// Gradient descent with step 1/L on a smooth strongly convex f1; stops when the
/// gradient residual drops below tol. Results are flagged inexact.
SubproblemSolution solve_dca_subproblem_gd(const FunctionSpec& f1, std::span<const double> g2,
                                           std::span<const double> start, double tol = 1e-10,
                                           int max_iters = 1'000'000);

/// inf_w { f1(w) - <g, w> } for a quadratic f1, in closed form.
double quadratic_conjugate_min(const QuadraticFamily& f1, std::span<const double> g);

struct DcInstance {
  FunctionSpec f1;
  FunctionSpec f2;
  std::optional<double> fstar_hint;

  DcParams params() const { return {f1.declared, f2.declared}; }
  std::size_t dimension() const { return f1.dimension(); }
};

/// Checks dimensions, family constraints and declared classes; throws Error(bad_input).
void check_instance(const DcInstance& instance);

/// inf F for the supported families: per-coordinate closed form for quadratics,
/// exact piecewise enumeration in one dimension. nullopt when F is unbounded below.
std::optional<double> analytic_fstar(const DcInstance& instance);

struct FstarChoice {
  double value = 0.0;
  bool verified = false;  // true when analytic; hints are unverified
};

std::optional<FstarChoice> choose_fstar(const DcInstance& instance);

}  // namespace dca
