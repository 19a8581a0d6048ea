#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dca/interpolation.hpp"
#include "dca/regimes.hpp"

namespace dca {

/// Discrete N-step DCA data: iterates, both subgradients and both function
/// values at k = 0..N. The link g1[k+1] == g2[k] always holds.
struct PepVariables {
  int N = 0;
  int d = 1;
  std::vector<Vec> x;
  std::vector<Vec> g1;
  std::vector<Vec> g2;
  Vec f1;
  Vec f2;

  std::vector<Triplet> triplets_f1() const;
  std::vector<Triplet> triplets_f2() const;
  /// max_k |g1[k+1] - g2[k]|.
  double link_violation() const;
  /// (1/2) min_k |g1^k - g2^k|^2 / (F(x^0) - F(x^N)); 0 when the numerator is 0.
  double ratio() const;
  double objective_decrease() const;
};

/// N = 1 data meeting the equality conditions of the regime's proof, with
/// x = e_1, x+ = 0. For d >= 2 in regimes 3/4 the G+ (resp. G) vector is placed on
/// the reverse-pair sphere with |G| = |G+| so that the min in the PEP ratio is
/// attained by both terms. Throws infeasible_construction when the data fails
/// interpolation.
PepVariables extremal_instance(int regime, const DcParams& params, int d = 1);

struct ProbeOptions {
  int N = 1;
  int d = 1;
  long budget = 200'000;  // objective evaluations over all starts
  std::uint64_t seed = 7;
  int starts = 32;
  bool warm_start = true;  // include the extremal N=1 witness (tiled) as a start
  std::optional<PepVariables> initial;
};

struct ProbeResult {
  double best_ratio = 0.0;
  double certified_bound = 0.0;  // 1 / (p N)
  double gap = 0.0;              // certified_bound - best_ratio
  PepVariables witness;
  InterpReport feasibility_f1;
  InterpReport feasibility_f2;
  bool witness_feasible = false;
  bool certificate_violation = false;
  bool budget_exhausted = false;
  int best_start = -1;
  long evaluations = 0;
  RegimeCertificate regime;
};

inline constexpr double kWitnessTol = 1e-7;

/// Best f-values for fixed iterates and subgradients: minimizes
/// (f1^0 - f1^N) - (f2^0 - f2^N) subject to all interpolation inequalities.
/// Returns false when no f-values exist.
bool optimal_function_values(PepVariables& vars, const DcParams& params);

/// Multi-start local search for the worst N-step ratio over interpolable data.
ProbeResult probe(const DcParams& params, const ProbeOptions& options);
ProbeResult probe_serial(const DcParams& params, const ProbeOptions& options);

struct RateTrendFit {
  double a = 0.0;
  double b = 0.0;
};

/// Least-squares fit of 1/ratio = a N + b.
RateTrendFit fit_rate_trend(std::span<const int> Ns, std::span<const double> ratios);

}  // namespace dca
