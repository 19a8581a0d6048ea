#include "dca/interpolation.hpp"

#include <algorithm>
#include <cmath>

#include "dca/errors.hpp"

namespace dca {

double interpolation_rhs(const CurvatureClass& cls, std::span<const double> dg, std::span<const double> dx) {
  const double mu = cls.mu;
  if (!cls.smooth()) return 0.5 * mu * norm_sq(dx);
  const double L = cls.L.value();
  const double l = 1.0 / L;
  if (1.0 - mu * l >= 0.5)
    return (l * norm_sq(dg) - 2.0 * mu * l * dot(dg, dx) + mu * norm_sq(dx)) / (2.0 * (1.0 - mu * l));
  // Near mu = L expand around L dx instead: with r = dg - L dx the rhs is
  // L|dx|^2/2 + <dx, r> + |r|^2 / (2(L - mu)). The gap is floored so that a
  // degenerate class mu = L only tolerates rounding-sized residuals.
  Vec r(dg.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = dg[i] - L * dx[i];
  const double gap = std::max(L - mu, kDegenerateClassGap * std::max(1.0, std::abs(L)));
  return 0.5 * L * norm_sq(dx) + dot(dx, r) + norm_sq(r) / (2.0 * gap);
}

double interpolation_slack(const CurvatureClass& cls, const Triplet& ti, const Triplet& tj) {
  const Vec dx = sub(ti.x, tj.x);
  const Vec dg = sub(ti.g, tj.g);
  return ti.f - tj.f - dot(tj.g, dx) - interpolation_rhs(cls, dg, dx);
}

namespace {

void check_shapes(std::span<const Triplet> triplets) {
  if (triplets.empty()) return;
  const std::size_t d = triplets.front().x.size();
  for (const auto& t : triplets)
    if (t.x.size() != d || t.g.size() != d) throw Error(ErrorKind::bad_input, "triplets must share one dimension");
}

struct PairSlack {
  double slack;
  double scaled;
};

PairSlack pair_slack(const CurvatureClass& cls, const Triplet& ti, const Triplet& tj, SlackScale scale) {
  const Vec dx = sub(ti.x, tj.x);
  const Vec dg = sub(ti.g, tj.g);
  const double lin = dot(tj.g, dx);
  const double rhs = interpolation_rhs(cls, dg, dx);
  const double s = ti.f - tj.f - lin - rhs;
  if (scale == SlackScale::absolute) return {s, s};
  const double mag = std::max({1.0, std::abs(ti.f), std::abs(tj.f), std::abs(lin), std::abs(rhs)});
  return {s, s / mag};
}

void summarize(InterpReport& r, const std::vector<double>& scaled, double tol) {
  if (r.n < 2) return;
  r.worst_i = 0;
  r.worst_j = 1;
  for (std::size_t i = 0; i < r.n; ++i)
    for (std::size_t j = 0; j < r.n; ++j)
      if (i != j && scaled[i * r.n + j] < scaled[r.worst_i * r.n + r.worst_j]) {
        r.worst_i = i;
        r.worst_j = j;
      }
  r.min_slack = r.slack[r.worst_i * r.n + r.worst_j];
  r.feasible = scaled[r.worst_i * r.n + r.worst_j] >= -tol;
}

}  // namespace

InterpReport check_interpolation_serial(std::span<const Triplet> triplets, const CurvatureClass& cls, double tol,
                                        SlackScale scale) {
  check_shapes(triplets);
  InterpReport r;
  r.n = triplets.size();
  r.slack.assign(r.n * r.n, 0.0);
  std::vector<double> scaled(r.n * r.n, 0.0);
  for (std::size_t i = 0; i < r.n; ++i)
    for (std::size_t j = 0; j < r.n; ++j) {
      if (i == j) continue;
      const PairSlack p = pair_slack(cls, triplets[i], triplets[j], scale);
      r.slack[i * r.n + j] = p.slack;
      scaled[i * r.n + j] = p.scaled;
    }
  summarize(r, scaled, tol);
  return r;
}

InterpReport check_interpolation(std::span<const Triplet> triplets, const CurvatureClass& cls, double tol,
                                 SlackScale scale) {
  check_shapes(triplets);
  InterpReport r;
  r.n = triplets.size();
  r.slack.assign(r.n * r.n, 0.0);
  std::vector<double> scaled(r.n * r.n, 0.0);
  const long n = static_cast<long>(r.n);
#pragma omp parallel for schedule(static)
  for (long idx = 0; idx < n * n; ++idx) {
    const long i = idx / n, j = idx % n;
    if (i == j) continue;
    const PairSlack p = pair_slack(cls, triplets[i], triplets[j], scale);
    r.slack[idx] = p.slack;
    scaled[idx] = p.scaled;
  }
  summarize(r, scaled, tol);
  return r;
}

}  // namespace dca
