#include "dca/probe.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "dca/certificates.hpp"
#include "dca/engine.hpp"
#include "dca/errors.hpp"

namespace dca {

std::vector<Triplet> PepVariables::triplets_f1() const {
  std::vector<Triplet> t;
  for (int k = 0; k <= N; ++k) t.push_back({x[k], g1[k], f1[k]});
  return t;
}

std::vector<Triplet> PepVariables::triplets_f2() const {
  std::vector<Triplet> t;
  for (int k = 0; k <= N; ++k) t.push_back({x[k], g2[k], f2[k]});
  return t;
}

double PepVariables::link_violation() const {
  double worst = 0.0;
  for (int k = 0; k < N; ++k) worst = std::max(worst, std::sqrt(dist_sq(g1[k + 1], g2[k])));
  return worst;
}

double PepVariables::objective_decrease() const { return (f1[0] - f2[0]) - (f1[N] - f2[N]); }

double PepVariables::ratio() const {
  double min_g = kInf;
  for (int k = 0; k <= N; ++k) min_g = std::min(min_g, dist_sq(g1[k], g2[k]));
  if (min_g == 0.0) return 0.0;
  const double dF = objective_decrease();
  return dF > 0 ? 0.5 * min_g / dF : kInf;
}

namespace {

// Max-plus closure of the difference constraints f_i - f_j >= C_ij implied by
// interpolation. D[i][j] is the largest total weight of a path i -> j.
struct Closure {
  int n = 0;
  std::vector<double> D;
  double magnitude = 1.0;

  double at(int i, int j) const { return D[i * n + j]; }
  double cycle_excess() const {
    double worst = 0.0;
    for (int i = 0; i < n; ++i) worst = std::max(worst, at(i, i));
    return worst;
  }
};

Closure close(const std::vector<Vec>& x, const std::vector<Vec>& g, const CurvatureClass& cls) {
  Closure c;
  c.n = static_cast<int>(x.size());
  const int n = c.n;
  c.D.assign(n * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const Vec dx = sub(x[i], x[j]);
      const Vec dg = sub(g[i], g[j]);
      const double w = dot(g[j], dx) + interpolation_rhs(cls, dg, dx);
      c.D[i * n + j] = w;
      c.magnitude = std::max(c.magnitude, std::abs(w));
    }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) c.D[i * n + j] = std::max(c.D[i * n + j], c.D[i * n + k] + c.D[k * n + j]);
  return c;
}

constexpr double kCycleTol = 1e-11;
// Accepting a final witness: rescaling a point found at kCycleTol can push a
// cycle just past it by rounding.
constexpr double kFinalCycleTol = 1e-9;

struct Score {
  bool feasible = false;
  double ratio = -kInf;
  double denom = 0.0;
  // One flag per closed cycle through a node (f1 nodes, then f2 nodes), plus
  // a final flag for a non-positive objective decrease.
  std::vector<char> violated;
};

Score score_of(const PepVariables& v, const DcParams& params, Closure* c1_out = nullptr, Closure* c2_out = nullptr,
               double cycle_tol = kCycleTol) {
  Score s;
  Closure c1 = close(v.x, v.g1, params.f1);
  Closure c2 = close(v.x, v.g2, params.f2);
  const int n = v.N + 1;
  s.violated.assign(2 * n + 1, 0);
  for (int i = 0; i < n; ++i) {
    s.violated[i] = c1.at(i, i) > cycle_tol * c1.magnitude;
    s.violated[n + i] = c2.at(i, i) > cycle_tol * c2.magnitude;
  }
  s.feasible = std::none_of(s.violated.begin(), s.violated.end(), [](char b) { return b != 0; }) &&
               std::all_of(c1.D.begin(), c1.D.end(), [](double e) { return std::isfinite(e); }) &&
               std::all_of(c2.D.begin(), c2.D.end(), [](double e) { return std::isfinite(e); });
  if (s.feasible) {
    s.denom = c1.at(0, v.N) + c2.at(v.N, 0);
    double min_g = kInf;
    for (int k = 0; k <= v.N; ++k) min_g = std::min(min_g, dist_sq(v.g1[k], v.g2[k]));
    if (min_g == 0.0) {
      s.ratio = 0.0;
    } else if (s.denom > 0 && std::isfinite(0.5 * min_g / s.denom)) {
      s.ratio = 0.5 * min_g / s.denom;
    } else {
      s.feasible = false;
      s.violated.back() = 1;
    }
  }
  if (c1_out) *c1_out = std::move(c1);
  if (c2_out) *c2_out = std::move(c2);
  return s;
}

// Free coordinates: x^0..x^{N-1}, g1^0, g2^0..g2^{N-1}. Translation and adding a
// common linear function to f1 and f2 fix x^N = 0 and g2^N = 0.
int free_size(int N, int d) { return (2 * N + 1) * d; }

PepVariables unpack(const Vec& z, int N, int d) {
  PepVariables v;
  v.N = N;
  v.d = d;
  v.x.assign(N + 1, Vec(d, 0.0));
  v.g1.assign(N + 1, Vec(d, 0.0));
  v.g2.assign(N + 1, Vec(d, 0.0));
  v.f1.assign(N + 1, 0.0);
  v.f2.assign(N + 1, 0.0);
  std::size_t p = 0;
  for (int k = 0; k < N; ++k)
    for (int j = 0; j < d; ++j) v.x[k][j] = z[p++];
  for (int j = 0; j < d; ++j) v.g1[0][j] = z[p++];
  for (int k = 0; k < N; ++k)
    for (int j = 0; j < d; ++j) v.g2[k][j] = z[p++];
  for (int k = 0; k < N; ++k) v.g1[k + 1] = v.g2[k];
  return v;
}

Vec pack(const PepVariables& v) {
  const Vec& xN = v.x[v.N];
  const Vec& gN = v.g2[v.N];
  Vec z;
  z.reserve(free_size(v.N, v.d));
  for (int k = 0; k < v.N; ++k)
    for (int j = 0; j < v.d; ++j) z.push_back(v.x[k][j] - xN[j]);
  for (int j = 0; j < v.d; ++j) z.push_back(v.g1[0][j] - gN[j]);
  for (int k = 0; k < v.N; ++k)
    for (int j = 0; j < v.d; ++j) z.push_back(v.g2[k][j] - gN[j]);
  return z;
}

// The ratio is invariant under (x, g) -> t (x, g); keep F(x^0) - F(x^N) = 1.
void normalize(Vec& z, double denom) {
  if (!(denom > 0) || !std::isfinite(denom)) return;
  const double t = 1.0 / std::sqrt(denom);
  for (double& v : z) v *= t;
}

using Rng = std::mt19937_64;

Rng start_rng(std::uint64_t seed, int start) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(start)};
  return Rng(seq);
}

PepVariables from_trajectory(const Trajectory& traj, int N, int d) {
  PepVariables v;
  v.N = N;
  v.d = d;
  for (int k = 0; k <= N; ++k) {
    v.x.push_back(traj.points[k].x);
    v.g1.push_back(traj.points[k].g1);
    v.g2.push_back(traj.points[k].g2);
    v.f1.push_back(traj.points[k].f1);
    v.f2.push_back(traj.points[k].f2);
  }
  return v;
}

std::pair<double, double> curvature_range(const CurvatureClass& cls, bool positive) {
  const double hi = cls.smooth() ? cls.L.value() : std::max(cls.mu, 0.0) + 10.0;
  double lo = cls.mu;
  if (positive && lo <= 0) lo = 0.05 * hi;
  return {lo, hi};
}

// DCA on a separable quadratic pair from the declared classes.
std::optional<PepVariables> quadratic_run(const DcParams& params, const Vec& c1, const Vec& c2, const Vec& b1,
                                          const Vec& b2, const Vec& x0, int N, int d) {
  DcInstance inst{{QuadraticFamily{c1, b1}, params.f1}, {QuadraticFamily{c2, b2}, params.f2}, std::nullopt};
  const Trajectory traj = run_dca(inst, x0, RunOptions{N, -1.0, CriticalityMeasure::gap_norm, {}});
  if (traj.iterations() < N) return std::nullopt;
  return from_trajectory(traj, N, d);
}

PepVariables cold_start(const DcParams& params, int N, int d, Rng& rng) {
  auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  const auto [lo1, hi1] = curvature_range(params.f1, true);
  const auto [lo2, hi2] = curvature_range(params.f2, false);
  for (int attempt = 0; attempt < 100; ++attempt) {
    Vec c1(d), c2(d), b1(d), b2(d), x0(d);
    for (int j = 0; j < d; ++j) {
      c1[j] = uni(lo1, hi1);
      c2[j] = uni(lo2, hi2);
      b1[j] = uni(-1.0, 1.0);
      b2[j] = uni(-1.0, 1.0);
      x0[j] = uni(-2.0, 2.0);
    }
    if (auto v = quadratic_run(params, c1, c2, b1, b2, x0, N, d)) return *v;
  }
  throw Error(ErrorKind::infeasible_construction, "no feasible cold start");
}

// Multi-step warm start: the best DCA run on quadratics whose curvatures sit on
// the class endpoints.
PepVariables endpoint_start(const DcParams& params, int N, int d) {
  // Curvatures sit 1% inside the classes: on an endpoint every interpolation
  // cycle is exactly zero and rounding can reject the start.
  auto inset = [](std::pair<double, double> r) {
    const double w = 0.01 * (r.second - r.first);
    return std::pair{r.first + w, r.second - w};
  };
  const auto [lo1, hi1] = inset(curvature_range(params.f1, true));
  const auto [lo2, hi2] = inset(curvature_range(params.f2, false));
  std::optional<PepVariables> best;
  double best_ratio = -1.0;
  for (double a : {lo1, hi1})
    for (double b : {lo2, hi2}) {
      Vec x0(d, 0.0);
      x0[0] = 1.0;
      auto v = quadratic_run(params, Vec(d, a), Vec(d, b), Vec(d, 0.0), Vec(d, 0.0), x0, N, d);
      if (!v) continue;
      const Score s = score_of(*v, params);
      if (s.feasible && s.ratio > best_ratio) {
        best_ratio = s.ratio;
        best = std::move(v);
      }
    }
  // Equal curvatures make F linear along the run, so |g1 - g2| stays constant.
  const double c_lo = std::max({lo1, lo2, 1e-3}), c_hi = std::min(hi1, hi2);
  if (c_lo <= c_hi)
    for (double c : {c_lo, c_hi}) {
      Vec b1(d, 0.0);
      b1[0] = -1.0;
      auto v = quadratic_run(params, Vec(d, c), Vec(d, c), b1, Vec(d, 0.0), Vec(d, 0.0), N, d);
      if (!v) continue;
      const Score s = score_of(*v, params);
      if (s.feasible && s.ratio > best_ratio) {
        best_ratio = s.ratio;
        best = std::move(v);
      }
    }
  if (!best) throw Error(ErrorKind::infeasible_construction, "no feasible warm start");
  return *best;
}

struct StartOutcome {
  double ratio = -kInf;
  Vec z;
  long evaluations = 0;
  bool exhausted = false;
};

// Dense square matrix helpers for the search distribution.
struct Square {
  int n = 0;
  std::vector<double> a;

  explicit Square(int n_ = 0) : n(n_), a(static_cast<std::size_t>(n_) * n_, 0.0) {
    for (int i = 0; i < n; ++i) a[i * n + i] = 1.0;
  }
  Vec times(const Vec& v) const {
    Vec r(n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) r[i] += a[i * n + j] * v[j];
    return r;
  }
  Vec transpose_times(const Vec& v) const {
    Vec r(n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) r[j] += a[i * n + j] * v[i];
    return r;
  }
  // this = scale * this + u v^T
  void update(double scale, const Vec& u, const Vec& v) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a[i * n + j] = scale * a[i * n + j] + u[i] * v[j];
  }
};

// Applies A <- A + u v^T to a factor and its inverse (Sherman-Morrison).
void rank_one(Square& A, Square& Ainv, const Vec& u, const Vec& v) {
  const Vec Ainv_u = Ainv.times(u);
  const Vec vT_Ainv = Ainv.transpose_times(v);
  const double denom = 1.0 + dot(v, Ainv_u);
  if (std::abs(denom) < 1e-12) return;
  A.update(1.0, u, v);
  Vec scaled(Ainv_u.size());
  for (std::size_t i = 0; i < scaled.size(); ++i) scaled[i] = -Ainv_u[i] / denom;
  Ainv.update(1.0, scaled, vT_Ainv);
}

// (1+1)-CMA-ES with constraint handling by active covariance reduction along
// the directions that produced violations (Arnold and Hansen, 2012).
StartOutcome local_search(const DcParams& params, int N, int d, Vec z, long budget, Rng& rng) {
  StartOutcome out;
  Score cur = score_of(unpack(z, N, d), params);
  if (!cur.feasible) {
    out.z = std::move(z);
    out.exhausted = budget > 0;
    return out;
  }
  normalize(z, cur.denom);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int n = static_cast<int>(z.size());
  const double nd = n;
  const double damping = 1.0 + nd / 2.0;
  const double c_path = 2.0 / (nd + 2.0);
  const double c_succ = 1.0 / 12.0;
  const double target = 2.0 / 11.0;
  const double c_cov = 2.0 / (nd * nd + 6.0);
  const double c_con = 1.0 / (nd + 2.0);
  const double beta = 0.1 / (nd + 2.0);
  const int m = static_cast<int>(cur.violated.size());

  double sigma = 0.1, p_succ = target;
  Square A(n), Ainv(n);
  Vec path(n, 0.0);
  std::vector<Vec> con(m, Vec(n, 0.0));
  auto reset = [&] {
    sigma = 0.1;
    p_succ = target;
    A = Square(n);
    Ainv = Square(n);
    std::fill(path.begin(), path.end(), 0.0);
    for (auto& v : con) std::fill(v.begin(), v.end(), 0.0);
  };

  Vec g(n), trial(n);
  while (out.evaluations < budget) {
    for (auto& v : g) v = gauss(rng);
    const Vec Az = A.times(g);
    for (int i = 0; i < n; ++i) trial[i] = z[i] + sigma * Az[i];
    ++out.evaluations;
    const Score s = score_of(unpack(trial, N, d), params);

    if (!s.feasible) {
      int count = 0;
      for (int j = 0; j < m; ++j)
        if (s.violated[j]) {
          ++count;
          for (int i = 0; i < n; ++i) con[j][i] = (1.0 - c_con) * con[j][i] + c_con * Az[i];
        }
      for (int j = 0; j < m; ++j) {
        if (!s.violated[j]) continue;
        const Vec w = Ainv.times(con[j]);
        const double ww = dot(w, w);
        if (ww <= 0) continue;
        Vec u(n);
        for (int i = 0; i < n; ++i) u[i] = -beta / count * con[j][i];
        Vec v(n);
        for (int i = 0; i < n; ++i) v[i] = w[i] / ww;
        rank_one(A, Ainv, u, v);
      }
    } else if (s.ratio > cur.ratio) {
      cur = s;
      z = trial;
      p_succ = (1.0 - c_succ) * p_succ + c_succ;
      sigma *= std::exp((p_succ - target) / ((1.0 - target) * damping));
      for (int i = 0; i < n; ++i) path[i] = (1.0 - c_path) * path[i] + std::sqrt(c_path * (2.0 - c_path)) * Az[i];
      const Vec w = Ainv.times(path);
      const double ww = dot(w, w);
      if (ww > 0) {
        const double a = std::sqrt(1.0 - c_cov);
        const double b = a / ww * (std::sqrt(1.0 + c_cov * ww / (1.0 - c_cov)) - 1.0);
        // A <- a A + b path w^T, applied as a (A + (b/a) path w^T).
        Vec u(n);
        for (int i = 0; i < n; ++i) u[i] = b / a * path[i];
        rank_one(A, Ainv, u, w);
        for (auto& e : A.a) e *= a;
        for (auto& e : Ainv.a) e /= a;
      }
      // Rescaling the point rescales the search distribution with it.
      const double t = 1.0 / std::sqrt(s.denom);
      normalize(z, s.denom);
      sigma *= t;
    } else {
      p_succ = (1.0 - c_succ) * p_succ;
      sigma *= std::exp((p_succ - target) / ((1.0 - target) * damping));
    }
    if (sigma < 1e-12 || !std::isfinite(sigma)) reset();
  }
  out.exhausted = out.evaluations >= budget;
  out.ratio = cur.ratio;
  out.z = std::move(z);
  return out;
}

ProbeResult run_probe(const DcParams& params, const ProbeOptions& opt, bool parallel) {
  if (opt.N < 1 || opt.N > 10) throw Error(ErrorKind::bad_input, "probe needs 1 <= N <= 10");
  if (opt.d < 1 || opt.d > 3) throw Error(ErrorKind::bad_input, "probe needs 1 <= d <= 3");
  if (opt.starts < 1 || opt.budget < 0) throw Error(ErrorKind::bad_input, "probe needs starts >= 1, budget >= 0");
  if (opt.initial && (opt.initial->N != opt.N || opt.initial->d != opt.d))
    throw Error(ErrorKind::bad_input, "initial point has the wrong N or d");

  ProbeResult res;
  res.regime = regime_for(params);
  res.certified_bound = 1.0 / (res.regime.p * opt.N);

  const int S = opt.starts;
  std::vector<StartOutcome> outcomes(S);
  int failed_at = S;
  std::optional<Error> failure;
  auto run_start = [&](int s) {
    Rng rng = start_rng(opt.seed, s);
    PepVariables init;
    if (s == 0 && opt.initial) init = *opt.initial;
    else if (s == 0 && opt.warm_start)
      init = opt.N == 1 && !res.regime.one_nonsmooth_table ? extremal_instance(res.regime.index, params, opt.d)
                                                            : endpoint_start(params, opt.N, opt.d);
    else init = cold_start(params, opt.N, opt.d, rng);
    const long share = opt.budget / S + (s < opt.budget % S ? 1 : 0);
    outcomes[s] = local_search(params, opt.N, opt.d, pack(init), share, rng);
  };
  if (parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (int s = 0; s < S; ++s) {
      try {
        run_start(s);
      } catch (const Error& e) {
#pragma omp critical(dca_probe_error)
        if (s < failed_at) {
          failed_at = s;
          failure.emplace(e);
        }
      }
    }
    if (failure) throw *failure;
  } else {
    for (int s = 0; s < S; ++s) run_start(s);
  }

  for (int s = 0; s < S; ++s) {
    res.evaluations += outcomes[s].evaluations;
    res.budget_exhausted = res.budget_exhausted || outcomes[s].exhausted;
    if (res.best_start < 0 || outcomes[s].ratio > outcomes[res.best_start].ratio) res.best_start = s;
  }
  const StartOutcome& best = outcomes[res.best_start];
  res.witness = unpack(best.z, opt.N, opt.d);
  const bool feasible = optimal_function_values(res.witness, params);
  res.best_ratio = feasible ? res.witness.ratio() : 0.0;
  res.gap = res.certified_bound - res.best_ratio;
  res.feasibility_f1 = check_interpolation_serial(res.witness.triplets_f1(), params.f1, kWitnessTol, SlackScale::relative);
  res.feasibility_f2 = check_interpolation_serial(res.witness.triplets_f2(), params.f2, kWitnessTol, SlackScale::relative);
  res.witness_feasible = feasible && res.feasibility_f1.feasible && res.feasibility_f2.feasible;
  res.certificate_violation = res.witness_feasible && res.best_ratio > res.certified_bound + 1e-6;
  return res;
}

}  // namespace

bool optimal_function_values(PepVariables& vars, const DcParams& params) {
  Closure c1, c2;
  const Score s = score_of(vars, params, &c1, &c2, kFinalCycleTol);
  const int N = vars.N;
  for (int k = 0; k <= N; ++k) {
    vars.f1[k] = c1.at(k, N);
    vars.f2[k] = -c2.at(N, k);
  }
  if (s.feasible && s.denom > 0) {
    // Rescale to F(x^0) - F(x^N) = 1; the ratio is unchanged.
    const double t = 1.0 / std::sqrt(s.denom);
    for (int k = 0; k <= N; ++k) {
      for (double& v : vars.x[k]) v *= t;
      for (double& v : vars.g1[k]) v *= t;
      for (double& v : vars.g2[k]) v *= t;
      vars.f1[k] /= s.denom;
      vars.f2[k] /= s.denom;
    }
  }
  return s.feasible;
}

PepVariables extremal_instance(int regime, const DcParams& params, int d) {
  if (d < 1) throw Error(ErrorKind::bad_input, "dimension must be >= 1");
  const bool even = regime % 2 == 0;
  const DcParams p = even ? params.swapped() : params;
  const int odd = even ? regime - 1 : regime;
  const double mu1 = p.mu1(), mu2 = p.mu2(), L1 = p.L1(), L2 = p.L2();

  Vec G(d, 0.0), Gp(d, 0.0);
  switch (odd) {
    case 1:
      G[0] = L2;
      Gp[0] = L2;
      break;
    case 3: {
      const double kL2 = std::isinf(L1) ? kInf : L1 + mu2 * L2 * (L1 - mu1) / (mu1 * (L2 + mu2));
      if (!std::isfinite(kL2)) throw Error(ErrorKind::infeasible_construction, "p3 witness needs finite L1");
      G[0] = kL2;
      Gp[0] = L2;
      if (d >= 2) {
        // G+ on the sphere |G+ - c e1| = r of the f2 pair, with |G+| = |G|.
        const double c = 0.5 * (mu2 + L2), g2n = kL2 * kL2;
        const double u = (mu2 * L2 + g2n) / (2.0 * c);
        if (g2n >= u * u) {
          Gp[0] = u;
          Gp[1] = std::sqrt(g2n - u * u);
        }
      }
      break;
    }
    case 5:
      G[0] = mu1;
      Gp[0] = mu2;
      break;
    case 7:
      G[0] = mu1;
      Gp[0] = L2;
      break;
    default:
      throw Error(ErrorKind::bad_input, "regime index must be 1..8");
  }
  if (even) std::swap(G, Gp);

  PepVariables v;
  v.N = 1;
  v.d = d;
  Vec e1(d, 0.0);
  e1[0] = 1.0;
  v.x = {e1, Vec(d, 0.0)};
  Vec minus_Gp(d);
  for (int j = 0; j < d; ++j) minus_Gp[j] = -Gp[j];
  v.g1 = {G, Vec(d, 0.0)};
  v.g2 = {Vec(d, 0.0), minus_Gp};
  v.f1 = {interpolation_rhs(params.f1, G, e1), 0.0};
  v.f2 = {-interpolation_rhs(params.f2, Gp, e1), 0.0};

  const auto r1 = check_interpolation_serial(v.triplets_f1(), params.f1, kWitnessTol, SlackScale::relative);
  const auto r2 = check_interpolation_serial(v.triplets_f2(), params.f2, kWitnessTol, SlackScale::relative);
  if (!r1.feasible || !r2.feasible)
    throw Error(ErrorKind::infeasible_construction,
                "extremal data for regime " + std::to_string(regime) + " violates interpolation");
  return v;
}

ProbeResult probe(const DcParams& params, const ProbeOptions& options) { return run_probe(params, options, true); }

ProbeResult probe_serial(const DcParams& params, const ProbeOptions& options) {
  return run_probe(params, options, false);
}

RateTrendFit fit_rate_trend(std::span<const int> Ns, std::span<const double> ratios) {
  if (Ns.size() != ratios.size() || Ns.size() < 2) throw Error(ErrorKind::bad_input, "fit needs >= 2 points");
  const double n = static_cast<double>(Ns.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < Ns.size(); ++i) {
    if (!(ratios[i] > 0)) throw Error(ErrorKind::bad_input, "ratios must be positive");
    const double x = Ns[i], y = 1.0 / ratios[i];
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double var = sxx - sx * sx / n;
  if (var == 0) throw Error(ErrorKind::bad_input, "fit needs distinct N");
  RateTrendFit f;
  f.a = (sxy - sx * sy / n) / var;
  f.b = (sy - f.a * sx) / n;
  return f;
}

}  // namespace dca
