#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "dca/errors.hpp"
#include "dca/oracles.hpp"
#include "support.hpp"

using namespace dca;
using dca::test::uniform;

namespace {

FunctionSpec quad(Vec c, Vec b, double mu, double L) { return {QuadraticFamily{std::move(c), std::move(b)}, {mu, L}}; }

FunctionSpec absq(double a, double c, double b) { return {AbsQuadraticFamily{a, c, b}, {c, ExtReal::infinity()}}; }

// Random member of every family together with its certified class.
std::vector<FunctionSpec> random_specs(dca::test::Rng& rng) {
  std::vector<FunctionSpec> out;
  const int d = 3;
  Vec c(d), b(d);
  for (int j = 0; j < d; ++j) {
    c[j] = uniform(rng, -1, 3);
    b[j] = uniform(rng, -1, 1);
  }
  const double lo = *std::min_element(c.begin(), c.end()), hi = *std::max_element(c.begin(), c.end());
  out.push_back(quad(c, b, lo, hi + 0.1));

  MaxQuadraticsFamily m;
  for (int i = 0; i < 3; ++i) m.pieces.push_back({uniform(rng, -0.5, 2), uniform(rng, -2, 2), uniform(rng, -1, 1)});
  FunctionSpec ms{m, {}};
  ms.declared = certified_class(ms);
  out.push_back(ms);

  out.push_back(absq(uniform(rng, 0, 2), uniform(rng, -1, 2), uniform(rng, -1, 1)));
  return out;
}

Vec random_point(dca::test::Rng& rng, std::size_t d, double r = 2.0) {
  Vec x(d);
  for (auto& v : x) v = uniform(rng, -r, r);
  return x;
}

}  // namespace

TEST_SUITE("oracles") {
  TEST_CASE("evaluation examples") {
    const auto q = evaluate(quad({2}, {0}, 2, 3), Vec{3.0});
    CHECK(q.value == 9.0);
    CHECK(q.subgradient[0] == 6.0);
    CHECK(q.selection_tag == "gradient");

    const auto a = evaluate(absq(1, 0, 0), Vec{0.0});
    CHECK(a.value == 0.0);
    CHECK(a.subgradient[0] == 0.0);

    // max{x^2/2, (x-2)^2/2 + 1} crosses at x = 3/2 with slopes -1/2 and 3/2.
    const FunctionSpec m{MaxQuadraticsFamily{{{1, 0, 0}, {1, -2, 3}}}, {1, ExtReal::infinity()}};
    const auto left = evaluate(m, Vec{1.5}, {SubgradPolicy::leftmost});
    const auto right = evaluate(m, Vec{1.5}, {SubgradPolicy::rightmost});
    CHECK(left.subgradient[0] == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(right.subgradient[0] == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(left.value == doctest::Approx(1.125).epsilon(1e-12));
    const auto mid = evaluate(m, Vec{1.5}, {SubgradPolicy::weighted, 0.25});
    CHECK(mid.subgradient[0] == doctest::Approx(0.0).epsilon(1e-12));
    const auto [lo, hi] = subdifferential_1d(m, 1.5);
    CHECK(lo == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(hi == doctest::Approx(1.5).epsilon(1e-12));
    REQUIRE(kinks(m).size() == 1);
    CHECK(kinks(m)[0] == doctest::Approx(1.5).epsilon(1e-12));
  }

  TEST_CASE("gradients match central differences away from kinks") {
    dca::test::Rng rng(21);
    for (int rep = 0; rep < 50; ++rep)
      for (const auto& spec : random_specs(rng)) {
        const auto ks = kinks(spec);
        for (int t = 0; t < 20; ++t) {
          Vec x = random_point(rng, spec.dimension());
          bool near_kink = false;
          for (double k : ks) near_kink = near_kink || std::abs(x[0] - k) < 1e-3;
          if (near_kink) continue;
          const auto ans = evaluate(spec, x);
          for (std::size_t j = 0; j < x.size(); ++j) {
            const double h = 1e-6;
            Vec xp = x, xm = x;
            xp[j] += h;
            xm[j] -= h;
            const double fd = (value_at(spec, xp) - value_at(spec, xm)) / (2 * h);
            CHECK(ans.subgradient[j] == doctest::Approx(fd).epsilon(1e-6));
          }
        }
      }
  }

  TEST_CASE("sampled pairs satisfy the curvature sandwich of the certified class") {
    dca::test::Rng rng(22);
    for (int rep = 0; rep < 30; ++rep)
      for (const auto& spec : random_specs(rng)) {
        const CurvatureClass cls = certified_class(spec);
        for (int t = 0; t < 1000 / 30 + 1; ++t) {
          const Vec x = random_point(rng, spec.dimension()), y = random_point(rng, spec.dimension());
          const auto ay = evaluate(spec, y);
          const double gap = value_at(spec, x) - ay.value - dot(ay.subgradient, sub(x, y));
          const double r2 = dist_sq(x, y);
          const double scale = 1e-10 * std::max(1.0, std::abs(ay.value));
          CHECK(gap >= 0.5 * cls.mu * r2 - scale);
          if (cls.smooth()) CHECK(gap <= 0.5 * cls.L.value() * r2 + scale);
        }
      }
  }

  TEST_CASE("hypoconvex members have a monotone shifted subgradient") {
    dca::test::Rng rng(23);
    for (int rep = 0; rep < 200; ++rep) {
      const double mu = -uniform(rng, 0.1, 2);
      const FunctionSpec f = absq(uniform(rng, 0, 1), mu, uniform(rng, -1, 1));
      const double x = uniform(rng, -3, 3), y = uniform(rng, -3, 3);
      const double gx = evaluate(f, Vec{x}).subgradient[0] - mu * x;
      const double gy = evaluate(f, Vec{y}).subgradient[0] - mu * y;
      CHECK((gx - gy) * (x - y) >= -1e-12);
    }
  }

  TEST_CASE("subproblem examples") {
    CHECK(solve_dca_subproblem(quad({2}, {0}, 2, 3), Vec{1.0}).x[0] == 0.5);
    CHECK(solve_dca_subproblem(quad({1}, {0}, 1, 2), Vec{0.0}).x[0] == 0.0);
    const auto s = solve_dca_subproblem(absq(1, 1, 0), Vec{0.5});
    CHECK(s.x[0] == 0.0);
    CHECK(s.g1[0] == 0.5);
    CHECK(s.residual == 0.0);
    CHECK_THROWS_AS(solve_dca_subproblem(quad({0}, {0}, 0, 1), Vec{1.0}), Error);
  }

  TEST_CASE("subproblem solutions beat random candidates") {
    dca::test::Rng rng(24);
    for (int rep = 0; rep < 100; ++rep)
      for (const auto& spec : random_specs(rng)) {
        if (certified_class(spec).mu <= 0) continue;
        const Vec g2 = random_point(rng, spec.dimension());
        const auto sol = solve_dca_subproblem(spec, g2);
        const double best = value_at(spec, sol.x) - dot(g2, sol.x);
        for (int t = 0; t < 10; ++t) {
          const Vec w = random_point(rng, spec.dimension(), 5);
          CHECK(best <= value_at(spec, w) - dot(g2, w) + 1e-10 * std::max(1.0, std::abs(best)));
        }
      }
  }

  TEST_CASE("gradient-descent subproblem solver agrees and is flagged inexact") {
    const FunctionSpec f = quad({2, 3}, {0.5, -1}, 2, 3);
    const Vec g2{1, 2};
    const auto exact = solve_dca_subproblem(f, g2);
    const auto gd = solve_dca_subproblem_gd(f, g2, Vec{0, 0});
    CHECK_FALSE(gd.exact);
    CHECK(gd.x[0] == doctest::Approx(exact.x[0]).epsilon(1e-9));
    CHECK(gd.x[1] == doctest::Approx(exact.x[1]).epsilon(1e-9));
  }

  TEST_CASE("conjugate minimum in closed form") {
    const QuadraticFamily f{{2, 4}, {1, 0}};
    const Vec g{3, 2};
    // inf_w sum c w^2/2 + (b - g) w = -sum (b - g)^2 / (2c)
    CHECK(quadratic_conjugate_min(f, g) == doctest::Approx(-(4.0 / 4 + 4.0 / 8)).epsilon(1e-14));
  }

  TEST_CASE("certified classes") {
    CHECK(certified_class(quad({1, 2}, {0, 0}, 0, 5)) == CurvatureClass{1, 2});
    CHECK(certified_class(absq(1, -0.5, 0)) == CurvatureClass{-0.5, ExtReal::infinity()});
    CHECK(certified_class(absq(0, -0.5, 0)) == CurvatureClass{-0.5, -0.5});
    CHECK(declared_class_certified(quad({1, 2}, {0, 0}, 0.5, 3)));
    CHECK_FALSE(declared_class_certified(quad({1, 2}, {0, 0}, 1.5, 3)));
  }

  TEST_CASE("analytic infimum against a dense scan") {
    dca::test::Rng rng(25);
    for (int rep = 0; rep < 40; ++rep) {
      const double c1 = uniform(rng, 0.5, 3), c2 = uniform(rng, -1, c1 - 0.1);
      DcInstance inst{absq(uniform(rng, 0, 1), c1, uniform(rng, -1, 1)),
                      {MaxQuadraticsFamily{{{c2, uniform(rng, -1, 1), 0}, {c2, uniform(rng, -1, 1), 0.2}}},
                       {c2, ExtReal::infinity()}},
                      std::nullopt};
      const auto fstar = analytic_fstar(inst);
      REQUIRE(fstar);
      double scan = kInf;
      for (int i = 0; i <= 200000; ++i) {
        const Vec x{-20.0 + 40.0 * i / 200000};
        scan = std::min(scan, value_at(inst.f1, x) - value_at(inst.f2, x));
      }
      CHECK(*fstar <= scan + 1e-12);
      CHECK(*fstar == doctest::Approx(scan).epsilon(1e-6));
    }
    const DcInstance unbounded{quad({1}, {0}, 1, 2), quad({1}, {1}, 0.5, 2), std::nullopt};
    CHECK_FALSE(analytic_fstar(unbounded));
  }

  TEST_CASE("instance checks reject malformed data") {
    CHECK_THROWS_AS(check_instance({quad({1, 1}, {0}, 1, 2), quad({0}, {1}, 0, 1), std::nullopt}), Error);
    CHECK_THROWS_AS(check_instance({quad({1}, {0}, 1, 2), quad({2}, {1}, 0, 1), std::nullopt}), Error);
    CHECK_THROWS_AS(check_instance({absq(-1, 1, 0), quad({0}, {1}, 0, 1), std::nullopt}), Error);
    CHECK_NOTHROW(check_instance({quad({1}, {0}, 1, 2), quad({0}, {1}, 0, 1), std::nullopt}));
    const FstarChoice hint = *choose_fstar({quad({1}, {0}, 1, 2), quad({1}, {1}, 0.5, 2), -3.0});
    CHECK_FALSE(hint.verified);
    CHECK(hint.value == -3.0);
  }
}
