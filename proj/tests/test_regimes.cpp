#include <doctest.h>

#include <cmath>
#include <set>

#include "dca/errors.hpp"
#include "dca/regimes.hpp"
#include "support.hpp"

using namespace dca;
using dca::test::rel_close;

namespace {

int mirror(int i) { return i % 2 == 1 ? i + 1 : i - 1; }

ErrorKind kind_of(const DcParams& p) {
  try {
    classify(p);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("classify did not throw");
  return ErrorKind::bad_input;
}

}  // namespace

TEST_SUITE("regimes") {
  TEST_CASE("worked classification examples") {
    auto c = classify(make_params(0.5, 2, 0, 1));
    CHECK(c.index == 1);
    CHECK(c.sigma == doctest::Approx(1.0 / 3).epsilon(1e-14));
    CHECK(c.sigma_plus == doctest::Approx(4.0 / 3).epsilon(1e-14));
    CHECK(c.p == doctest::Approx(5.0 / 3).epsilon(1e-14));
    CHECK(c.alpha == doctest::Approx(1.0 / 3).epsilon(1e-14));

    CHECK(classify(make_params(0, 1, 0, 1)).p == doctest::Approx(2.0).epsilon(1e-15));

    c = classify(make_params(2, 4, -1, 3));
    CHECK(c.index == 3);
    CHECK(c.sigma == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(c.sigma_plus == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(c.alpha == doctest::Approx(0.5).epsilon(1e-14));

    c = classify(make_params(2, 10, -1, 1.5));
    CHECK(c.index == 5);
    CHECK(c.sigma == 0.0);
    CHECK(c.sigma_plus == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(c.alpha == doctest::Approx(1.0).epsilon(1e-14));
  }

  TEST_CASE("one-nonsmooth table examples") {
    auto c = classify_nonsmooth({{1, ExtReal::infinity()}, {0, 2}});
    CHECK(c.label == "p1,7");
    CHECK(c.sigma == 0.0);
    CHECK(c.sigma_plus == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(c.alpha == doctest::Approx(0.5).epsilon(1e-14));

    c = classify_nonsmooth({{2, 3}, {-1, ExtReal::infinity()}});
    CHECK(c.index == 3);
    CHECK(c.sigma == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(c.sigma_plus == 0.0);

    c = classify_nonsmooth({{2, ExtReal::infinity()}, {-1, 1.5}});
    CHECK(c.index == 5);
    CHECK(c.sigma_plus == doctest::Approx(1.0).epsilon(1e-14));
  }

  TEST_CASE("nonsmooth example with mu1 = L1 is rejected, its row value is still computable") {
    const DcParams bad{{2, 2}, {-1, ExtReal::infinity()}};
    CHECK_THROWS_AS(classify_nonsmooth(bad), Error);
    try {
      classify_nonsmooth(bad);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::invalid_params);
    }
    CHECK(table2_row(3, bad).sigma == doctest::Approx(0.25).epsilon(1e-14));
  }

  TEST_CASE("error kinds") {
    CHECK(kind_of(make_params(1, 1, 0, 1)) == ErrorKind::invalid_params);
    CHECK(kind_of(make_params(1, 2, -1, 3)) == ErrorKind::precondition_violated);
    CHECK(kind_of({{1, ExtReal::infinity()}, {1, ExtReal::infinity()}}) == ErrorKind::both_nonsmooth);
    CHECK_THROWS_AS(classify_nonsmooth(make_params(1, 2, 1, 2)), Error);
  }

  TEST_CASE("thresholds and asymptotic constants") {
    CHECK(thresholds(make_params(2, 4, -1, 3)).S1 == doctest::Approx(-1.0 / 6).epsilon(1e-14));
    CHECK(thresholds(make_params(2, 4, -2, 3)).S1 == doctest::Approx(1.0 / 3).epsilon(1e-14));
    CHECK(thresholds({{1, ExtReal::infinity()}, {1, 3}}).S2 == doctest::Approx(2.0).epsilon(1e-15));

    const auto a = asymptotic_constants(make_params(2, 10, -1, 1.5));
    REQUIRE(a.p5_inf);
    CHECK(*a.p5_inf == doctest::Approx(1.75).epsilon(1e-14));
    CHECK_FALSE(a.hypotheses_hold);

    const auto s = asymptotic_constants(make_params(1.5, 4, 1.5, 4));
    REQUIRE(s.p5_inf);
    REQUIRE(s.p6_inf);
    CHECK(*s.p5_inf == doctest::Approx(*s.p6_inf).epsilon(1e-14));

    const auto z = asymptotic_constants(make_params(2, 10, -1, 1));
    CHECK_FALSE(z.p5_inf);
    CHECK_THROWS_AS(z.p5(), Error);
  }

  TEST_CASE("classification matches the literal table on random interior points") {
    dca::test::Rng rng(11);
    int counts[9] = {};
    int gap_points = 0;
    for (int n = 0; n < 20000; ++n) {
      const DcParams p = dca::test::random_smooth_params(rng);
      const double L1 = p.L1(), L2 = p.L2(), m1 = p.mu1(), m2 = p.mu2();
      std::vector<int> lit;
      for (int i = 1; i <= 8; ++i)
        if (dca::test::literal_table1(i, L1, L2, m1, m2).domain) lit.push_back(i);
      const auto c = classify(p);
      if (lit.empty()) {
        // Only the mu_i >= L_j, 0 < S_i <= T_i pocket is left open by the table;
        // it is assigned to p5/p6.
        ++gap_points;
        CHECK((c.index == 5 || c.index == 6));
        const bool odd = c.index == 5;
        CHECK((odd ? m1 >= L2 : m2 >= L1));
        continue;
      }
      const auto row = dca::test::literal_table1(lit.front(), L1, L2, m1, m2);
      ++counts[lit.front()];
      INFO("params ", m1, " ", L1, " ", m2, " ", L2);
      CHECK(rel_close(c.sigma, row.sigma, 1e-9));
      CHECK(rel_close(c.sigma_plus, row.sigma_plus, 1e-9));
      if (lit.size() == 1) {
        CHECK(c.index == lit.front());
        CHECK(rel_close(c.alpha, row.alpha, 1e-9));
      }
    }
    for (int i = 1; i <= 8; ++i) CHECK(counts[i] > 0);
    MESSAGE("points outside every literal domain: ", gap_points);
  }

  TEST_CASE("each row evaluator equals the literal formula") {
    dca::test::Rng rng(12);
    for (int n = 0; n < 2000; ++n) {
      const DcParams p = dca::test::random_smooth_params(rng);
      if (p.mu1() == 0 || p.mu2() == 0) continue;
      for (int i = 1; i <= 8; ++i) {
        const auto lit = dca::test::literal_table1(i, p.L1(), p.L2(), p.mu1(), p.mu2());
        if (!lit.domain) continue;
        const auto c = table1_row(i, p);
        CHECK(rel_close(c.sigma, lit.sigma, 1e-12));
        CHECK(rel_close(c.sigma_plus, lit.sigma_plus, 1e-12));
        CHECK(rel_close(c.alpha, lit.alpha, 1e-12));
      }
    }
  }

  TEST_CASE("swapping the terms mirrors the regime and the coefficients") {
    dca::test::Rng rng(13);
    for (int n = 0; n < 5000; ++n) {
      const DcParams p = dca::test::random_smooth_params(rng);
      const auto a = classify(p);
      const auto b = classify(p.swapped());
      if (a.matched.size() > 1 || b.matched.size() > 1) continue;
      CHECK(b.index == mirror(a.index));
      CHECK(rel_close(a.sigma, b.sigma_plus, 1e-10));
      CHECK(rel_close(a.sigma_plus, b.sigma, 1e-10));
    }
  }

  TEST_CASE("coefficients are nonnegative") {
    dca::test::Rng rng(14);
    for (int n = 0; n < 5000; ++n) {
      const auto c = classify(dca::test::random_smooth_params(rng));
      CHECK(c.sigma >= -1e-12);
      CHECK(c.sigma_plus >= -1e-12);
      CHECK(c.alpha >= -1e-12);
    }
  }

  TEST_CASE("large L converges to the one-nonsmooth table") {
    const DcParams pts[] = {
        {{1, ExtReal::infinity()}, {0, 2}},      // p1,7 from p1 (mu1 < L2)
        {{3, ExtReal::infinity()}, {0.5, 2}},    // p1,7 from p7
        {{2, ExtReal::infinity()}, {-1, 1.5}},   // p5
        {{2, ExtReal::infinity()}, {-1, 3}},     // p1,7 with mu2 < 0
        {{2, 3}, {-1, ExtReal::infinity()}},     // p3
        {{0.5, 3}, {1, ExtReal::infinity()}},    // p2,8
    };
    for (const auto& p : pts) {
      const auto target = classify_nonsmooth(p);
      double prev = kInf;
      for (int k = 3; k <= 8; ++k) {
        DcParams q = p;
        if (!q.f1.smooth()) q.f1.L = ExtReal(std::pow(10.0, k));
        else q.f2.L = ExtReal(std::pow(10.0, k));
        const auto c = classify(q);
        const double err = std::abs(c.sigma - target.sigma) + std::abs(c.sigma_plus - target.sigma_plus);
        CHECK(err <= prev);
        prev = err;
      }
      CHECK(prev < 1e-6);
    }
  }

  TEST_CASE("coefficients are continuous across the p1/p3 and p3/p5 boundaries") {
    dca::test::Rng rng(15);
    for (int n = 0; n < 200; ++n) {
      const double L2 = dca::test::log_uniform(rng, 0.5, 5);
      const double m1 = dca::test::uniform(rng, 0.05, 0.95) * L2;
      const double L1 = dca::test::uniform(rng, 1.05, 5.0) * L2;
      // p3/p5: S1 = 0.
      const double m2_zero = -m1 * L2 / (m1 + L2);
      const DcParams at_zero = make_params(m1, L1, m2_zero, L2);
      const auto r3 = table1_row(3, at_zero), r5 = table1_row(5, at_zero);
      CHECK(rel_close(r3.sigma, r5.sigma, 1e-9));
      CHECK(rel_close(r3.sigma_plus, r5.sigma_plus, 1e-9));

      // p1/p3: S1 = L1^{-1} (2 + L2/mu2), found by bisection in mu2.
      auto h = [&](double m2) { return 1 / m1 + 1 / m2 + 1 / L2 - (2 + L2 / m2) / L1; };
      double lo = m2_zero, hi = -1e-12 * m1;
      if (h(lo) * h(hi) > 0) continue;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (h(mid) * h(lo) > 0 ? lo : hi) = mid;
      }
      const DcParams at_b = make_params(m1, L1, 0.5 * (lo + hi), L2);
      const auto r1 = table1_row(1, at_b), q3 = table1_row(3, at_b);
      CHECK(rel_close(r1.sigma, q3.sigma, 1e-8));
      CHECK(rel_close(r1.sigma_plus, q3.sigma_plus, 1e-8));
    }
  }

  TEST_CASE("grid partition: several matches only on boundaries") {
    const std::pair<double, double> Ls[] = {{2, 1}, {1, 2}, {3, 3}, {10, 1.5}, {0.5, 4}};
    for (const auto& [L1, L2] : Ls) {
      const GridSpec g{-std::max(L1, L2), std::max(L1, L2), 81};
      for (int i = 0; i < g.steps; ++i)
        for (int j = 0; j < g.steps; ++j) {
          const DcParams p = make_params(g.at(i), L1, g.at(j), L2);
          const auto v = validate(p);
          if (!v.valid || !v.decrease_precondition) continue;
          const auto c = classify(p);
          if (c.matched.size() > 1) CHECK(dca::test::on_regime_boundary(p));
        }
    }
  }

  TEST_CASE("regime map: node examples and parallel/serial equality") {
    const GridSpec g{-1, 2, 61};
    const auto par = regime_map(ExtReal(2), ExtReal(1), g, g);
    const auto ser = regime_map_serial(ExtReal(2), ExtReal(1), g, g);
    REQUIRE(par.size() == ser.size());
    bool same = true;
    for (std::size_t i = 0; i < par.size(); ++i)
      same = same && par[i].regime == ser[i].regime && par[i].p == ser[i].p && par[i].mu1 == ser[i].mu1;
    CHECK(same);

    std::set<int> seen;
    for (const auto& r : par) seen.insert(r.regime);
    CHECK(*seen.begin() >= 0);
    CHECK(*seen.rbegin() <= 8);

    const auto one = regime_map_serial(ExtReal(2), ExtReal(1), {1.5, 1.5, 1}, {0.25, 0.25, 1});
    CHECK(one.front().regime == 7);
    const auto zero = regime_map_serial(ExtReal(2), ExtReal(1), {0.5, 0.5, 1}, {-0.5, -0.5, 1});
    CHECK(zero.front().regime == 0);
  }

  TEST_CASE("grid spec parsing") {
    const auto g = GridSpec::parse("-1:2:300");
    CHECK(g.lo == -1);
    CHECK(g.hi == 2);
    CHECK(g.steps == 300);
    CHECK(g.at(299) == 2);
    CHECK_THROWS_AS(GridSpec::parse("1:2"), Error);
    CHECK_THROWS_AS(GridSpec::parse("a:2:3"), Error);
    CHECK_THROWS_AS(GridSpec::parse("0:1:0"), Error);
  }
}
