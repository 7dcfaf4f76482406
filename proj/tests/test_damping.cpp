#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sevo/damping.hpp"

#include <cmath>
#include <vector>

using namespace sevo;

namespace {

DampingSpec constant() { return DampingSpec::power_law(1.0, 0.0); }

}  // namespace

TEST_CASE("eval_b on power-law families") {
    CHECK(eval_b(constant(), 5.0) == doctest::Approx(1.0));
    CHECK(eval_b(DampingSpec::power_law(1.0, 0.5), 3.0) == doctest::Approx(2.0));
    CHECK(eval_b(DampingSpec::power_law(2.0, 1.0), 4.0) == doctest::Approx(10.0));
    CHECK_THROWS_AS(eval_b(constant(), -1.0), std::invalid_argument);
}

TEST_CASE("eval_B closed forms") {
    CHECK(eval_B(constant(), 0.0, 7.0) == doctest::Approx(7.0));
    CHECK(eval_B(DampingSpec::power_law(1.0, 0.5), 0.0, 3.0) == doctest::Approx(2.0));
    CHECK(eval_B(DampingSpec::power_law(1.0, 1.0), 0.0, std::exp(1.0) - 1.0) ==
          doctest::Approx(1.0));
    CHECK_THROWS_AS(eval_B(constant(), 3.0, 1.0), std::invalid_argument);
}

TEST_CASE("eval_Bhat closed forms") {
    CHECK(eval_Bhat(constant(), 0.0, 7.0) == doctest::Approx(7.0));
    CHECK(eval_Bhat(DampingSpec::power_law(1.0, 1.0), 0.0, 1.0) == doctest::Approx(1.5));
    CHECK(eval_Bhat(DampingSpec::power_law(1.0, -0.5), 0.0, 3.0) == doctest::Approx(2.0));
}

TEST_CASE("eval_lambda") {
    CHECK(eval_lambda(constant(), 2.0, 1.0, 0.0) == doctest::Approx(std::exp(1.0)));
    CHECK(eval_lambda(DampingSpec::power_law(1.0, 0.5), 9.0, 0.0, 0.25) == doctest::Approx(1.0));
    CHECK(eval_lambda(DampingSpec::power_law(1.0, 1.0), 1.0, 1.0, 0.5) ==
          doctest::Approx(std::exp(0.75)));
}

TEST_CASE("tabulated specs interpolate and refuse extrapolation") {
    std::vector<double> ts, bs;
    for (int i = 0; i <= 200; ++i) {
        const double t = 10.0 * i / 200;
        ts.push_back(t);
        bs.push_back(std::sqrt(1.0 + t));
    }
    const auto spec = DampingSpec::tabulated(ts, bs);
    CHECK(eval_b(spec, 3.0) == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(eval_b_prime(spec, 3.0) == doctest::Approx(0.25).epsilon(1e-3));
    CHECK(eval_B(spec, 0.0, 3.0) == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(eval_Bhat(spec, 0.0, 3.0) ==
          doctest::Approx(2.0 / 3.0 * (8.0 - 1.0)).epsilon(1e-6));
    CHECK_THROWS(eval_b(spec, 11.0));
}

TEST_CASE("validate_effective analytic verdicts") {
    SUBCASE("kappa = 1/3 passes everything") {
        const auto rep = validate_effective(DampingSpec::power_law(1.0, 1.0 / 3.0), 1e4);
        CHECK(rep.effective());
        CHECK(rep.b2.verdict == Verdict::Pass);
        CHECK(rep.b4.verdict == Verdict::Pass);
        CHECK(rep.b5.verdict == Verdict::Pass);
        CHECK(rep.b_l.verdict == Verdict::Pass);
    }
    SUBCASE("kappa = 2 fails B4") {
        const auto rep = validate_effective(DampingSpec::power_law(1.0, 2.0), 1e4);
        CHECK(rep.b4.verdict == Verdict::Fail);
        CHECK(rep.b2.verdict == Verdict::Pass);
        CHECK_FALSE(rep.effective());
    }
    SUBCASE("kappa = -1 fails B2 and B5") {
        const auto rep = validate_effective(DampingSpec::power_law(1.0, -1.0), 1e4);
        CHECK(rep.b2.verdict == Verdict::Fail);
        CHECK(rep.b5.verdict == Verdict::Fail);
        CHECK(rep.b4.verdict == Verdict::Pass);
        CHECK(rep.b6.verdict == Verdict::Pass);
    }
    SUBCASE("interior delta tightens B2") {
        // threshold -(sigma-2delta)/sigma = -1/2 for sigma=1, delta=1/4
        const auto bad = validate_effective(DampingSpec::power_law(1.0, -0.6, 1.0, 0.25), 1e4);
        CHECK(bad.b2.verdict == Verdict::Fail);
        const auto good = validate_effective(DampingSpec::power_law(1.0, -0.4, 1.0, 0.25), 1e4);
        CHECK(good.b2.verdict == Verdict::Pass);
    }
    SUBCASE("tabulated reports numeric-only") {
        std::vector<double> ts, bs;
        for (int i = 0; i <= 100; ++i) {
            ts.push_back(i * 1.0);
            bs.push_back(1.0 + 0.01 * i);
        }
        const auto rep = validate_effective(DampingSpec::tabulated(ts, bs), 100.0);
        CHECK(rep.b2.verdict == Verdict::NumericOnly);
        CHECK(rep.b4.verdict == Verdict::NumericOnly);
        CHECK(rep.b6.verdict == Verdict::NumericOnly);
    }
}

TEST_CASE("B equivalence ratios stay in a bounded band") {
    SUBCASE("constant damping gives ratios close to 1") {
        std::vector<std::pair<double, double>> pairs;
        for (double t = 1.0; t <= 100.0; t *= 2.0)
            for (double s : {0.0, t / 4.0, t / 2.0}) pairs.emplace_back(s, t);
        const auto st = check_B_equivalences(constant(), pairs);
        CHECK(st.r1_min == doctest::Approx(1.0));
        CHECK(st.r1_max == doctest::Approx(1.0));
        CHECK(st.r2_max / st.r2_min <= 2.0);
        CHECK(st.r3_max / st.r3_min <= 2.0);
    }
    SUBCASE("power law 1/2 stays within [1/20, 20]") {
        std::vector<std::pair<double, double>> pairs;
        for (double t = 1.0; t <= 1e3; t *= 1.5)
            for (double s : {0.0, t / 8.0, t / 2.0}) pairs.emplace_back(s, t);
        const auto st = check_B_equivalences(DampingSpec::power_law(1.0, 0.5), pairs);
        for (double r : {st.r1_min, st.r1_max, st.r2_min, st.r2_max, st.r3_min, st.r3_max}) {
            CHECK(r >= 1.0 / 20.0);
            CHECK(r <= 20.0);
        }
    }
    SUBCASE("pairs with s >= t are rejected") {
        std::vector<std::pair<double, double>> pairs = {{2.0, 2.0}};
        CHECK_THROWS_AS(check_B_equivalences(constant(), pairs), std::invalid_argument);
    }
}

TEST_CASE("monotone and additive primitives") {
    const auto spec = DampingSpec::power_law(1.0, 0.5);
    double prev_B = 0.0, prev_Bh = 0.0;
    for (double t = 1.0; t <= 1e6; t *= 4.0) {
        const double B = eval_B(spec, 0.0, t);
        const double Bh = eval_Bhat(spec, 0.0, t);
        CHECK(B > prev_B);
        CHECK(Bh > prev_Bh);
        prev_B = B;
        prev_Bh = Bh;
    }
    for (double t : {1.0, 10.0, 500.0}) {
        const double m = 0.4 * t;
        CHECK(eval_B(spec, 0.0, t) ==
              doctest::Approx(eval_B(spec, 0.0, m) + eval_B(spec, m, t)).epsilon(1e-12));
    }
}

TEST_CASE("tabulated quadrature matches power-law closed form to 1e-8") {
    std::vector<double> ts, bs;
    for (int i = 0; i <= 2000; ++i) {
        const double t = 20.0 * i / 2000;
        ts.push_back(t);
        bs.push_back(std::pow(1.0 + t, 0.5));
    }
    const auto tab = DampingSpec::tabulated(ts, bs);
    const auto pl = DampingSpec::power_law(1.0, 0.5);
    for (double t : {1.0, 7.0, 18.0}) {
        CHECK(eval_B(tab, 0.0, t) == doctest::Approx(eval_B(pl, 0.0, t)).epsilon(1e-7));
        CHECK(eval_Bhat(tab, 0.0, t) == doctest::Approx(eval_Bhat(pl, 0.0, t)).epsilon(1e-7));
    }
}

TEST_CASE("solve_g constant damping") {
    const auto g = solve_g(constant(), 100.0);
    CHECK(g.B0 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(g.A0 == doctest::Approx(0.0).epsilon(1e-9));
    for (std::size_t i = 0; i < g.ts.size(); i += 97)
        CHECK(g.gs[i] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(g.band_ok);
    CHECK(g.B1 == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(g.B2 == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(g.gprime_ok);
    CHECK(g.max_residual <= 1e-6);
}

TEST_CASE("solve_g linear growth: B0 matches the erfc closed form") {
    // B0 = int_0^inf exp(-t - t^2/2) dt = e^{1/2} sqrt(pi/2) erfc(1/sqrt 2)
    const double closed =
        std::exp(0.5) * std::sqrt(std::acos(-1.0) / 2.0) * std::erfc(1.0 / std::sqrt(2.0));
    const auto spec = DampingSpec::power_law(1.0, 1.0);
    const auto g = solve_g(spec, 1000.0);
    CHECK(g.B0 == doctest::Approx(closed).epsilon(1e-9));
    CHECK(g.gs.front() == doctest::Approx(g.B0).epsilon(1e-6));

    // b(t) g(t) -> 1 on the long horizon
    CHECK(eval_b(spec, 1000.0) * g.gs.back() == doctest::Approx(1.0).epsilon(1e-2));
    CHECK(g.band_ok);
    CHECK(g.B1 > 0.0);
    CHECK(g.max_residual <= 1e-6);
    CHECK(g.gprime_ok);
    CHECK(std::abs(eval_b(spec, g.ts.back()) * g.gs.back() - 1.0) <= g.gprime_bound + 0.05);
}

TEST_CASE("solve_g rejects horizons where Bhat cannot reach the tail") {
    std::vector<double> ts = {0.0, 1.0, 2.0};
    std::vector<double> bs = {1.0, 1.0, 1.0};
    CHECK_THROWS(solve_g(DampingSpec::tabulated(ts, bs), 2.0));
}
