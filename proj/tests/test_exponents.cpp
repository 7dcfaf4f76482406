#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sevo/exponents.hpp"
#include "sevo/semilinear.hpp"

#include <random>

using namespace sevo;

namespace {

ExponentInputs make(double sigma, double delta, double gamma, int n, double r0, double r1) {
    ExponentInputs in;
    in.sigma = sigma;
    in.delta = delta;
    in.gamma = gamma;
    in.n = n;
    in.r0 = r0;
    in.r1 = r1;
    return in;
}

}  // namespace

TEST_CASE("omega values and hypothesis checks") {
    CHECK(omega(make(1, 0, 0, 2, 0, 0)) == 1.0);
    // min{0, 2-2}=0 but the branch requires min <= -2 delta = -2: rejected
    CHECK_THROWS_AS(omega(make(2, 1, 0, 4, 0, 2)), std::domain_error);
    CHECK(omega(make(2, 1, 0, 6, -2, 0)) == 1.0);
    // delta = 0 branch needs min <= 0
    CHECK_THROWS_AS(omega(make(1, 0, 0, 2, 0.5, 0.5)), std::domain_error);
    // b' < 0 branch checks the deeper minimum against -n/2
    CHECK_THROWS_AS(omega(make(2, 1, 0, 6, -2.5, -2.5), BPrimeSign::Negative),
                    std::domain_error);
    CHECK(omega(make(2, 1, 0, 12, -4, 1), BPrimeSign::Negative) == doctest::Approx(1.2));
}

TEST_CASE("p_star values") {
    CHECK(p_star(make(1, 0, 0, 2, 0, 0)) == 2.0);
    CHECK(p_star(make(1, 0, 0, 1, 0, 0)) == 3.0);
    // gamma adds to the denominator, so p* falls as gamma grows
    CHECK(p_star(make(1, 0, 0.5, 1, 0, 0)) < p_star(make(1, 0, 0, 1, 0, 0)));
    CHECK(p_star(make(1, 0, 0.5, 1, 0, 0)) == 2.0);
}

TEST_CASE("admissible p ranges") {
    SUBCASE("n = 1 keeps the window open above p*") {
        const auto r = admissible_p_range(make(1, 0, 0, 1, 0, 0));
        REQUIRE(r.has_value());
        CHECK(r->lo == 3.0);
        CHECK(r->lo_open);
        CHECK(r->hi_unbounded);
    }
    SUBCASE("n = 3 caps at n/(n-2sigma)") {
        const auto r = admissible_p_range(make(1, 0, 0, 3, 0, 0));
        REQUIRE(r.has_value());
        CHECK(r->lo == 2.0);  // 2/omega exceeds p* = 5/3
        CHECK_FALSE(r->lo_open);
        CHECK_FALSE(r->hi_unbounded);
        CHECK(r->hi == 3.0);
    }
    SUBCASE("dimension beyond the displayed restriction yields none") {
        // omega = 1, (4 sigma)/(2-omega) = 4: n = 5 too large
        CHECK_FALSE(admissible_p_range(make(1, 0, 0, 5, 0, 0)).has_value());
    }
}

TEST_CASE("gn_theta endpoints and the section-5 specialization") {
    CHECK(gn_theta(0.0, 1.0, 2.0, 2.0, 2.0, 1) == 0.0);
    // theta_1(2p) = (n(p-1) + 2 gamma p) / (2 sigma p) at sigma=1, gamma=0, n=1, p=4
    const double p = 4.0;
    const double direct = (1.0 * (p - 1.0) + 0.0) / (2.0 * 1.0 * p);
    CHECK(gn_theta(0.0, 1.0, 2.0 * p, 2.0, 2.0, 1) == doctest::Approx(direct));
    CHECK(direct == doctest::Approx(3.0 / 8.0));
    CHECK_THROWS(gn_theta(0.9, 1.0, 1.5, 16.0, 2.0, 1));  // theta outside [kappa/r, 1]
}

TEST_CASE("negative Sobolev lower bound") {
    CHECK(r_star_lower_bound_from_negative_sobolev(0.5, 2) == -0.5);
    CHECK(r_star_lower_bound_from_negative_sobolev(1.0, 4) == -1.0);
    CHECK_THROWS(r_star_lower_bound_from_negative_sobolev(1.5, 2));
    CHECK_THROWS(r_star_lower_bound_from_negative_sobolev(0.0, 2));
}

TEST_CASE("Fujita consistency: p* equals the critical exponent at delta = gamma = 0") {
    for (double sigma : {1.0, 1.5, 2.0, 3.0})
        for (int n = 1; n <= 2 * static_cast<int>(sigma); ++n)
            CHECK(p_star(make(sigma, 0, 0, n, 0, 0)) ==
                  doctest::Approx(critical_p(sigma, 0.0, n)).epsilon(1e-15));
}

TEST_CASE("omega stays in [1, 2) over random admissible inputs") {
    std::mt19937 rng(20240811u);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int tested = 0;
    while (tested < 1000) {
        const double sigma = 1.0 + 2.0 * u(rng);
        const double delta = u(rng) < 0.4 ? 0.0 : u(rng) * sigma / 2.0;
        const int n = 1 + static_cast<int>(u(rng) * 7.0);
        // admissible min lies in (-n/2, -2 delta]
        const double hi = -2.0 * delta;
        const double lo = -n / 2.0;
        if (!(hi > lo)) continue;
        const double m = lo + (hi - lo) * (0.999 * u(rng) + 0.001);
        const double r0 = m;
        const double r1 = m + 2.0 * delta + u(rng);  // keeps the min at r0
        const double w = omega(make(sigma, delta, 0.0, n, r0, r1));
        CHECK(w >= 1.0);
        CHECK(w < 2.0);
        ++tested;
    }
}
