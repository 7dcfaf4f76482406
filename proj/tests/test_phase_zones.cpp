#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sevo/phase_zones.hpp"

#include <cmath>
#include <limits>

using namespace sevo;

namespace {

DampingSpec wave_friction() { return DampingSpec::power_law(1.0, 0.0, 1.0, 0.0); }

ZoneParams params(double N = 2.0, double eps = 0.1, double d0 = 2.0) {
    ZoneParams p;
    p.N = N;
    p.eps = eps;
    p.d0 = d0;
    return p;
}

}  // namespace

TEST_CASE("weight") {
    CHECK(weight(wave_friction(), 0.0, 1.0) == doctest::Approx(std::sqrt(3.0) / 2.0));
    // on Gamma: |xi|^{sigma-2delta} = b/2
    CHECK(weight(wave_friction(), 5.0, 0.5) == doctest::Approx(0.0));
    const auto frac = DampingSpec::power_law(1.0, 0.0, 1.0, 0.25);
    CHECK(weight(frac, 3.0, 0.0) == doctest::Approx(0.0));
}

TEST_CASE("mass") {
    CHECK(mass(wave_friction(), 2.0, 1.0) == doctest::Approx(0.75));
    const auto frac = DampingSpec::power_law(1.0, 0.0, 1.0, 0.25);
    CHECK(mass(frac, 1.0, 0.0) == doctest::Approx(0.0));
    CHECK(mass(DampingSpec::power_law(1.0, 1.0), 0.0, 1.0) == doctest::Approx(0.25));
}

TEST_CASE("classification") {
    SUBCASE("high frequency at small time is hyperbolic") {
        CHECK(classify(wave_friction(), params(1.0, 0.1, 1.0), 0.0, 1.0) == ZoneLabel::Hyp);
    }
    SUBCASE("delta = 0 folds the dissipative test into the elliptic zone") {
        CHECK(classify(wave_friction(), params(1.0, 0.1, 1.0), 10.0, 0.01) == ZoneLabel::Ell);
    }
    SUBCASE("points on Gamma are reduced") {
        CHECK(classify(wave_friction(), params(), 5.0, 0.5) == ZoneLabel::Red);
    }
    SUBCASE("small frequency at small time with positive delta is dissipative") {
        const auto frac = DampingSpec::power_law(1.0, 0.0, 1.0, 0.25);
        CHECK(classify(frac, params(), 0.0, 1e-3) == ZoneLabel::Diss);
    }
    SUBCASE("every sampled point gets exactly one zone") {
        const auto frac = DampingSpec::power_law(1.0, 0.5, 1.0, 0.25);
        const auto pr = params();
        int hist[5] = {0, 0, 0, 0, 0};
        for (double t = 0.0; t <= 60.0; t += 3.7)
            for (double xi = 1e-4; xi <= 8.0; xi *= 1.9) {
                const ZoneLabel z = classify(frac, pr, t, xi);
                ++hist[static_cast<int>(z)];
            }
        int nonempty = 0;
        for (int h : hist) nonempty += h > 0;
        CHECK(nonempty >= 3);
    }
}

TEST_CASE("separating curves") {
    SUBCASE("t_ell by inversion of an increasing power law") {
        const auto spec = DampingSpec::power_law(1.0, 1.0, 1.0, 0.0);
        const auto t = curve_t_ell(spec, params(2.0, 1e-12, 2.0), 1.0);
        REQUIRE(t.has_value());
        CHECK(*t == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("decreasing b with target above b(0) has no crossing") {
        const auto spec = DampingSpec::power_law(1.0, -0.5, 1.0, 0.0);
        CHECK_FALSE(curve_t_ell(spec, params(), 1.0).has_value());
    }
    SUBCASE("eps near 1 pushes t_ell out") {
        const auto spec = DampingSpec::power_law(1.0, 1.0, 1.0, 0.0);
        const auto t1 = curve_t_ell(spec, params(2.0, 0.5, 2.0), 1.0);
        const auto t2 = curve_t_ell(spec, params(2.0, 0.999, 2.0), 1.0);
        REQUIRE(t1.has_value());
        REQUIRE(t2.has_value());
        CHECK(*t2 > 10.0 * *t1);
    }
    SUBCASE("tabulated monotone b is bisected") {
        std::vector<double> ts, bs;
        for (int i = 0; i <= 400; ++i) {
            ts.push_back(i * 0.05);
            bs.push_back(1.0 + ts.back());
        }
        const auto spec = DampingSpec::tabulated(ts, bs, 1.0, 0.0);
        const auto t = curve_t_ell(spec, params(2.0, 1e-12, 2.0), 1.0, 20.0);
        REQUIRE(t.has_value());
        CHECK(*t == doctest::Approx(1.0).epsilon(1e-6));
    }
    SUBCASE("t_diss linear solve") {
        const auto spec = DampingSpec::power_law(1.0, 0.0, 1.0, 0.5);
        // |xi|^{2 delta} = 1/2: (1+t)/2 = 1 at t = 1
        const auto t = curve_t_diss(spec, params(2.0, 0.1, 1.0), 0.5);
        REQUIRE(t.has_value());
        CHECK(*t == doctest::Approx(1.0).epsilon(1e-9));
        const auto t2 = curve_t_diss(spec, params(2.0, 0.1, 1.0), 0.25);
        REQUIRE(t2.has_value());
        CHECK(*t2 == doctest::Approx(3.0).epsilon(1e-9));
    }
    SUBCASE("t_diss is none when already above d0") {
        const auto spec = DampingSpec::power_law(1.0, 0.0, 1.0, 0.5);
        CHECK_FALSE(curve_t_diss(spec, params(2.0, 0.1, 0.5), 1.0).has_value());
    }
    SUBCASE("t_diss grows with d0") {
        const auto spec = DampingSpec::power_law(1.0, 0.5, 1.0, 0.25);
        const auto a = curve_t_diss(spec, params(2.0, 0.1, 2.0), 0.2);
        const auto b = curve_t_diss(spec, params(2.0, 0.1, 20.0), 0.2);
        REQUIRE(a.has_value());
        REQUIRE(b.has_value());
        CHECK(*b > *a);
    }
    SUBCASE("delta = 0 has no dissipative boundary") {
        CHECK_THROWS_AS(curve_t_diss(wave_friction(), params(), 0.5), std::domain_error);
    }
    SUBCASE("t_diss <= t_ell for small frequencies under increasing b") {
        const auto spec = DampingSpec::power_law(1.0, 0.5, 1.0, 0.25);
        for (double xi : {0.01, 0.05, 0.1}) {
            const auto td = curve_t_diss(spec, params(), xi);
            const auto te = curve_t_ell(spec, params(), xi);
            if (td && te) CHECK(*td <= *te);
        }
    }
}

TEST_CASE("frequency thresholds") {
    SUBCASE("omega with constant damping") {
        CHECK(omega_threshold(wave_friction(), params(2.0, 0.0, 2.0), 1.0, 3.0) ==
              doctest::Approx(0.5));
    }
    SUBCASE("lambda at delta = 1/4") {
        const auto spec = DampingSpec::power_law(1.0, 0.0, 1.0, 0.25);
        CHECK(lambda_threshold(spec, params(2.0, 0.1, 1.0), 3.0) ==
              doctest::Approx(1.0 / 16.0));
    }
    SUBCASE("s = t uses the common value") {
        const auto spec = DampingSpec::power_law(1.0, 0.5, 1.0, 0.0);
        CHECK(omega_threshold(spec, params(2.0, 0.0, 2.0), 4.0, 4.0) ==
              doctest::Approx(eval_b(spec, 4.0) / 2.0));
    }
    SUBCASE("undefined combinations throw") {
        const auto half = DampingSpec::power_law(1.0, 0.0, 1.0, 0.5);
        CHECK_THROWS_AS(omega_threshold(half, params(), 0.0, 1.0), std::domain_error);
        CHECK_THROWS_AS(lambda_threshold(wave_friction(), params(), 1.0), std::domain_error);
    }
}

TEST_CASE("bound envelopes") {
    const auto spec = wave_friction();
    const auto pr = params();
    SUBCASE("t = s high frequency K1 is |xi|^{-sigma}") {
        CHECK(bound_envelope(EnvelopeKind::K1, spec, pr, 2.0, 2.0, 1.0) ==
              doctest::Approx(1.0));
        CHECK(bound_envelope(EnvelopeKind::K1, spec, pr, 2.0, 2.0, 2.0) ==
              doctest::Approx(0.5));
        CHECK(bound_envelope(EnvelopeKind::DtK1, spec, pr, 2.0, 2.0, 1.0) ==
              doctest::Approx(1.0));
    }
    SUBCASE("mid-frequency K0 reproduces exp(-|xi|^{2 sigma} B)") {
        // b = 1, B(0,4) = 4, xi = 1/4 -> exp(-1/4)
        CHECK(bound_envelope(EnvelopeKind::K0, spec, pr, 4.0, 0.0, 0.25) ==
              doctest::Approx(std::exp(-0.25)));
    }
    SUBCASE("K0 kinds demand s = 0") {
        CHECK_THROWS_AS(bound_envelope(EnvelopeKind::K0, spec, pr, 4.0, 1.0, 0.25),
                        std::invalid_argument);
    }
    SUBCASE("regime-checked overload rejects outsiders") {
        CHECK_THROWS_AS(bound_envelope(EnvelopeKind::K1, EnvelopeRegime::High, spec, pr, 4.0,
                                       0.0, 0.01),
                        std::domain_error);
    }
    SUBCASE("exponential regimes are non-increasing in t") {
        for (const auto& s : {DampingSpec::power_law(1.0, 0.0, 1.0, 0.25),
                              DampingSpec::power_law(1.0, 0.5, 1.0, 0.25)}) {
            for (double xi : {0.02, 0.2}) {
                double prev = std::numeric_limits<double>::infinity();
                for (double t = 1.0; t <= 300.0; t *= 1.6) {
                    const auto reg = envelope_regime(s, pr, t, 0.5, xi);
                    if (reg == EnvelopeRegime::High) continue;
                    const double v = bound_envelope(EnvelopeKind::K1, s, pr, t, 0.5, xi);
                    CHECK(v <= prev * (1.0 + 1e-12));
                    prev = v;
                }
            }
        }
    }
    SUBCASE("delta = sigma/2 splits at M") {
        const auto half = DampingSpec::power_law(1.0, 0.0, 1.0, 0.5);
        auto pr2 = params();
        pr2.M = 1.0;
        CHECK(envelope_regime(half, pr2, 1.0, 0.0, 2.0) == EnvelopeRegime::High);
        CHECK(envelope_regime(half, pr2, 1.0, 0.0, 0.5) == EnvelopeRegime::Mid);
        const double v = bound_envelope(EnvelopeKind::K0, half, pr2, 2.0, 0.0, 0.5);
        CHECK(v == doctest::Approx(2.0 * std::exp(-0.5 * 2.0)));
    }
}

TEST_CASE("zone labels change across t_ell") {
    const auto spec = DampingSpec::power_law(1.0, 1.0, 1.0, 0.25);
    const auto pr = params();
    const double xi = 0.3;
    const auto te = curve_t_ell(spec, pr, xi);
    REQUIRE(te.has_value());
    const ZoneLabel before = classify(spec, pr, *te * 0.8, xi);
    const ZoneLabel after = classify(spec, pr, *te * 1.25, xi);
    CHECK(before != after);
}
