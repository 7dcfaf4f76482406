#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mode_oracle.hpp"
#include "sevo/linear_modes.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace sevo;

namespace {

DampingSpec wave_friction() { return DampingSpec::power_law(1.0, 0.0, 1.0, 0.0); }

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
    return v;
}

}  // namespace

TEST_CASE("free mode is linear in time") {
    const auto grid = linspace(0.0, 10.0, 21);
    const auto traj = integrate_mode(wave_friction(), 1.0, 0.0, 0.0, {0.7, 0.3}, grid, 1e-10);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(traj.u[i] == doctest::Approx(0.7 + 0.3 * grid[i]).epsilon(1e-10));
        CHECK(traj.u_t[i] == doctest::Approx(0.3).epsilon(1e-10));
    }
}

TEST_CASE("constant-coefficient trajectories match the closed form to 1e-6") {
    const auto grid = linspace(0.0, 50.0, 101);
    for (double xi : {0.1, 0.5, 1.0, 4.0}) {
        const auto traj =
            integrate_mode(wave_friction(), 1.0, 0.0, xi, {1.0, 0.25}, grid, 1e-9);
        const double a = xi * xi, c = 1.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const auto [u, v] = sevo::testing::const_coeff_mode(a, c, 1.0, 0.25, grid[i]);
            CHECK(std::abs(traj.u[i] - u) <= 1e-6);
            CHECK(std::abs(traj.u_t[i] - v) <= 1e-6);
        }
    }
}

TEST_CASE("double root on Gamma") {
    const auto grid = linspace(0.0, 30.0, 61);
    const double xi = 0.5;
    const auto traj = integrate_mode(wave_friction(), 1.0, 0.0, xi, {1.0, 0.0}, grid, 1e-10);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        // u = e^{-t/2}(u0 + (u1 + u0/2) t)
        const double t = grid[i];
        const double u = std::exp(-0.5 * t) * (1.0 + 0.5 * t);
        CHECK(std::abs(traj.u[i] - u) <= 1e-6);
    }
}

TEST_CASE("kernels") {
    SUBCASE("K1 initial data and free-mode value") {
        const auto grid = linspace(2.0, 12.0, 21);
        const auto k1 = kernel_K1(wave_friction(), 1.0, 0.0, 0.0, 2.0, grid, 1e-10);
        CHECK(k1.u[0] == 0.0);
        CHECK(k1.u_t[0] == 1.0);
        for (std::size_t i = 0; i < grid.size(); ++i)
            CHECK(k1.u[i] == doctest::Approx(grid[i] - 2.0).epsilon(1e-10));
    }
    SUBCASE("K1 damped oscillation at xi = 1") {
        const double s = 1.5;
        const auto grid = linspace(s, s + 20.0, 41);
        const auto k1 = kernel_K1(wave_friction(), 1.0, 0.0, 1.0, s, grid, 1e-9);
        const double w = std::sqrt(3.0) / 2.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double dt = grid[i] - s;
            const double expect = std::exp(-dt / 2.0) * std::sin(w * dt) / w;
            CHECK(std::abs(k1.u[i] - expect) <= 1e-6);
        }
    }
    SUBCASE("K0 initial data and free mode") {
        const auto grid = linspace(0.0, 10.0, 21);
        const auto k0 = kernel_K0(wave_friction(), 1.0, 0.0, 0.0, grid, 1e-10);
        CHECK(k0.u[0] == 1.0);
        CHECK(k0.u_t[0] == 0.0);
        for (double v : k0.u) CHECK(v == doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("superposition against independent kernel runs") {
        const auto grid = linspace(0.0, 25.0, 26);
        std::mt19937 rng(7u);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        const auto spec = DampingSpec::power_law(1.0, 0.5, 1.0, 0.25);
        for (double xi : {0.2, 0.9, 2.5}) {
            const double a0 = u(rng), a1 = u(rng);
            const auto full =
                integrate_mode(spec, 1.0, 0.25, xi, {a0, a1}, grid, 1e-10);
            const auto k0 = kernel_K0(spec, 1.0, 0.25, xi, grid, 1e-10);
            const auto k1 = kernel_K1(spec, 1.0, 0.25, xi, 0.0, grid, 1e-10);
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const double combined = a0 * k0.u[i] + a1 * k1.u[i];
                CHECK(std::abs(full.u[i] - combined) <=
                      1e-8 * (std::abs(a0) + std::abs(a1)));
            }
        }
    }
}

TEST_CASE("per-mode energy is non-increasing") {
    const auto grid = linspace(0.0, 40.0, 81);
    for (double xi : {0.05, 0.5, 2.0}) {
        const auto traj =
            integrate_mode(DampingSpec::power_law(1.0, 0.5), 1.0, 0.0, xi, {1.0, 0.5}, grid,
                           1e-10);
        double prev = traj.energy(0, 1.0);
        bool strictly_decreased = false;
        for (std::size_t i = 1; i < grid.size(); ++i) {
            const double e = traj.energy(i, 1.0);
            CHECK(e <= prev * (1.0 + 1e-9));
            if (e < prev) strictly_decreased = true;
            prev = e;
        }
        CHECK(strictly_decreased);
    }
}

TEST_CASE("tolerance is validated and stiffness reported with the frequency") {
    const auto grid = linspace(0.0, 1.0, 3);
    CHECK_THROWS_AS(
        integrate_mode(wave_friction(), 1.0, 0.0, 1.0, {1.0, 0.0}, grid, 1e-3),
        std::invalid_argument);
    try {
        integrate_mode(wave_friction(), 1.0, 0.0, 1e13, {1.0, 0.0}, grid, 1e-8);
        CHECK(false);
    } catch (const ModeStiffnessError& e) {
        CHECK(e.xi == doctest::Approx(1e13));
    }
}

TEST_CASE("reconstructed norms at t = 0 match the analytic profile norm") {
    const auto u0 = SpectralProfile::gaussian_hat(1.0, 1.0, 1);
    const auto u1 = SpectralProfile::power_cutoff(0.0, 0.0, 1.0, 1);
    RadialQuadrature quad;
    quad.xi_min = 1e-7;
    quad.xi_max = 16.0;
    quad.nodes = 128;
    const auto grid = linspace(0.0, 1.0, 21);
    const auto res = reconstruct_norms(wave_friction(), 1.0, 0.0, u0, u1, {0.0, 1.0}, grid,
                                       quad, 1e-9);
    // ||u(0)||_{L2}^2 = 2 int e^{-rho^2} = sqrt(pi)
    const double l2 = std::sqrt(std::sqrt(std::numbers::pi));
    CHECK(res.u_norms[0][0] == doctest::Approx(l2).epsilon(1e-6));
    // Hdot^1 norm: 2 int rho^2 e^{-rho^2} = sqrt(pi)/2
    const double h1 = std::sqrt(std::sqrt(std::numbers::pi) / 2.0);
    CHECK(res.u_norms[1][0] == doctest::Approx(h1).epsilon(1e-6));
    CHECK(res.ut_l2[0] == doctest::Approx(0.0));
    CHECK(res.tail_bound[0] <= 0.01 * res.u_norms[0][0]);
}

TEST_CASE("zero data reconstructs zero norms") {
    const auto z = SpectralProfile::power_cutoff(0.0, 0.0, 1.0, 1);
    const auto grid = linspace(0.0, 5.0, 21);
    const auto res = reconstruct_norms(wave_friction(), 1.0, 0.0, z, z, {0.0}, grid, {}, 1e-9);
    for (double v : res.u_norms[0]) CHECK(v == 0.0);
    for (double v : res.ut_l2) CHECK(v == 0.0);
}

TEST_CASE("halving the tolerance moves norms less than the tail bar") {
    const auto u0 = SpectralProfile::gaussian_hat(1.0, 1.0, 1);
    const auto u1 = SpectralProfile::power_cutoff(0.0, 0.0, 1.0, 1);
    const auto grid = linspace(0.0, 20.0, 21);
    RadialQuadrature quad;
    const auto a = reconstruct_norms(wave_friction(), 1.0, 0.0, u0, u1, {0.0}, grid, quad, 1e-8);
    const auto b = reconstruct_norms(wave_friction(), 1.0, 0.0, u0, u1, {0.0}, grid, quad, 5e-9);
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(std::abs(a.u_norms[0][i] - b.u_norms[0][i]) <=
              std::max(a.tail_bound[i], 1e-12));
}

TEST_CASE("threaded fan-out reproduces the sequential reduction exactly") {
    const auto u0 = SpectralProfile::gaussian_hat(1.0, 1.0, 1);
    const auto u1 = SpectralProfile::gaussian_hat(0.5, 2.0, 1);
    const auto grid = linspace(0.0, 10.0, 11);
    const auto seq = reconstruct_norms(wave_friction(), 1.0, 0.0, u0, u1, {0.0}, grid, {}, 1e-9,
                                       1);
    const auto par = reconstruct_norms(wave_friction(), 1.0, 0.0, u0, u1, {0.0}, grid, {}, 1e-9,
                                       4);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(seq.u_norms[0][i] == par.u_norms[0][i]);
        CHECK(seq.ut_l2[i] == par.ut_l2[i]);
    }
}
