#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sevo {

struct Rk45StepUnderflow : std::runtime_error {
    double t;
    explicit Rk45StepUnderflow(double t_)
        : std::runtime_error("rk45: step size underflow at t=" + std::to_string(t_)), t(t_) {}
};

struct Rk45Options {
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    double max_dt = std::numeric_limits<double>::infinity();
    double min_dt = 1e-13;
    std::size_t max_steps = 50'000'000;
};

/// Embedded Dormand-Prince 5(4) pair with FSAL, operating on flat
/// double vectors. Stage storage is reused across steps.
class Rk45 {
  public:
    explicit Rk45(Rk45Options opts = {}) : opts_(opts) {}

    Rk45Options& options() { return opts_; }

    /// Advances y in place from t0 to t1 (t0 < t1). `rhs(t, y, dydt)`
    /// fills the derivative. `cap(t)` gives an additional step-size
    /// ceiling at time t; pass a constant lambda when none is needed.
    template <class Rhs, class Cap>
    void integrate(Rhs&& rhs, Cap&& cap, double t0, double t1, std::vector<double>& y) {
        const std::size_t m = y.size();
        alloc(m);
        double t = t0;
        double dt = initial_dt(t0, t1, cap(t0));
        rhs(t, y, k_[0]);
        std::size_t steps = 0;
        while (t < t1) {
            if (++steps > opts_.max_steps)
                throw std::runtime_error("rk45: step budget exhausted");
            dt = std::min({dt, opts_.max_dt, cap(t), t1 - t});
            if (dt < opts_.min_dt) throw Rk45StepUnderflow(t);

            for (std::size_t s = 1; s < 7; ++s) {
                for (std::size_t i = 0; i < m; ++i) {
                    double acc = 0.0;
                    for (std::size_t j = 0; j < s; ++j) acc += A[s][j] * k_[j][i];
                    ytmp_[i] = y[i] + dt * acc;
                }
                rhs(t + C[s] * dt, ytmp_, k_[s]);
            }
            // stage 7 already holds f(t+dt, y5) because A[6] equals the
            // fifth-order weights (FSAL)
            double err = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                double e = 0.0;
                for (std::size_t j = 0; j < 7; ++j) e += E[j] * k_[j][i];
                e *= dt;
                const double sc =
                    opts_.abs_tol + opts_.rel_tol * std::max(std::abs(y[i]), std::abs(ytmp_[i]));
                const double q = e / sc;
                err += q * q;
            }
            err = std::sqrt(err / static_cast<double>(m));

            if (err <= 1.0 || dt <= opts_.min_dt * 2.0) {
                t += dt;
                y.swap(ytmp_);
                k_[0].swap(k_[6]);
            }
            const double fac = (err > 0.0) ? 0.9 * std::pow(err, -0.2) : 5.0;
            dt *= std::clamp(fac, 0.2, 5.0);
            if (!std::isfinite(dt)) throw std::runtime_error("rk45: non-finite step size");
        }
    }

  private:
    void alloc(std::size_t m) {
        for (auto& k : k_) k.assign(m, 0.0);
        ytmp_.assign(m, 0.0);
    }

    double initial_dt(double t0, double t1, double cap0) const {
        double dt = std::min({(t1 - t0) / 100.0, opts_.max_dt, cap0});
        return std::max(dt, opts_.min_dt);
    }

    static constexpr double C[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
    static constexpr double A[7][6] = {
        {},
        {1.0 / 5},
        {3.0 / 40, 9.0 / 40},
        {44.0 / 45, -56.0 / 15, 32.0 / 9},
        {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
        {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
        {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
    // y5 - y4 weights
    static constexpr double E[7] = {71.0 / 57600,      0.0,         -71.0 / 16695, 71.0 / 1920,
                                    -17253.0 / 339200, 22.0 / 525, -1.0 / 40};

    Rk45Options opts_;
    std::vector<double> k_[7];
    std::vector<double> ytmp_;
};

}  // namespace sevo
