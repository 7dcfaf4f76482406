#include "sevo/linear_modes.hpp"

#include "sevo/quadrature.hpp"
#include "sevo/rk45.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

namespace sevo {

namespace {

constexpr double kFreezeRatio = 1e-14;  // energy amplitude ratio below which a mode is zeroed

void check_grid(const std::vector<double>& t_grid, double start) {
    if (t_grid.size() < 2) throw std::invalid_argument("integrate_mode: need >= 2 grid times");
    if (t_grid.front() != start)
        throw std::invalid_argument("integrate_mode: grid must start at the initial time");
    for (std::size_t i = 1; i < t_grid.size(); ++i)
        if (!(t_grid[i] > t_grid[i - 1]))
            throw std::invalid_argument("integrate_mode: grid must be strictly increasing");
}

}  // namespace

ModeTrajectory integrate_mode(const DampingSpec& spec, double sigma, double delta, double xi_mag,
                              std::pair<double, double> init, const std::vector<double>& t_grid,
                              double rel_tol) {
    if (!(rel_tol >= 1e-12 && rel_tol <= 1e-4))
        throw std::invalid_argument("integrate_mode: rel_tol must lie in [1e-12, 1e-4]");
    if (!(xi_mag >= 0.0)) throw std::invalid_argument("integrate_mode: xi must be >= 0");
    check_grid(t_grid, t_grid.front());

    ModeTrajectory traj;
    traj.xi_mag = xi_mag;
    traj.rel_tol = rel_tol;
    traj.times = t_grid;
    traj.u.assign(t_grid.size(), 0.0);
    traj.u_t.assign(t_grid.size(), 0.0);
    traj.u[0] = init.first;
    traj.u_t[0] = init.second;

    const double xs = std::pow(xi_mag, 2.0 * sigma);
    const double xd = std::pow(xi_mag, 2.0 * delta);
    const double e0 = 0.5 * init.second * init.second + 0.5 * xs * init.first * init.first;
    if (e0 == 0.0) return traj;  // zero data stays zero

    const double osc_cap = xi_mag > 0.0
                               ? (2.0 * std::numbers::pi / std::pow(xi_mag, sigma)) / 20.0
                               : std::numeric_limits<double>::infinity();

    Rk45Options opts;
    opts.rel_tol = rel_tol;
    opts.abs_tol = rel_tol * 1e-4 * std::sqrt(2.0 * e0);
    Rk45 stepper(opts);

    auto rhs = [&](double t, const std::vector<double>& y, std::vector<double>& dy) {
        dy[0] = y[1];
        dy[1] = -xs * y[0] - eval_b(spec, t) * xd * y[1];
    };
    auto cap = [&](double) { return osc_cap; };

    std::vector<double> y = {init.first, init.second};
    const double freeze_level = kFreezeRatio * kFreezeRatio * e0;
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        try {
            stepper.integrate(rhs, cap, t_grid[i - 1], t_grid[i], y);
        } catch (const Rk45StepUnderflow&) {
            throw ModeStiffnessError(xi_mag);
        }
        traj.u[i] = y[0];
        traj.u_t[i] = y[1];
        const double e = 0.5 * y[1] * y[1] + 0.5 * xs * y[0] * y[0];
        if (e <= freeze_level) {
            // remaining samples stay 0; contributions are below
            // double-precision noise
            break;
        }
    }
    return traj;
}

ModeTrajectory kernel_K1(const DampingSpec& spec, double sigma, double delta, double xi_mag,
                         double s, const std::vector<double>& t_grid, double rel_tol) {
    check_grid(t_grid, s);
    return integrate_mode(spec, sigma, delta, xi_mag, {0.0, 1.0}, t_grid, rel_tol);
}

ModeTrajectory kernel_K0(const DampingSpec& spec, double sigma, double delta, double xi_mag,
                         const std::vector<double>& t_grid, double rel_tol) {
    check_grid(t_grid, 0.0);
    return integrate_mode(spec, sigma, delta, xi_mag, {1.0, 0.0}, t_grid, rel_tol);
}

namespace {

// static bound on the spectrum above xi_max: |u_hat(t)|^2 <= |u0|^2 + |u1|^2 / rho^{2 sigma}
// from energy monotonicity
double tail_integral(const SpectralProfile& u0, const SpectralProfile& u1, double alpha,
                     double sigma, double xi_max) {
    const double cn = sphere_area(u0.n);
    auto integrand = [&](double rho) {
        const double a0 = u0(rho);
        const double a1 = u1(rho);
        return std::pow(rho, u0.n - 1 + 2.0 * alpha) *
               (a0 * a0 + a1 * a1 / std::pow(rho, 2.0 * sigma));
    };
    // profiles here decay fast or vanish; truncate where negligible
    double hi = xi_max;
    double probe = xi_max;
    for (int i = 0; i < 60; ++i) {
        probe *= 1.5;
        if (integrand(probe) > 1e-300) hi = probe;
    }
    if (hi == xi_max) return 0.0;
    return cn * integrate(integrand, xi_max, hi, 1e-8).value;
}

}  // namespace

LinearRunResult reconstruct_norms(const DampingSpec& spec, double sigma, double delta,
                                  const SpectralProfile& u0, const SpectralProfile& u1,
                                  const std::vector<double>& alphas,
                                  const std::vector<double>& t_grid,
                                  const RadialQuadrature& quad, double rel_tol, int threads) {
    if (u0.n != u1.n)
        throw std::invalid_argument("reconstruct_norms: profiles must share the dimension");
    if (quad.nodes < 64)
        throw std::invalid_argument("reconstruct_norms: need >= 64 radial nodes");
    if (alphas.empty()) throw std::invalid_argument("reconstruct_norms: need >= 1 alpha");
    check_grid(t_grid, t_grid.front());

    const int n = u0.n;
    const double cn = sphere_area(n);
    const int J = quad.nodes;
    const double dlog = std::log(quad.xi_max / quad.xi_min) / (J - 1);

    std::vector<double> rho(J), w(J);
    for (int j = 0; j < J; ++j) {
        rho[j] = quad.xi_min * std::exp(dlog * j);
        w[j] = dlog * rho[j] * (j == 0 || j == J - 1 ? 0.5 : 1.0);
    }

    std::vector<ModeTrajectory> modes(J);
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto work = [&](int lo, int hi) {
        for (int j = lo; j < hi; ++j) {
            try {
                modes[j] = integrate_mode(spec, sigma, delta, rho[j], {u0(rho[j]), u1(rho[j])},
                                          t_grid, rel_tol);
            } catch (...) {
                std::lock_guard<std::mutex> lk(failure_mu);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    if (threads <= 1) {
        work(0, J);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (J + threads - 1) / threads;
        for (int k = 0; k < threads; ++k)
            pool.emplace_back(work, k * chunk, std::min(J, (k + 1) * chunk));
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    LinearRunResult out;
    out.times = t_grid;
    out.alphas = alphas;
    out.u_norms.assign(alphas.size(), std::vector<double>(t_grid.size(), 0.0));
    out.ut_l2.assign(t_grid.size(), 0.0);
    out.tail_bound.assign(t_grid.size(), 0.0);
    out.B.resize(t_grid.size());
    out.Bhat.resize(t_grid.size());
    out.b.resize(t_grid.size());

    const double alpha_max = *std::max_element(alphas.begin(), alphas.end());
    const double tail0_sq = tail_integral(u0, u1, alpha_max, sigma, quad.xi_max);

    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        for (std::size_t a = 0; a < alphas.size(); ++a) {
            double acc = 0.0;
            for (int j = 0; j < J; ++j)
                acc += w[j] * std::pow(rho[j], n - 1 + 2.0 * alphas[a]) * modes[j].u[i] *
                       modes[j].u[i];
            out.u_norms[a][i] = std::sqrt(cn * acc);
        }
        double acc_t = 0.0;
        for (int j = 0; j < J; ++j)
            acc_t += w[j] * std::pow(rho[j], n - 1) * modes[j].u_t[i] * modes[j].u_t[i];
        out.ut_l2[i] = std::sqrt(cn * acc_t);

        out.B[i] = eval_B(spec, 0.0, t_grid[i]);
        out.Bhat[i] = eval_Bhat(spec, 0.0, t_grid[i]);
        out.b[i] = eval_b(spec, t_grid[i]);
        // high-band decay factor (1-2 beta) xi_max^{2 delta} Bhat with beta = 0.1
        const double decay =
            std::exp(-0.8 * std::pow(quad.xi_max, 2.0 * delta) * out.Bhat[i]);
        out.tail_bound[i] = std::sqrt(tail0_sq * std::min(1.0, decay));
    }

    // the frequency window must cover the data spectrum
    double norm0 = 0.0;
    for (std::size_t a = 0; a < alphas.size(); ++a) norm0 = std::max(norm0, out.u_norms[a][0]);
    norm0 = std::max(norm0, out.ut_l2[0]);
    if (out.tail_bound[0] > 0.01 * norm0 && norm0 > 0.0)
        throw std::runtime_error(
            "reconstruct_norms: spectral tail beyond xi_max exceeds 1% of the initial norm");
    return out;
}

}  // namespace sevo
