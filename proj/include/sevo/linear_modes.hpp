#pragma once

#include "sevo/damping.hpp"
#include "sevo/decay_character.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace sevo {

struct ModeStiffnessError : std::runtime_error {
    double xi;
    explicit ModeStiffnessError(double xi_)
        : std::runtime_error("mode integration stalled (stiffness) at xi = " +
                             std::to_string(xi_)),
          xi(xi_) {}
};

/// Time samples of one Fourier mode (u_hat, d_t u_hat). Real pairs
/// suffice for real radial data.
struct ModeTrajectory {
    double xi_mag = 0.0;
    std::vector<double> times;
    std::vector<double> u;
    std::vector<double> u_t;
    double rel_tol = 0.0;

    double energy(std::size_t i, double sigma) const {
        return 0.5 * u_t[i] * u_t[i] +
               0.5 * std::pow(xi_mag, 2.0 * sigma) * u[i] * u[i];
    }
};

struct LinearRunResult {
    std::vector<double> times;
    std::vector<double> alphas;
    std::vector<std::vector<double>> u_norms;  // [alpha index][time index]
    std::vector<double> ut_l2;
    std::vector<double> tail_bound;  // estimated truncation error bar on ||u||_{H^alpha_max}
    std::vector<double> B;           // B(0, t)
    std::vector<double> Bhat;        // Bhat(0, t)
    std::vector<double> b;           // b(t)
};

struct RadialQuadrature {
    double xi_min = 1e-4;
    double xi_max = 32.0;
    int nodes = 96;
};

/// Integrates u'' + |xi|^{2 sigma} u + b(t) |xi|^{2 delta} u' = 0 along
/// t_grid with an adaptive Dormand-Prince pair; the step is additionally
/// capped at (2 pi / |xi|^sigma)/20 to resolve oscillation. Modes whose
/// energy falls below (1e-14)^2 of the initial energy are frozen at 0.
ModeTrajectory integrate_mode(const DampingSpec& spec, double sigma, double delta, double xi_mag,
                              std::pair<double, double> init, const std::vector<double>& t_grid,
                              double rel_tol = 1e-9);

/// K1 kernel: integrate_mode from s with data (0, 1).
ModeTrajectory kernel_K1(const DampingSpec& spec, double sigma, double delta, double xi_mag,
                         double s, const std::vector<double>& t_grid, double rel_tol = 1e-9);

/// K0 kernel: integrate_mode from 0 with data (1, 0).
ModeTrajectory kernel_K0(const DampingSpec& spec, double sigma, double delta, double xi_mag,
                         const std::vector<double>& t_grid, double rel_tol = 1e-9);

/// Reconstructs Sobolev norms of the linear solution by composite
/// trapezoid quadrature in log-frequency over per-node mode runs.
LinearRunResult reconstruct_norms(const DampingSpec& spec, double sigma, double delta,
                                  const SpectralProfile& u0, const SpectralProfile& u1,
                                  const std::vector<double>& alphas,
                                  const std::vector<double>& t_grid,
                                  const RadialQuadrature& quad = {}, double rel_tol = 1e-9,
                                  int threads = 1);

}  // namespace sevo
