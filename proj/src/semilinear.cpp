#include "sevo/semilinear.hpp"

#include "sevo/rk45.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace sevo {

namespace {

std::mutex& fftw_planner_mutex() {
    static std::mutex mu;
    return mu;
}

bool power_of_two(int m) { return m > 0 && (m & (m - 1)) == 0; }

}  // namespace

struct SpectralGrid::Impl {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    double* real_buf = nullptr;
    fftw_complex* spec_buf = nullptr;
};

SpectralGrid::SpectralGrid(GridSpec spec) : spec_(spec), impl_(std::make_unique<Impl>()) {
    if (spec_.n != 1 && spec_.n != 2)
        throw std::invalid_argument("SpectralGrid: n must be 1 or 2");
    if (!power_of_two(spec_.M) || spec_.M < 64)
        throw std::invalid_argument("SpectralGrid: M must be a power of two >= 64");
    if (!(spec_.L > 0.0)) throw std::invalid_argument("SpectralGrid: L must be > 0");

    const int M = spec_.M;
    real_size_ = spec_.n == 1 ? M : static_cast<std::size_t>(M) * M;
    spec_size_ = spec_.n == 1 ? M / 2 + 1 : static_cast<std::size_t>(M) * (M / 2 + 1);
    const double dx = 2.0 * spec_.L / M;
    cell_volume_ = spec_.n == 1 ? dx : dx * dx;

    const double k0 = std::numbers::pi / spec_.L;
    const int keep = M / 3;  // 2/3-rule cutoff per axis
    k_mag_.resize(spec_size_);
    sym_weight_.resize(spec_size_);
    dealias_keep_.resize(spec_size_);
    if (spec_.n == 1) {
        for (int j = 0; j <= M / 2; ++j) {
            k_mag_[j] = k0 * j;
            sym_weight_[j] = (j == 0 || j == M / 2) ? 1.0 : 2.0;
            dealias_keep_[j] = j <= keep;
        }
    } else {
        for (int i = 0; i < M; ++i) {
            const int ki = i <= M / 2 ? i : i - M;
            for (int j = 0; j <= M / 2; ++j) {
                const std::size_t idx = static_cast<std::size_t>(i) * (M / 2 + 1) + j;
                k_mag_[idx] = k0 * std::hypot(static_cast<double>(ki), static_cast<double>(j));
                sym_weight_[idx] = (j == 0 || j == M / 2) ? 1.0 : 2.0;
                dealias_keep_[idx] = std::abs(ki) <= keep && j <= keep;
            }
        }
    }

    std::lock_guard<std::mutex> lk(fftw_planner_mutex());
    impl_->real_buf = fftw_alloc_real(real_size_);
    impl_->spec_buf = fftw_alloc_complex(spec_size_);
    if (spec_.n == 1) {
        impl_->fwd = fftw_plan_dft_r2c_1d(M, impl_->real_buf, impl_->spec_buf, FFTW_ESTIMATE);
        impl_->bwd = fftw_plan_dft_c2r_1d(M, impl_->spec_buf, impl_->real_buf, FFTW_ESTIMATE);
    } else {
        impl_->fwd = fftw_plan_dft_r2c_2d(M, M, impl_->real_buf, impl_->spec_buf, FFTW_ESTIMATE);
        impl_->bwd = fftw_plan_dft_c2r_2d(M, M, impl_->spec_buf, impl_->real_buf, FFTW_ESTIMATE);
    }
    if (!impl_->fwd || !impl_->bwd) throw std::runtime_error("SpectralGrid: FFTW plan failed");
}

SpectralGrid::~SpectralGrid() {
    std::lock_guard<std::mutex> lk(fftw_planner_mutex());
    if (impl_->fwd) fftw_destroy_plan(impl_->fwd);
    if (impl_->bwd) fftw_destroy_plan(impl_->bwd);
    if (impl_->real_buf) fftw_free(impl_->real_buf);
    if (impl_->spec_buf) fftw_free(impl_->spec_buf);
}

void SpectralGrid::forward(const double* in, std::complex<double>* out) const {
    std::memcpy(impl_->real_buf, in, real_size_ * sizeof(double));
    fftw_execute(impl_->fwd);
    std::memcpy(reinterpret_cast<double*>(out), impl_->spec_buf,
                spec_size_ * sizeof(fftw_complex));
}

void SpectralGrid::backward(const std::complex<double>* in, double* out) const {
    std::memcpy(impl_->spec_buf, reinterpret_cast<const double*>(in),
                spec_size_ * sizeof(fftw_complex));
    fftw_execute(impl_->bwd);
    const double scale = 1.0 / static_cast<double>(real_size_);
    for (std::size_t i = 0; i < real_size_; ++i) out[i] = impl_->real_buf[i] * scale;
}

std::vector<double> apply_fractional(const std::vector<double>& field, double order,
                                     const SpectralGrid& grid) {
    if (!(order >= 0.0)) throw std::invalid_argument("apply_fractional: order must be >= 0");
    if (field.size() != grid.real_size())
        throw std::invalid_argument("apply_fractional: field size mismatch");
    std::vector<std::complex<double>> hat(grid.spectral_size());
    grid.forward(field.data(), hat.data());
    const auto& k = grid.k_mag();
    for (std::size_t i = 0; i < hat.size(); ++i) {
        if (k[i] == 0.0) {
            if (order > 0.0) hat[i] = 0.0;
        } else {
            hat[i] *= std::pow(k[i], order);
        }
    }
    std::vector<double> out(grid.real_size());
    grid.backward(hat.data(), out.data());
    return out;
}

namespace {

void pointwise_abs_power(std::vector<double>& v, double p) {
    for (double& x : v) x = x == 0.0 ? 0.0 : std::pow(std::abs(x), p);
}

struct SpectralWorkspace {
    std::vector<std::complex<double>> w_hat;
    std::vector<double> w_real;
    std::vector<std::complex<double>> nl_hat;

    explicit SpectralWorkspace(const SpectralGrid& grid)
        : w_hat(grid.spectral_size()), w_real(grid.real_size()), nl_hat(grid.spectral_size()) {}
};

// nonlinear term ||D|^gamma u|^p in spectral space, 2/3-rule de-aliased
void nonlinear_term(const SpectralGrid& grid, const std::complex<double>* u_hat, double gamma,
                    double p, bool dealias, SpectralWorkspace& ws) {
    const auto& k = grid.k_mag();
    const auto& keep = grid.dealias_keep();
    for (std::size_t i = 0; i < ws.w_hat.size(); ++i) {
        std::complex<double> c = u_hat[i];
        if (dealias && !keep[i]) c = 0.0;
        if (gamma > 0.0) c *= k[i] == 0.0 ? 0.0 : std::pow(k[i], gamma);
        ws.w_hat[i] = c;
    }
    grid.backward(ws.w_hat.data(), ws.w_real.data());
    pointwise_abs_power(ws.w_real, p);
    grid.forward(ws.w_real.data(), ws.nl_hat.data());
    if (dealias)
        for (std::size_t i = 0; i < ws.nl_hat.size(); ++i)
            if (!keep[i]) ws.nl_hat[i] = 0.0;
}

double spectral_l2(const SpectralGrid& grid, const std::complex<double>* hat, double order) {
    const auto& k = grid.k_mag();
    const auto& w = grid.sym_weight();
    double acc = 0.0;
    for (std::size_t i = 0; i < grid.spectral_size(); ++i) {
        double m = std::norm(hat[i]);
        if (order != 0.0) m *= k[i] == 0.0 ? 0.0 : std::pow(k[i], 2.0 * order);
        acc += w[i] * m;
    }
    // Parseval: ||u||^2 = dx^n / M^n * sum |u_hat|^2
    return std::sqrt(acc * grid.cell_volume() / static_cast<double>(grid.real_size()));
}

// energy fraction carried by the top quarter of the band
double spectral_tail_fraction(const SpectralGrid& grid, const std::complex<double>* hat) {
    const auto& k = grid.k_mag();
    const auto& w = grid.sym_weight();
    double total = 0.0, tail = 0.0;
    double k_max = 0.0;
    for (std::size_t i = 0; i < grid.spectral_size(); ++i) k_max = std::max(k_max, k[i]);
    for (std::size_t i = 0; i < grid.spectral_size(); ++i) {
        const double m = w[i] * std::norm(hat[i]);
        total += m;
        if (k[i] >= 0.75 * k_max) tail += m;
    }
    return total > 0.0 ? tail / total : 0.0;
}

}  // namespace

std::pair<std::vector<double>, std::vector<double>> rhs(const FieldState& state,
                                                        const DampingSpec& spec, double sigma,
                                                        double delta, double gamma, double p,
                                                        const SpectralGrid& grid,
                                                        double nonlin_coeff) {
    if (!(p > 1.0)) throw std::invalid_argument("rhs: p must exceed 1");
    std::vector<double> du = state.u_t;

    std::vector<double> lap_u = apply_fractional(state.u, 2.0 * sigma, grid);
    std::vector<double> lap_ut = apply_fractional(state.u_t, 2.0 * delta, grid);
    const double b = eval_b(spec, state.time);

    std::vector<double> du_t(grid.real_size());
    if (nonlin_coeff != 0.0) {
        std::vector<double> w =
            gamma > 0.0 ? apply_fractional(state.u, gamma, grid) : state.u;
        pointwise_abs_power(w, p);
        for (std::size_t i = 0; i < du_t.size(); ++i)
            du_t[i] = -lap_u[i] - b * lap_ut[i] + nonlin_coeff * w[i];
    } else {
        for (std::size_t i = 0; i < du_t.size(); ++i) du_t[i] = -lap_u[i] - b * lap_ut[i];
    }
    return {std::move(du), std::move(du_t)};
}

double critical_p(double sigma, double delta, int n) {
    if (!(n > 2.0 * delta))
        throw std::domain_error("critical_p: requires n > 2 delta");
    return 1.0 + 2.0 * sigma / (n - 2.0 * delta);
}

BlowupDataCheck check_blowup_data_condition(const DampingSpec& spec, double delta,
                                            const FieldState& data, const SpectralGrid& grid) {
    if (data.u.size() != grid.real_size() || data.u_t.size() != grid.real_size())
        throw std::invalid_argument("check_blowup_data_condition: field size mismatch");
    BlowupDataCheck out;
    double su0 = 0.0, su1 = 0.0;
    for (double v : data.u) su0 += v;
    for (double v : data.u_t) su1 += v;
    su0 *= grid.cell_volume();
    su1 *= grid.cell_volume();

    const double bp0 = eval_b_prime(spec, 0.0);
    const bool decreasing =
        spec.family == DampingFamily::PowerLaw ? spec.kappa < 0.0 : bp0 < 0.0;

    if (decreasing) {
        out.branch = BlowupDataCheck::Branch::Decreasing;
        // fractional terms integrate to zero; delta = 0 keeps u0 itself
        out.value = su1 + (delta == 0.0 ? eval_b(spec, 0.0) * su0 : 0.0);
    } else {
        out.branch = BlowupDataCheck::Branch::NonDecreasing;
        out.B0 = b0_constant(spec);
        out.A0 = eval_b(spec, 0.0) * out.B0 - 1.0;
        out.value = delta == 0.0 ? su0 + out.B0 * su1 : out.B0 * su1 - out.A0 * su0;
    }
    out.satisfied = out.value > 0.0;
    return out;
}

std::vector<double> gaussian_field(const GridSpec& grid, double amplitude, double width,
                                   const std::vector<double>& center) {
    if (!(width > 0.0)) throw std::invalid_argument("gaussian_field: width must be > 0");
    const int M = grid.M;
    const double dx = 2.0 * grid.L / M;
    std::vector<double> c(grid.n, 0.0);
    for (std::size_t i = 0; i < center.size() && i < c.size(); ++i) c[i] = center[i];
    if (grid.n == 1) {
        std::vector<double> f(M);
        for (int i = 0; i < M; ++i) {
            const double x = -grid.L + i * dx - c[0];
            f[i] = amplitude * std::exp(-0.5 * x * x / (width * width));
        }
        return f;
    }
    std::vector<double> f(static_cast<std::size_t>(M) * M);
    for (int i = 0; i < M; ++i) {
        const double x = -grid.L + i * dx - c[0];
        for (int j = 0; j < M; ++j) {
            const double y = -grid.L + j * dx - c[1];
            f[static_cast<std::size_t>(i) * M + j] =
                amplitude * std::exp(-0.5 * (x * x + y * y) / (width * width));
        }
    }
    return f;
}

RunOutcome solve_semilinear(const SemilinearConfig& cfg, const FieldState& initial) {
    if (!(cfg.p > 1.0)) throw std::invalid_argument("solve_semilinear: p must exceed 1");
    if (!(cfg.horizon > 0.0) || !(cfg.output_interval > 0.0))
        throw std::invalid_argument("solve_semilinear: bad horizon or output interval");
    SpectralGrid grid(cfg.grid);
    if (initial.u.size() != grid.real_size() || initial.u_t.size() != grid.real_size())
        throw std::invalid_argument("solve_semilinear: field size mismatch");

    const std::size_t nc = grid.spectral_size();
    std::vector<std::complex<double>> u_hat(nc), v_hat(nc);
    grid.forward(initial.u.data(), u_hat.data());
    grid.forward(initial.u_t.data(), v_hat.data());

    RunOutcome out;
    out.initial_l2 = spectral_l2(grid, u_hat.data(), 0.0);
    if (out.initial_l2 == 0.0 && spectral_l2(grid, v_hat.data(), 0.0) == 0.0) {
        out.status = RunOutcome::Status::Decayed;
        out.note = "zero data";
        for (double t = 0.0; t <= cfg.horizon; t += cfg.output_interval) {
            out.times.push_back(t);
            out.l2.push_back(0.0);
            out.hsigma.push_back(0.0);
            out.ut_l2.push_back(0.0);
        }
        return out;
    }

    // boundary values of the data must be negligible against the peak
    {
        double peak = 0.0, edge = 0.0;
        const int M = cfg.grid.M;
        for (std::size_t i = 0; i < initial.u.size(); ++i)
            peak = std::max(peak, std::abs(initial.u[i]) + std::abs(initial.u_t[i]));
        auto probe = [&](std::size_t idx) {
            edge = std::max(edge, std::abs(initial.u[idx]) + std::abs(initial.u_t[idx]));
        };
        if (cfg.grid.n == 1) {
            probe(0);
            probe(initial.u.size() - 1);
        } else {
            for (int i = 0; i < M; ++i) {
                probe(static_cast<std::size_t>(i) * M);
                probe(static_cast<std::size_t>(i));
            }
        }
        if (peak > 0.0 && edge > 1e-12 * peak)
            throw std::invalid_argument(
                "solve_semilinear: initial data does not vanish at the box boundary");
    }
    if (spectral_tail_fraction(grid, u_hat.data()) > 1e-10 ||
        spectral_tail_fraction(grid, v_hat.data()) > 1e-10)
        throw std::invalid_argument("solve_semilinear: initial data unresolved on the grid");

    // flat state: [Re u_hat, Im u_hat, Re v_hat, Im v_hat]
    std::vector<double> y(4 * nc);
    auto pack = [&](const std::vector<std::complex<double>>& a,
                    const std::vector<std::complex<double>>& b) {
        for (std::size_t i = 0; i < nc; ++i) {
            y[2 * i] = a[i].real();
            y[2 * i + 1] = a[i].imag();
            y[2 * nc + 2 * i] = b[i].real();
            y[2 * nc + 2 * i + 1] = b[i].imag();
        }
    };
    pack(u_hat, v_hat);

    const auto& k = grid.k_mag();
    std::vector<double> k2s(nc), k2d(nc);
    for (std::size_t i = 0; i < nc; ++i) {
        k2s[i] = k[i] == 0.0 ? 0.0 : std::pow(k[i], 2.0 * cfg.sigma);
        k2d[i] = k[i] == 0.0 ? (cfg.delta == 0.0 ? 1.0 : 0.0)
                             : std::pow(k[i], 2.0 * cfg.delta);
    }
    double k_max = 0.0;
    for (std::size_t i = 0; i < nc; ++i) k_max = std::max(k_max, k[i]);

    SpectralWorkspace ws(grid);
    auto rhs_fn = [&](double t, const std::vector<double>& s, std::vector<double>& ds) {
        const double b = eval_b(cfg.damping, t);
        if (cfg.nonlin_coeff != 0.0) {
            // the first half of s is u_hat
            nonlinear_term(grid, reinterpret_cast<const std::complex<double>*>(s.data()),
                           cfg.gamma, cfg.p, /*dealias=*/true, ws);
        }
        for (std::size_t i = 0; i < nc; ++i) {
            const double ur = s[2 * i], ui = s[2 * i + 1];
            const double vr = s[2 * nc + 2 * i], vi = s[2 * nc + 2 * i + 1];
            ds[2 * i] = vr;
            ds[2 * i + 1] = vi;
            double fr = -k2s[i] * ur - b * k2d[i] * vr;
            double fi = -k2s[i] * ui - b * k2d[i] * vi;
            if (cfg.nonlin_coeff != 0.0) {
                fr += cfg.nonlin_coeff * ws.nl_hat[i].real();
                fi += cfg.nonlin_coeff * ws.nl_hat[i].imag();
            }
            ds[2 * nc + 2 * i] = fr;
            ds[2 * nc + 2 * i + 1] = fi;
        }
    };
    auto cap = [&](double t) {
        return cfg.dt_safety / (std::pow(k_max, cfg.sigma) +
                                eval_b(cfg.damping, t) * std::pow(k_max, 2.0 * cfg.delta));
    };

    double amp0 = 0.0;
    for (std::size_t i = 0; i < nc; ++i) amp0 = std::max(amp0, std::abs(u_hat[i]));
    Rk45Options opts;
    opts.rel_tol = cfg.rel_tol;
    opts.abs_tol = cfg.rel_tol * 1e-3 * std::max(amp0, 1e-30);
    Rk45 stepper(opts);

    auto record = [&](double t) {
        const auto* uh = reinterpret_cast<const std::complex<double>*>(y.data());
        const auto* vh = reinterpret_cast<const std::complex<double>*>(y.data() + 2 * nc);
        out.times.push_back(t);
        out.l2.push_back(spectral_l2(grid, uh, 0.0));
        out.hsigma.push_back(spectral_l2(grid, uh, cfg.sigma));
        out.ut_l2.push_back(spectral_l2(grid, vh, 0.0));
    };
    record(0.0);

    const double escape = cfg.escape_threshold * out.initial_l2;
    double t = 0.0;
    bool stalled = false;
    while (t < cfg.horizon) {
        const double t_next = std::min(t + cfg.output_interval, cfg.horizon);
        try {
            stepper.integrate(rhs_fn, cap, t, t_next, y);
            t = t_next;
        } catch (const Rk45StepUnderflow& e) {
            t = e.t;
            stalled = true;
        }
        record(t);
        const double cur = out.l2.back();
        if (!std::isfinite(cur) || cur > escape) {
            out.status = RunOutcome::Status::BlownUp;
            out.blowup_time = t;
            out.note = std::isfinite(cur) ? "escape threshold crossed" : "non-finite field";
            return out;
        }
        if (stalled) {
            if (cur > 10.0 * out.initial_l2) {
                out.status = RunOutcome::Status::BlownUp;
                out.blowup_time = t;
                out.note = "step collapse with growing norm";
                return out;
            }
            throw std::runtime_error("solve_semilinear: step size underflow at t=" +
                                     std::to_string(t));
        }
        if (spectral_tail_fraction(
                grid, reinterpret_cast<const std::complex<double>*>(y.data())) > 1e-6)
            throw std::runtime_error(
                "solve_semilinear: spectral tail exceeds 1e-6 of the spectrum (resolution "
                "failure) at t=" + std::to_string(t));
    }

    const std::size_t m = out.l2.size();
    bool monotone = true;
    for (std::size_t i = (3 * m) / 4; i + 1 < m; ++i)
        if (out.l2[i + 1] > out.l2[i] * (1.0 + 1e-6)) monotone = false;
    if (out.l2.back() < 0.5 * out.initial_l2 && monotone)
        out.status = RunOutcome::Status::Decayed;
    else
        out.status = RunOutcome::Status::Inconclusive;
    return out;
}

}  // namespace sevo
