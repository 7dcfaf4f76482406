#include "sevo/damping.hpp"

#include "sevo/quadrature.hpp"
#include "sevo/rk45.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sevo {

namespace {

constexpr double kBhatTail = 25.0;  // exp(-25) tail, below double-precision relevance

double pow1p(double t, double e) { return std::pow(1.0 + t, e); }

}  // namespace

DampingSpec DampingSpec::power_law(double mu, double kappa, double sigma, double delta) {
    if (!(mu > 0.0)) throw std::invalid_argument("DampingSpec: mu must be positive");
    if (!(sigma >= 1.0)) throw std::invalid_argument("DampingSpec: sigma must be >= 1");
    if (!(delta >= 0.0 && delta <= sigma / 2.0))
        throw std::invalid_argument("DampingSpec: delta must lie in [0, sigma/2]");
    DampingSpec s;
    s.family = DampingFamily::PowerLaw;
    s.mu = mu;
    s.kappa = kappa;
    s.sigma = sigma;
    s.delta = delta;
    return s;
}

DampingSpec DampingSpec::tabulated(std::vector<double> ts, std::vector<double> bs, double sigma,
                                   double delta) {
    if (!(sigma >= 1.0)) throw std::invalid_argument("DampingSpec: sigma must be >= 1");
    if (!(delta >= 0.0 && delta <= sigma / 2.0))
        throw std::invalid_argument("DampingSpec: delta must lie in [0, sigma/2]");
    for (double b : bs)
        if (!(b > 0.0)) throw std::invalid_argument("DampingSpec: tabulated b must be positive");
    if (ts.empty() || !(ts.front() <= 0.0))
        throw std::invalid_argument("DampingSpec: table must start at t <= 0");
    DampingSpec s;
    s.family = DampingFamily::Tabulated;
    s.table_t_max = ts.back();
    s.table = MonotoneCubic(std::move(ts), std::move(bs));
    s.sigma = sigma;
    s.delta = delta;
    return s;
}

double eval_b(const DampingSpec& spec, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("eval_b: t must be >= 0");
    if (spec.family == DampingFamily::PowerLaw) return spec.mu * pow1p(t, spec.kappa);
    return spec.table(t);
}

double eval_b_prime(const DampingSpec& spec, double t) {
    if (spec.family == DampingFamily::PowerLaw)
        return spec.mu * spec.kappa * pow1p(t, spec.kappa - 1.0);
    return spec.table.derivative(t);
}

double eval_b_second(const DampingSpec& spec, double t) {
    if (spec.family == DampingFamily::PowerLaw)
        return spec.mu * spec.kappa * (spec.kappa - 1.0) * pow1p(t, spec.kappa - 2.0);
    return spec.table.second_derivative(t);
}

namespace {

// (1+t)^e - (1+s)^e without cancellation for s close to t
double pow1p_diff(double s, double t, double e) {
    return pow1p(s, e) * std::expm1(e * std::log1p((t - s) / (1.0 + s)));
}

}  // namespace

double eval_B(const DampingSpec& spec, double s, double t) {
    if (!(0.0 <= s && s <= t)) throw std::invalid_argument("eval_B: requires 0 <= s <= t");
    if (spec.family == DampingFamily::PowerLaw) {
        if (spec.kappa == 1.0) return std::log1p((t - s) / (1.0 + s)) / spec.mu;
        const double e = 1.0 - spec.kappa;
        return pow1p_diff(s, t, e) / (spec.mu * e);
    }
    return integrate([&](double tau) { return 1.0 / spec.table(tau); }, s, t, 1e-9).value;
}

double eval_Bhat(const DampingSpec& spec, double s, double t) {
    if (!(0.0 <= s && s <= t)) throw std::invalid_argument("eval_Bhat: requires 0 <= s <= t");
    if (spec.family == DampingFamily::PowerLaw) {
        if (spec.kappa == -1.0) return spec.mu * std::log1p((t - s) / (1.0 + s));
        const double e = 1.0 + spec.kappa;
        return spec.mu * pow1p_diff(s, t, e) / e;
    }
    return integrate([&](double tau) { return spec.table(tau); }, s, t, 1e-9).value;
}

double eval_lambda(const DampingSpec& spec, double t, double xi_mag, double delta) {
    if (!(xi_mag >= 0.0)) throw std::invalid_argument("eval_lambda: xi_mag must be >= 0");
    if (delta == 0.0) return std::exp(0.5 * eval_Bhat(spec, 0.0, t));
    if (xi_mag == 0.0) return 1.0;
    return std::exp(0.5 * std::pow(xi_mag, 2.0 * delta) * eval_Bhat(spec, 0.0, t));
}

double eval_lambda(const DampingSpec& spec, double t, double xi_mag) {
    return eval_lambda(spec, t, xi_mag, spec.delta);
}

namespace {

ValidationReport validate_power_law(const DampingSpec& spec, double horizon) {
    const double kappa = spec.kappa;
    const double mu = spec.mu;
    const double sigma = spec.sigma;
    const double delta = spec.delta;
    ValidationReport r;

    r.b1 = {Verdict::Pass, mu, "smooth and positive"};

    const bool interior = delta > 0.0 && delta < sigma / 2.0;
    const double b2_threshold = interior ? -(sigma - 2.0 * delta) / sigma : -1.0;
    const double b2_exponent = 2.0 * delta / sigma - kappa - 1.0;
    const double b2_witness = (std::abs(kappa) / mu) * pow1p(horizon, b2_exponent);
    r.b2 = {kappa > b2_threshold ? Verdict::Pass : Verdict::Fail, b2_witness,
            interior ? "requires kappa > -(sigma-2delta)/sigma" : "requires kappa > -1"};

    r.b3 = {Verdict::Pass, std::max(std::abs(kappa), std::abs(kappa * (kappa - 1.0))),
            "derivative quotients scale like the stated powers"};

    r.b4 = {kappa <= 1.0 ? Verdict::Pass : Verdict::Fail, eval_B(spec, 0.0, horizon),
            "1/b integrable iff kappa > 1"};

    double b5_witness;
    if (kappa == -1.0)
        b5_witness = std::log1p(horizon) / mu;
    else
        b5_witness = (1.0 - pow1p(horizon, -1.0 - kappa)) / (mu * (1.0 + kappa));
    r.b5 = {kappa > -1.0 ? Verdict::Pass : Verdict::Fail, b5_witness,
            "((1+t)^2 b)^{-1} integrable iff kappa > -1"};

    r.b6 = {Verdict::Pass, kappa, "b' keeps the sign of kappa"};

    double binf;
    if (kappa > -1.0)
        binf = 0.0;
    else if (kappa == -1.0)
        binf = std::abs(kappa) / mu;
    else
        binf = std::numeric_limits<double>::infinity();
    r.b_l = {binf < 1.0 ? Verdict::Pass : Verdict::Fail, binf, "limsup |b'|/b^2"};
    return r;
}

ValidationReport validate_tabulated(const DampingSpec& spec, double horizon) {
    const double t_hi = std::min(horizon, spec.table_t_max);
    const int n = 512;
    ValidationReport r;

    bool positive = true, sign_change = false;
    double first_sign = 0.0;
    double b2_tail = 0.0, b3_sup = 0.0, bl_tail = 0.0;
    double b4_int = 0.0, b5_int = 0.0;
    double prev_t = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double t = t_hi * i / n;
        const double b = spec.table(t);
        const double bp = spec.table.derivative(t);
        const double bpp = spec.table.second_derivative(t);
        if (!(b > 0.0)) positive = false;
        if (bp != 0.0) {
            if (first_sign == 0.0) first_sign = bp > 0 ? 1.0 : -1.0;
            else if (first_sign * bp < 0.0) sign_change = true;
        }
        b3_sup = std::max({b3_sup, std::abs(bp) * (1.0 + t) / b,
                           std::abs(bpp) * (1.0 + t) * (1.0 + t) / b});
        if (t >= 0.5 * t_hi) {
            b2_tail = std::max(b2_tail, std::abs(bp) / (b * b) *
                                            std::pow(1.0 + t, 2.0 * spec.delta / spec.sigma));
            bl_tail = std::max(bl_tail, std::abs(bp) / (b * b));
        }
        if (i > 0) {
            const double dt = t - prev_t;
            b4_int += dt / b;
            b5_int += dt / ((1.0 + t) * (1.0 + t) * b);
        }
        prev_t = t;
    }

    const char* tail_note = "tail estimate over sampled horizon";
    r.b1 = {positive ? Verdict::NumericOnly : Verdict::Fail, 0.0,
            positive ? "interpolant is C^1, not C^3" : "b <= 0 within range"};
    r.b2 = {Verdict::NumericOnly, b2_tail, tail_note};
    r.b3 = {Verdict::NumericOnly, b3_sup, tail_note};
    r.b4 = {Verdict::NumericOnly, b4_int, "B(0,horizon); divergence undecidable from data"};
    r.b5 = {Verdict::NumericOnly, b5_int, tail_note};
    r.b6 = {sign_change ? Verdict::Fail : Verdict::NumericOnly, first_sign,
            sign_change ? "b' changes sign within range" : "no sign change observed"};
    r.b_l = {Verdict::NumericOnly, bl_tail, tail_note};
    return r;
}

}  // namespace

ValidationReport validate_effective(const DampingSpec& spec, double horizon) {
    if (!(horizon > 0.0)) throw std::invalid_argument("validate_effective: horizon must be > 0");
    if (spec.family == DampingFamily::PowerLaw) return validate_power_law(spec, horizon);
    return validate_tabulated(spec, horizon);
}

BEquivalenceStats check_B_equivalences(const DampingSpec& spec,
                                       const std::vector<std::pair<double, double>>& st_pairs) {
    if (st_pairs.empty())
        throw std::invalid_argument("check_B_equivalences: degenerate grid (empty)");
    BEquivalenceStats st;
    st.r1_min = st.r2_min = st.r3_min = std::numeric_limits<double>::infinity();
    st.r1_max = st.r2_max = st.r3_max = -std::numeric_limits<double>::infinity();
    for (const auto& [s, t] : st_pairs) {
        if (!(s < t))
            throw std::invalid_argument("check_B_equivalences: grid must have s < t");
        const double bs = eval_b(spec, s), bt = eval_b(spec, t);
        const double B0t = eval_B(spec, 0.0, t);
        const double r1 = eval_B(spec, s, t) / (t / bt - s / bs);
        const double r2 = (1.0 + t) / (bt * (1.0 + B0t));
        const double r3 = (1.0 + B0t) * bt * bt / (1.0 + eval_Bhat(spec, 0.0, t));
        if (!std::isfinite(r1) || !std::isfinite(r2) || !std::isfinite(r3))
            throw std::runtime_error("check_B_equivalences: degenerate ratio");
        st.r1_min = std::min(st.r1_min, r1);
        st.r1_max = std::max(st.r1_max, r1);
        st.r2_min = std::min(st.r2_min, r2);
        st.r2_max = std::max(st.r2_max, r2);
        st.r3_min = std::min(st.r3_min, r3);
        st.r3_max = std::max(st.r3_max, r3);
        ++st.samples;
    }
    return st;
}

namespace {

// smallest increment d with Bhat(from, from + d) >= kBhatTail; the search
// expands from the local time scale 1/b so the quadrature interval stays
// comparable to the integrand's boundary layer
double bhat_truncation(const DampingSpec& spec, double from) {
    double d = 1.0 / eval_b(spec, from);
    while (eval_Bhat(spec, from, from + d) < kBhatTail) {
        d *= 2.0;
        if (from + d > 1e9)
            throw std::runtime_error(
                "solve_g: Bhat grows too slowly for the quadrature truncation (misconfigured "
                "spec)");
        if (spec.family == DampingFamily::Tabulated && from + d > spec.table_t_max)
            throw std::runtime_error("solve_g: tabulated range exhausted before Bhat tail");
    }
    return from + d;
}

std::vector<double> g_grid(double horizon) {
    std::vector<double> ts;
    const double dense_end = std::min(4.0, horizon);
    const int n_dense = 2000;
    for (int i = 0; i < n_dense; ++i)
        ts.push_back(dense_end * static_cast<double>(i) / n_dense);
    ts.push_back(dense_end);
    if (horizon > dense_end) {
        const int n_log = 1500;
        const double ratio = std::pow(horizon / dense_end, 1.0 / n_log);
        double t = dense_end;
        for (int i = 1; i < n_log; ++i) {
            t *= ratio;
            ts.push_back(t);
        }
        ts.push_back(horizon);
    }
    return ts;
}

}  // namespace

double b0_constant(const DampingSpec& spec) {
    const double T_b0 = bhat_truncation(spec, 0.0);
    return integrate([&](double t) { return std::exp(-eval_Bhat(spec, 0.0, t)); }, 0.0, T_b0,
                     1e-12)
        .value;
}

GTrajectory solve_g(const DampingSpec& spec, double horizon) {
    if (!(horizon > 0.0)) throw std::invalid_argument("solve_g: horizon must be > 0");
    GTrajectory out;

    out.B0 = b0_constant(spec);
    out.A0 = eval_b(spec, 0.0) * out.B0 - 1.0;

    // The bounded solution of -g' + b g = 1 is g(t) = \int_t^inf
    // exp(-Bhat(t,tau)) dtau. Forward integration from g(0) = B0 amplifies
    // round-off like exp(Bhat(0,t)), so the trajectory is produced by a
    // quadrature terminal value at the horizon and a backward sweep, which
    // damps perturbations at the same exponential rate.
    const double T_gh = bhat_truncation(spec, horizon);
    const double g_h =
        integrate([&](double tau) { return std::exp(-eval_Bhat(spec, horizon, tau)); }, horizon,
                  T_gh, 1e-12)
            .value;

    out.ts = g_grid(horizon);
    const std::size_t n = out.ts.size();
    out.gs.assign(n, 0.0);
    out.gs[n - 1] = g_h;

    Rk45Options opts;
    opts.rel_tol = 1e-10;
    opts.abs_tol = 1e-14;
    Rk45 stepper(opts);
    std::vector<double> y = {g_h};
    auto rhs = [&](double tau, const std::vector<double>& g, std::vector<double>& dg) {
        dg[0] = 1.0 - eval_b(spec, horizon - tau) * g[0];
    };
    auto cap = [](double) { return std::numeric_limits<double>::infinity(); };
    for (std::size_t i = n - 1; i-- > 0;) {
        stepper.integrate(rhs, cap, horizon - out.ts[i + 1], horizon - out.ts[i], y);
        out.gs[i] = y[0];
    }

    // band of b*g around its horizon value
    const double v_inf = eval_b(spec, horizon) * g_h;
    std::size_t first_ok = 0;
    for (std::size_t i = n; i-- > 0;) {
        const double bg = eval_b(spec, out.ts[i]) * out.gs[i];
        if (bg < 0.5 * v_inf || bg > 2.0 * v_inf) {
            first_ok = i + 1;
            break;
        }
    }
    if (first_ok < n) {
        out.T0 = out.ts[first_ok];
        out.B1 = std::numeric_limits<double>::infinity();
        out.B2 = 0.0;
        for (std::size_t i = first_ok; i < n; ++i) {
            const double bg = eval_b(spec, out.ts[i]) * out.gs[i];
            out.B1 = std::min(out.B1, bg);
            out.B2 = std::max(out.B2, bg);
        }
        out.band_ok = out.B1 > 0.0;
    }

    // |g'| = |b g - 1| against (1 + Binf)/(1 - Binf)
    if (spec.family == DampingFamily::PowerLaw) {
        out.Binf = validate_power_law(spec, horizon).b_l.witness;
    } else {
        for (std::size_t i = n / 2; i < n; ++i) {
            const double b = eval_b(spec, out.ts[i]);
            out.Binf = std::max(out.Binf, std::abs(eval_b_prime(spec, out.ts[i])) / (b * b));
        }
    }
    out.gprime_bound = out.Binf < 1.0 ? (1.0 + out.Binf) / (1.0 - out.Binf)
                                      : std::numeric_limits<double>::infinity();
    std::size_t first_gp_ok = 0;
    for (std::size_t i = n; i-- > 0;) {
        const double gp = eval_b(spec, out.ts[i]) * out.gs[i] - 1.0;
        if (std::abs(gp) > out.gprime_bound + 0.05) {
            first_gp_ok = i + 1;
            break;
        }
    }
    out.gprime_ok = first_gp_ok < n;
    out.T1 = out.gprime_ok ? out.ts[first_gp_ok] : horizon;

    // independent residual check by nonuniform central differences
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h1 = out.ts[i] - out.ts[i - 1];
        const double h2 = out.ts[i + 1] - out.ts[i];
        const double gp = -h2 / (h1 * (h1 + h2)) * out.gs[i - 1] +
                          (h2 - h1) / (h1 * h2) * out.gs[i] +
                          h1 / (h2 * (h1 + h2)) * out.gs[i + 1];
        const double res = std::abs(-gp + eval_b(spec, out.ts[i]) * out.gs[i] - 1.0);
        out.max_residual = std::max(out.max_residual, res);
    }
    return out;
}

}  // namespace sevo
