#include "sevo/decay_character.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sevo {

namespace {

void check_dim(int n) {
    if (n < 1) throw std::invalid_argument("SpectralProfile: n must be a positive integer");
}

// \int_0^rho s^{q-1} exp(-(w s)^2) ds
double gaussian_radial_integral(double q, double w, double rho) {
    return boost::math::tgamma_lower(q / 2.0, (w * rho) * (w * rho)) /
           (2.0 * std::pow(w, q));
}

}  // namespace

double sphere_area(int n) {
    check_dim(n);
    return 2.0 * std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0);
}

SpectralProfile SpectralProfile::power_cutoff(double A, double r_exp, double cutoff, int n) {
    check_dim(n);
    if (!(A >= 0.0)) throw std::invalid_argument("SpectralProfile: amplitude must be >= 0");
    if (!(cutoff > 0.0)) throw std::invalid_argument("SpectralProfile: cutoff must be > 0");
    if (!(r_exp > -n / 2.0))
        throw std::invalid_argument("SpectralProfile: PowerCutoff requires r_exp > -n/2");
    SpectralProfile p;
    p.n = n;
    p.kind = ProfileKind::PowerCutoff;
    p.amplitude = A;
    p.r_exp = r_exp;
    p.cutoff = cutoff;
    return p;
}

SpectralProfile SpectralProfile::gaussian_hat(double A, double width, int n) {
    check_dim(n);
    if (!(A >= 0.0)) throw std::invalid_argument("SpectralProfile: amplitude must be >= 0");
    if (!(width > 0.0)) throw std::invalid_argument("SpectralProfile: width must be > 0");
    SpectralProfile p;
    p.n = n;
    p.kind = ProfileKind::GaussianHat;
    p.amplitude = A;
    p.width = width;
    return p;
}

SpectralProfile SpectralProfile::tabulated_radial(std::vector<double> rhos,
                                                  std::vector<double> values, int n) {
    check_dim(n);
    if (rhos.empty() || rhos.front() != 0.0)
        throw std::invalid_argument("SpectralProfile: radial table must start at rho = 0");
    for (double v : values)
        if (!(v >= 0.0))
            throw std::invalid_argument("SpectralProfile: amplitudes must be >= 0");
    SpectralProfile p;
    p.n = n;
    p.kind = ProfileKind::TabulatedRadial;
    p.table_rho_max = rhos.back();
    p.table = MonotoneCubic(std::move(rhos), std::move(values));
    return p;
}

double SpectralProfile::operator()(double rho) const {
    if (!(rho >= 0.0)) throw std::invalid_argument("SpectralProfile: rho must be >= 0");
    double base;
    switch (kind) {
        case ProfileKind::PowerCutoff:
            base = rho <= cutoff ? amplitude * std::pow(rho, r_exp) : 0.0;
            break;
        case ProfileKind::GaussianHat:
            base = amplitude * std::exp(-0.5 * (width * rho) * (width * rho));
            break;
        case ProfileKind::TabulatedRadial:
            base = rho <= table_rho_max ? table(rho) : 0.0;
            break;
        default:
            base = 0.0;
    }
    if (shift != 0.0) {
        if (rho == 0.0) return base == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        base *= std::pow(rho, -shift);
    }
    return base;
}

double low_freq_energy(const SpectralProfile& profile, double rho) {
    if (!(rho > 0.0)) throw std::invalid_argument("low_freq_energy: rho must be > 0");
    const double cn = sphere_area(profile.n);
    const double A2 = profile.amplitude * profile.amplitude;
    switch (profile.kind) {
        case ProfileKind::PowerCutoff: {
            const double q = profile.n + 2.0 * (profile.r_exp - profile.shift);
            if (!(q > 0.0))
                throw std::domain_error("low_freq_energy: profile not integrable near 0");
            const double top = std::min(rho, profile.cutoff);
            return cn * A2 * std::pow(top, q) / q;
        }
        case ProfileKind::GaussianHat: {
            const double q = profile.n - 2.0 * profile.shift;
            if (!(q > 0.0))
                throw std::domain_error("low_freq_energy: profile not integrable near 0");
            return cn * A2 * gaussian_radial_integral(q, profile.width, rho);
        }
        case ProfileKind::TabulatedRadial: {
            const double top = std::min(rho, profile.table_rho_max);
            // substitution s = top * exp(-x) concentrates nodes at the
            // possibly singular origin
            boost::math::quadrature::exp_sinh<double> es;
            double err = 0.0;
            const double v = es.integrate(
                [&](double x) {
                    const double s = top * std::exp(-x);
                    const double a = profile(s);
                    return std::pow(s, profile.n - 1) * a * a * s;
                },
                1e-9, &err);
            if (!std::isfinite(v))
                throw std::domain_error("low_freq_energy: profile not integrable near 0");
            return cn * v;
        }
    }
    return 0.0;
}

double decay_indicator(const SpectralProfile& profile, double r, double rho) {
    if (!(r > -profile.n / 2.0))
        throw std::invalid_argument("decay_indicator: r must exceed -n/2");
    return std::pow(rho, -2.0 * r - profile.n) * low_freq_energy(profile, rho);
}

DecayCharacterEstimate estimate_decay_character(const SpectralProfile& profile) {
    DecayCharacterEstimate est;
    double rho_max = 1.0;
    if (profile.kind == ProfileKind::PowerCutoff) rho_max = std::min(1.0, profile.cutoff);
    if (profile.kind == ProfileKind::TabulatedRadial)
        rho_max = std::min(1.0, profile.table_rho_max);

    constexpr int k_lo = 4, k_hi = 16;
    std::vector<double> xs, ys, rhos;
    for (int k = k_lo; k <= k_hi; ++k) {
        const double rho = rho_max * std::pow(2.0, -k);
        const double e = low_freq_energy(profile, rho);
        if (e <= 0.0) {
            est.status = DecayCharacterEstimate::Status::Degenerate;
            est.r_star = 0.0;
            est.P_value = 0.0;
            return est;
        }
        rhos.push_back(rho);
        xs.push_back(std::log(rho));
        ys.push_back(std::log(e));
    }
    est.rho_lo = rhos.back();
    est.rho_hi = rhos.front();

    const std::size_t m = xs.size();
    double xbar = 0.0, ybar = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        xbar += xs[i];
        ybar += ys[i];
    }
    xbar /= m;
    ybar /= m;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sxy += (xs[i] - xbar) * (ys[i] - ybar);
        sxx += (xs[i] - xbar) * (xs[i] - xbar);
    }
    est.slope = sxy / sxx;
    const double icept = ybar - est.slope * xbar;
    double ss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double r = ys[i] - (icept + est.slope * xs[i]);
        ss += r * r;
    }
    est.residual = std::sqrt(ss / (m - 2));

    est.r_star = (est.slope - profile.n) / 2.0;
    est.P_value = std::pow(rhos.back(), -2.0 * est.r_star - profile.n) *
                  std::exp(ys.back());

    // indicator ladder at the fitted exponent; a persistent factor 4 per
    // halving means the limit is 0 or infinity
    bool all_down = true, all_up = true;
    for (std::size_t i = 1; i < m; ++i) {
        const double prev = -(2.0 * est.r_star + profile.n) * xs[i - 1] + ys[i - 1];
        const double cur = -(2.0 * est.r_star + profile.n) * xs[i] + ys[i];
        const double ratio = std::exp(cur - prev);
        if (!(ratio <= 0.25)) all_down = false;
        if (!(ratio >= 4.0)) all_up = false;
    }
    if (all_down) {
        est.status = DecayCharacterEstimate::Status::Zero;
        est.P_value = 0.0;
        est.r_star = std::numeric_limits<double>::infinity();
        return est;
    }
    if (all_up) {
        est.status = DecayCharacterEstimate::Status::Infinite;
        est.P_value = std::numeric_limits<double>::infinity();
        est.r_star = -profile.n / 2.0;
        return est;
    }
    if (est.residual > 0.15) {
        est.status = DecayCharacterEstimate::Status::Indeterminate;
        return est;
    }
    est.status = DecayCharacterEstimate::Status::Finite;
    return est;
}

SpectralProfile shift_character(const SpectralProfile& profile, double s) {
    if (!(s >= 0.0)) throw std::invalid_argument("shift_character: s must be >= 0");
    if (s == 0.0) return profile;
    const auto est = estimate_decay_character(profile);
    if (est.status == DecayCharacterEstimate::Status::Degenerate)
        throw std::domain_error("shift_character: degenerate profile");
    if (!(est.r_star - s > -profile.n / 2.0))
        throw std::domain_error(
            "shift_character: shifted profile not square-integrable near 0 (needs r* - s > "
            "-n/2)");
    SpectralProfile out = profile;
    out.shift += s;
    return out;
}

PNormResult p_norm(const SpectralProfile& profile, double eta) {
    if (!(eta >= 0.0)) throw std::invalid_argument("p_norm: eta must be >= 0");
    PNormResult out;
    if (profile.amplitude == 0.0 && profile.kind != ProfileKind::TabulatedRadial) {
        out.status = "degenerate";
        return out;
    }

    const double cn = sphere_area(profile.n);
    const double A2 = profile.amplitude * profile.amplitude;
    double h2 = 0.0;
    switch (profile.kind) {
        case ProfileKind::PowerCutoff: {
            const double q = profile.n + 2.0 * (profile.r_exp - profile.shift) + 2.0 * eta;
            if (!(q > 0.0)) throw std::domain_error("p_norm: divergent Sobolev quadrature");
            h2 = cn * A2 * std::pow(profile.cutoff, q) / q;
            break;
        }
        case ProfileKind::GaussianHat: {
            const double q = profile.n - 2.0 * profile.shift + 2.0 * eta;
            if (!(q > 0.0)) throw std::domain_error("p_norm: divergent Sobolev quadrature");
            h2 = cn * A2 * boost::math::tgamma(q / 2.0) / (2.0 * std::pow(profile.width, q));
            break;
        }
        case ProfileKind::TabulatedRadial: {
            boost::math::quadrature::exp_sinh<double> es;
            double err = 0.0;
            const double top = profile.table_rho_max;
            h2 = cn * es.integrate(
                          [&](double x) {
                              const double s = top * std::exp(-x);
                              const double a = profile(s);
                              return std::pow(s, profile.n - 1 + 2.0 * eta) * a * a * s;
                          },
                          1e-9, &err);
            break;
        }
    }
    if (!std::isfinite(h2)) throw std::domain_error("p_norm: divergent Sobolev quadrature");

    const auto est = estimate_decay_character(profile);
    if (est.status == DecayCharacterEstimate::Status::Degenerate && h2 == 0.0) {
        out.status = "degenerate";
        return out;
    }
    out.sobolev_part = std::sqrt(h2);
    out.indicator_part =
        est.status == DecayCharacterEstimate::Status::Finite ? std::sqrt(est.P_value) : 0.0;
    if (est.status != DecayCharacterEstimate::Status::Finite) out.status = "indicator-unavailable";
    out.value = out.sobolev_part + out.indicator_part;
    return out;
}

}  // namespace sevo
