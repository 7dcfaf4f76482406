#include "sevo/phase_zones.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sevo {

namespace {

void check_params(const ZoneParams& p) {
    if (!(p.eps >= 0.0 && p.eps < 1.0 && p.N >= 1.0))
        throw std::invalid_argument("ZoneParams: requires 0 <= eps < 1 <= N");
    if (!(p.d0 > 0.0)) throw std::invalid_argument("ZoneParams: d0 must be > 0");
}

bool monotone_table(const DampingSpec& spec) {
    const int n = 256;
    double sign = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double t = spec.table_t_max * i / n;
        const double d = spec.table.derivative(t);
        if (d != 0.0) {
            if (sign == 0.0) sign = d > 0 ? 1.0 : -1.0;
            else if (sign * d < 0.0) return false;
        }
    }
    return true;
}

}  // namespace

const char* zone_name(ZoneLabel z) {
    switch (z) {
        case ZoneLabel::Hyp: return "hyp";
        case ZoneLabel::Pd: return "pd";
        case ZoneLabel::Red: return "red";
        case ZoneLabel::Ell: return "ell";
        case ZoneLabel::Diss: return "diss";
    }
    return "?";
}

double weight(const DampingSpec& spec, double t, double xi_mag) {
    if (!(t >= 0.0 && xi_mag >= 0.0))
        throw std::invalid_argument("weight: requires t >= 0 and xi >= 0");
    const double b = eval_b(spec, t);
    const double a = std::pow(xi_mag, 2.0 * spec.sigma);
    const double c = std::pow(xi_mag, 4.0 * spec.delta) * b * b / 4.0;
    return std::sqrt(std::abs(a - c));
}

double mass(const DampingSpec& spec, double t, double xi_mag) {
    const double b = eval_b(spec, t);
    const double bp = eval_b_prime(spec, t);
    return std::pow(xi_mag, 2.0 * spec.sigma) -
           std::pow(xi_mag, 4.0 * spec.delta) * b * b / 4.0 -
           std::pow(xi_mag, 2.0 * spec.delta) * bp / 2.0;
}

ZoneLabel classify(const DampingSpec& spec, const ZoneParams& params, double t, double xi_mag) {
    check_params(params);
    const double b = eval_b(spec, t);
    const double w = weight(spec, t, xi_mag);
    const double gate = std::pow(xi_mag, spec.sigma - 2.0 * spec.delta);
    const bool pi_hyp = gate > b / 2.0;
    const bool pi_ell = gate < b / 2.0;
    const double half = std::pow(xi_mag, 2.0 * spec.delta) * b / 2.0;

    if (spec.delta > 0.0 && pi_ell &&
        std::pow(xi_mag, 2.0 * spec.delta) * (1.0 + t) * b <= params.d0)
        return ZoneLabel::Diss;
    if (pi_ell && w >= params.eps * half &&
        (spec.delta == 0.0 ||
         std::pow(xi_mag, 2.0 * spec.delta) * (1.0 + t) * b >= params.d0))
        return ZoneLabel::Ell;
    if (w <= params.eps * half) return ZoneLabel::Red;
    if (pi_hyp && w <= params.N * half) return ZoneLabel::Pd;
    return ZoneLabel::Hyp;
}

std::optional<double> curve_t_ell(const DampingSpec& spec, const ZoneParams& params,
                                  double xi_mag, double horizon) {
    check_params(params);
    if (!(xi_mag > 0.0)) throw std::invalid_argument("curve_t_ell: xi must be > 0");
    const double target = 2.0 * std::pow(xi_mag, spec.sigma - 2.0 * spec.delta) /
                          std::sqrt(1.0 - params.eps * params.eps);
    if (spec.family == DampingFamily::PowerLaw) {
        if (spec.kappa == 0.0)
            return target == spec.mu ? std::optional<double>(0.0) : std::nullopt;
        const double t = std::pow(target / spec.mu, 1.0 / spec.kappa) - 1.0;
        if (t < 0.0) return std::nullopt;
        return t;
    }
    if (!monotone_table(spec)) throw std::domain_error("curve_t_ell: non-monotone tabulated b");
    const double hi = std::min(horizon, spec.table_t_max);
    const double b0 = eval_b(spec, 0.0), bh = eval_b(spec, hi);
    const double lo_v = std::min(b0, bh), hi_v = std::max(b0, bh);
    if (target < lo_v || target > hi_v) return std::nullopt;
    double a = 0.0, c = hi;
    const bool incr = bh >= b0;
    for (int i = 0; i < 200; ++i) {
        const double m = 0.5 * (a + c);
        ((eval_b(spec, m) < target) == incr ? a : c) = m;
    }
    return 0.5 * (a + c);
}

std::optional<double> curve_t_diss(const DampingSpec& spec, const ZoneParams& params,
                                   double xi_mag) {
    check_params(params);
    if (!(xi_mag > 0.0)) throw std::invalid_argument("curve_t_diss: xi must be > 0");
    if (!(spec.delta > 0.0))
        throw std::domain_error("curve_t_diss: boundary undefined for delta = 0");
    const auto h = [&](double t) {
        return std::pow(xi_mag, 2.0 * spec.delta) * (1.0 + t) * eval_b(spec, t);
    };
    if (h(0.0) >= params.d0) return std::nullopt;
    double hi = 1.0;
    const double hi_max =
        spec.family == DampingFamily::Tabulated ? spec.table_t_max : 1e12;
    while (h(hi) < params.d0) {
        hi = 2.0 * hi + 1.0;
        if (hi > hi_max)
            throw std::runtime_error("curve_t_diss: no crossing within evaluable range");
    }
    double lo = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double m = 0.5 * (lo + hi);
        (h(m) < params.d0 ? lo : hi) = m;
    }
    return 0.5 * (lo + hi);
}

double omega_threshold(const DampingSpec& spec, const ZoneParams& params, double s, double t) {
    check_params(params);
    if (!(spec.delta < spec.sigma / 2.0))
        throw std::domain_error("omega_threshold: undefined for delta = sigma/2 (use M)");
    const double bmax = std::max(eval_b(spec, s), eval_b(spec, t));
    return std::pow(bmax * std::sqrt(1.0 - params.eps * params.eps) / 2.0,
                    1.0 / (spec.sigma - 2.0 * spec.delta));
}

double lambda_threshold(const DampingSpec& spec, const ZoneParams& params, double t) {
    check_params(params);
    if (!(spec.delta > 0.0))
        throw std::domain_error("lambda_threshold: undefined for delta = 0");
    return std::pow(params.d0 / ((1.0 + t) * eval_b(spec, t)), 1.0 / (2.0 * spec.delta));
}

EnvelopeRegime envelope_regime(const DampingSpec& spec, const ZoneParams& params, double t,
                               double s, double xi_mag) {
    if (!(s <= t)) throw std::invalid_argument("envelope_regime: requires s <= t");
    if (spec.delta == spec.sigma / 2.0)
        return xi_mag >= params.M ? EnvelopeRegime::High : EnvelopeRegime::Mid;
    if (xi_mag >= omega_threshold(spec, params, s, t)) return EnvelopeRegime::High;
    if (spec.delta > 0.0 && xi_mag <= lambda_threshold(spec, params, t))
        return EnvelopeRegime::Low;
    return EnvelopeRegime::Mid;
}

namespace {

double envelope_value(EnvelopeKind kind, EnvelopeRegime regime, const DampingSpec& spec,
                      const ZoneParams& params, double t, double s, double xi) {
    const double sigma = spec.sigma, delta = spec.delta;
    const double beta = params.eps;  // beta = C eps with C = 1
    const double bt = eval_b(spec, t);
    const double bs = eval_b(spec, s);
    const bool half = delta == sigma / 2.0;

    if ((kind == EnvelopeKind::K0 || kind == EnvelopeKind::DtK0) && s != 0.0)
        throw std::invalid_argument("bound_envelope: K0 kernels are defined from s = 0");

    switch (regime) {
        case EnvelopeRegime::High: {
            const double lam_ratio =
                std::exp(-0.5 * std::pow(xi, 2.0 * delta) * eval_Bhat(spec, s, t));
            const double decay = std::pow(lam_ratio, 1.0 - 2.0 * beta);
            switch (kind) {
                case EnvelopeKind::K1: return std::pow(xi, -sigma) * decay;
                case EnvelopeKind::DtK1: return decay;
                case EnvelopeKind::K0: return decay;
                case EnvelopeKind::DtK0: return std::pow(xi, sigma) * decay;
            }
            break;
        }
        case EnvelopeRegime::Mid: {
            if (half) {
                // Corollary forms at delta = sigma/2: both exponential
                // routes are summed
                const double xs = std::pow(xi, sigma);
                const double e_t = std::exp(-xs * (t - s));
                const double e_B = std::exp(-xs * eval_B(spec, s, t));
                switch (kind) {
                    case EnvelopeKind::K1: return (e_t + e_B) / (xs * bt);
                    case EnvelopeKind::DtK1:
                        return std::exp(-xs * eval_Bhat(spec, s, t)) +
                               (1.0 / bs + 1.0 / bt) * e_B / bt;
                    case EnvelopeKind::K0: return e_t + e_B;
                    case EnvelopeKind::DtK0: return xs / bt * (e_t + e_B);
                }
                break;
            }
            const double e_B =
                std::exp(-std::pow(xi, 2.0 * sigma - 2.0 * delta) * eval_B(spec, s, t));
            switch (kind) {
                case EnvelopeKind::K1:
                    return e_B / (bt * std::pow(xi, 2.0 * delta));
                case EnvelopeKind::DtK1:
                    return (1.0 / bs + 1.0 / bt) *
                           std::pow(xi, 2.0 * sigma - 4.0 * delta) / bt * e_B;
                case EnvelopeKind::K0: return e_B;
                case EnvelopeKind::DtK0:
                    return std::pow(xi, 2.0 * sigma - 2.0 * delta) / bt * e_B;
            }
            break;
        }
        case EnvelopeRegime::Low: {
            const double e_t = std::exp(-std::pow(xi, 2.0 * sigma - 2.0 * delta) * (t - s));
            switch (kind) {
                case EnvelopeKind::K1:
                    return e_t / (std::pow(xi, 2.0 * delta) * bt);
                case EnvelopeKind::DtK1:
                    return std::min(
                        std::exp(-std::pow(xi, 2.0 * delta) * eval_Bhat(spec, s, t)),
                        std::exp(-std::pow(xi, sigma) * (t - s)));
                case EnvelopeKind::K0: return e_t;
                case EnvelopeKind::DtK0:
                    return std::pow(xi, 2.0 * sigma - 2.0 * delta) / bt * e_t;
            }
            break;
        }
    }
    throw std::logic_error("bound_envelope: unreachable");
}

}  // namespace

double bound_envelope(EnvelopeKind kind, const DampingSpec& spec, const ZoneParams& params,
                      double t, double s, double xi_mag) {
    check_params(params);
    if (!(xi_mag > 0.0)) throw std::invalid_argument("bound_envelope: xi must be > 0");
    return envelope_value(kind, envelope_regime(spec, params, t, s, xi_mag), spec, params, t, s,
                          xi_mag);
}

double bound_envelope(EnvelopeKind kind, EnvelopeRegime regime, const DampingSpec& spec,
                      const ZoneParams& params, double t, double s, double xi_mag) {
    check_params(params);
    if (!(xi_mag > 0.0)) throw std::invalid_argument("bound_envelope: xi must be > 0");
    if (envelope_regime(spec, params, t, s, xi_mag) != regime) {
        // boundary samples satisfy both neighboring regimes; accept them
        const bool boundary_ok = [&] {
            if (spec.delta == spec.sigma / 2.0) return xi_mag == params.M;
            if (regime == EnvelopeRegime::High)
                return xi_mag >= omega_threshold(spec, params, s, t);
            if (regime == EnvelopeRegime::Low)
                return spec.delta > 0.0 && xi_mag <= lambda_threshold(spec, params, t);
            const bool below_omega = xi_mag <= omega_threshold(spec, params, s, t);
            const bool above_lambda =
                spec.delta == 0.0 || xi_mag >= lambda_threshold(spec, params, t);
            return below_omega && above_lambda;
        }();
        if (!boundary_ok)
            throw std::domain_error("bound_envelope: sample outside the requested regime");
    }
    return envelope_value(kind, regime, spec, params, t, s, xi_mag);
}

}  // namespace sevo
