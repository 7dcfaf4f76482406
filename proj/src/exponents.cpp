#include "sevo/exponents.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sevo {

// The calculators run in exact rational arithmetic: a finite double is a
// binary rational, so converting inputs and computing in cpp_rational
// keeps every exponent table entry drift-free.
using Rat = boost::multiprecision::cpp_rational;

namespace {

Rat rat(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("exponents: non-finite input");
    return Rat(x);
}

double to_double(const Rat& r) { return r.convert_to<double>(); }

struct RatInputs {
    Rat sigma, delta, gamma, n, r0, r1;
    Rat m;  // min{r0, r1 - 2 delta}
};

RatInputs convert(const ExponentInputs& in) {
    if (!(in.sigma >= 1.0)) throw std::invalid_argument("exponents: sigma must be >= 1");
    if (!(in.delta >= 0.0 && in.delta <= in.sigma / 2.0))
        throw std::invalid_argument("exponents: delta must lie in [0, sigma/2]");
    if (!(in.gamma >= 0.0 && in.gamma < in.sigma))
        throw std::invalid_argument("exponents: gamma must lie in [0, sigma)");
    if (in.n < 1) throw std::invalid_argument("exponents: n must be a positive integer");
    RatInputs r;
    r.sigma = rat(in.sigma);
    r.delta = rat(in.delta);
    r.gamma = rat(in.gamma);
    r.n = in.n;
    r.r0 = rat(in.r0);
    r.r1 = rat(in.r1);
    const Rat shifted = r.r1 - 2 * r.delta;
    r.m = r.r0 < shifted ? r.r0 : shifted;
    return r;
}

Rat omega_rat(const RatInputs& r, BPrimeSign sign, std::string* note) {
    const Rat half_n = r.n / 2;
    if (r.delta > 0) {
        if (sign == BPrimeSign::NonNegative) {
            if (!(-half_n < r.m && r.m <= -2 * r.delta))
                throw std::domain_error(
                    "omega: requires -n/2 < min{r0, r1-2delta} <= -2delta for b' >= 0");
        } else {
            const Rat deep = r.r1 - 2 * r.sigma - 2 * r.delta;
            const Rat m_deep = r.r0 < deep ? r.r0 : deep;
            if (!(-half_n < m_deep && r.m <= -2 * r.delta))
                throw std::domain_error(
                    "omega: requires -n/2 < min{r0, r1-2sigma-2delta} and min{r0, r1-2delta} <= "
                    "-2delta for b' < 0");
            if (note && m_deep == r.m)
                *note = "hypothesis chain degenerate: min dominated by r0";
        }
    } else {
        if (!(-half_n < r.m && r.m <= 0))
            throw std::domain_error("omega: requires -n/2 < min{r0, r1} <= 0 for delta = 0");
    }
    return r.n / (r.n + r.m + 2 * r.delta);
}

Rat p_star_rat(const RatInputs& r, const Rat& w) {
    const Rat den = w * (r.n + r.m + r.gamma);
    if (!(den > 0)) throw std::domain_error("p_star: nonpositive denominator");
    return (r.n + 2 * w * (r.sigma - r.delta)) / den;
}

}  // namespace

OmegaResult omega_checked(const ExponentInputs& in, BPrimeSign sign) {
    const RatInputs r = convert(in);
    OmegaResult out;
    out.value = to_double(omega_rat(r, sign, &out.note));
    return out;
}

double omega(const ExponentInputs& in, BPrimeSign sign) {
    const RatInputs r = convert(in);
    return to_double(omega_rat(r, sign, nullptr));
}

double p_star(const ExponentInputs& in, BPrimeSign sign) {
    const RatInputs r = convert(in);
    return to_double(p_star_rat(r, omega_rat(r, sign, nullptr)));
}

std::optional<PInterval> admissible_p_range(const ExponentInputs& in, BPrimeSign sign) {
    const RatInputs r = convert(in);
    const Rat w = omega_rat(r, sign, nullptr);
    const Rat ps = p_star_rat(r, w);
    const Rat lower_closed = 2 / w;

    Rat hi;
    bool unbounded;
    if (r.n <= 2 * r.sigma - 2 * r.gamma) {
        unbounded = true;
    } else if (r.n <= (4 * r.sigma - 4 * r.gamma) / (2 - w)) {
        unbounded = false;
        hi = r.n / (r.n - 2 * r.sigma + 2 * r.gamma);
    } else {
        return std::nullopt;
    }

    PInterval out;
    out.hi_unbounded = unbounded;
    out.hi = unbounded ? std::numeric_limits<double>::infinity() : to_double(hi);
    if (ps >= lower_closed) {
        out.lo = to_double(ps);
        out.lo_open = true;
        if (!unbounded && ps >= hi) return std::nullopt;
    } else {
        out.lo = to_double(lower_closed);
        out.lo_open = false;
        if (!unbounded && lower_closed > hi) return std::nullopt;
    }
    return out;
}

double gn_theta(double kappa, double r, double q, double q0, double q1, int n) {
    if (!(r > 0.0) || !(kappa >= 0.0 && kappa < r))
        throw std::invalid_argument("gn_theta: requires 0 <= kappa < r");
    for (double v : {q, q0, q1})
        if (!(v > 1.0)) throw std::invalid_argument("gn_theta: exponents must lie in (1, inf)");
    if (n < 1) throw std::invalid_argument("gn_theta: n must be positive");
    const Rat rn = n;
    const Rat num = 1 / rat(q0) - 1 / rat(q) + rat(kappa) / rn;
    const Rat den = 1 / rat(q0) - 1 / rat(q1) + rat(r) / rn;
    if (den == 0) throw std::domain_error("gn_theta: degenerate denominator");
    const Rat theta = num / den;
    if (theta < rat(kappa) / rat(r) || theta > 1)
        throw std::domain_error("gn_theta: theta outside [kappa/r, 1]");
    return to_double(theta);
}

double r_star_lower_bound_from_negative_sobolev(double eta, int n) {
    if (!(eta > 0.0 && eta < n / 2.0))
        throw std::invalid_argument(
            "r_star_lower_bound_from_negative_sobolev: eta must lie in (0, n/2)");
    return to_double(rat(eta) - Rat(n) / 2);
}

}  // namespace sevo
