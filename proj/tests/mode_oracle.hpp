#pragma once

// Test-only closed form for the constant-coefficient mode equation
//   u'' + a u + c u' = 0,  a = xi^{2 sigma}, c = b xi^{2 delta},
// evaluated independently of the adaptive integrator it checks.

#include <cmath>
#include <utility>

namespace sevo::testing {

inline std::pair<double, double> const_coeff_mode(double a, double c, double u0, double v0,
                                                  double t) {
    const double disc = c * c / 4.0 - a;
    const double r = -c / 2.0;
    if (std::abs(disc) < 1e-14) {
        // double root
        const double e = std::exp(r * t);
        const double slope = v0 - r * u0;
        return {e * (u0 + slope * t), e * (r * (u0 + slope * t) + slope)};
    }
    if (disc > 0.0) {
        const double s = std::sqrt(disc);
        const double r1 = r + s, r2 = r - s;
        const double A = (v0 - r2 * u0) / (r1 - r2);
        const double B = u0 - A;
        return {A * std::exp(r1 * t) + B * std::exp(r2 * t),
                A * r1 * std::exp(r1 * t) + B * r2 * std::exp(r2 * t)};
    }
    const double w = std::sqrt(-disc);
    const double e = std::exp(r * t);
    const double cw = std::cos(w * t), sw = std::sin(w * t);
    const double k = (v0 - r * u0) / w;
    const double u = e * (u0 * cw + k * sw);
    const double v = e * (r * (u0 * cw + k * sw) + (-u0 * w * sw + k * w * cw));
    return {u, v};
}

}  // namespace sevo::testing
