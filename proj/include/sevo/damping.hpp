#pragma once

#include "sevo/monotone_cubic.hpp"

#include <string>
#include <vector>

namespace sevo {

enum class DampingFamily { PowerLaw, Tabulated };

/// A damping coefficient family b(t) together with the equation
/// parameters (sigma, delta) it is meant to damp. PowerLaw means
/// b(t) = mu * (1+t)^kappa exactly; Tabulated evaluates a monotone
/// cubic through the given samples and refuses to extrapolate.
struct DampingSpec {
    DampingFamily family = DampingFamily::PowerLaw;
    double mu = 1.0;
    double kappa = 0.0;
    MonotoneCubic table;
    double table_t_max = 0.0;
    double sigma = 1.0;
    double delta = 0.0;

    static DampingSpec power_law(double mu, double kappa, double sigma = 1.0, double delta = 0.0);
    static DampingSpec tabulated(std::vector<double> ts, std::vector<double> bs,
                                 double sigma = 1.0, double delta = 0.0);
};

enum class Verdict { Pass, Fail, NumericOnly };

struct ConditionCheck {
    Verdict verdict = Verdict::Pass;
    double witness = 0.0;
    std::string note;
};

/// Per-condition verdicts for the structural assumptions on b(t).
struct ValidationReport {
    ConditionCheck b1, b2, b3, b4, b5, b6, b_l;
    bool effective() const {
        for (const auto* c : {&b1, &b2, &b3, &b4, &b5, &b6})
            if (c->verdict == Verdict::Fail) return false;
        return true;
    }
};

struct GTrajectory {
    std::vector<double> ts;
    std::vector<double> gs;
    double B0 = 0.0;    // \int_0^inf exp(-Bhat(0,t)) dt
    double A0 = 0.0;    // b(0)*B0 - 1
    double B1 = 0.0;    // min of b*g on [T0, horizon]
    double B2 = 0.0;    // max of b*g on [T0, horizon]
    double T0 = 0.0;
    double T1 = 0.0;
    double Binf = 0.0;  // limsup |b'|/b^2 witness
    double gprime_bound = 0.0;
    bool band_ok = false;
    bool gprime_ok = false;
    double max_residual = 0.0;  // finite-difference residual of -g' + b g = 1
};

struct BEquivalenceStats {
    // B(s,t) / (t/b(t) - s/b(s))
    double r1_min = 0.0, r1_max = 0.0;
    // (1+t) / (b(t) (1 + B(0,t)))
    double r2_min = 0.0, r2_max = 0.0;
    // (1 + B(0,t)) b^2(t) / (1 + Bhat(0,t))
    double r3_min = 0.0, r3_max = 0.0;
    std::size_t samples = 0;
};

double eval_b(const DampingSpec& spec, double t);
double eval_b_prime(const DampingSpec& spec, double t);
double eval_b_second(const DampingSpec& spec, double t);

/// B(s,t) = \int_s^t 1/b ; closed form for PowerLaw, adaptive
/// quadrature (rel err <= 1e-8) for Tabulated.
double eval_B(const DampingSpec& spec, double s, double t);

/// Bhat(s,t) = \int_s^t b.
double eval_Bhat(const DampingSpec& spec, double s, double t);

/// exp(|xi|^{2 delta} / 2 * Bhat(0,t)).
double eval_lambda(const DampingSpec& spec, double t, double xi_mag, double delta);
double eval_lambda(const DampingSpec& spec, double t, double xi_mag);

ValidationReport validate_effective(const DampingSpec& spec, double horizon);

/// \int_0^inf exp(-Bhat(0,t)) dt, truncated where the tail drops below
/// double-precision relevance.
double b0_constant(const DampingSpec& spec);

BEquivalenceStats check_B_equivalences(const DampingSpec& spec,
                                       const std::vector<std::pair<double, double>>& st_pairs);

GTrajectory solve_g(const DampingSpec& spec, double horizon);

}  // namespace sevo
