#pragma once

#include <optional>
#include <string>

namespace sevo {

/// Parameter block for the exponent calculators: equation powers
/// (sigma, delta, gamma), dimension n, and the decay characters of the
/// two data components.
struct ExponentInputs {
    double sigma = 1.0;
    double delta = 0.0;
    double gamma = 0.0;
    int n = 1;
    double r0 = 0.0;  // r*(u_0)
    double r1 = 0.0;  // r*(u_1)
};

enum class BPrimeSign { NonNegative, Negative };

struct PInterval {
    double lo = 0.0;
    double hi = 0.0;  // +inf for unbounded
    bool lo_open = true;
    bool hi_unbounded = true;
};

struct OmegaResult {
    double value = 0.0;
    std::string note;  // flags degenerate hypothesis chains
};

/// omega = n / (n + min{r0, r1 - 2 delta} + 2 delta); throws on
/// hypothesis violation for the selected b' branch.
double omega(const ExponentInputs& in, BPrimeSign sign = BPrimeSign::NonNegative);
OmegaResult omega_checked(const ExponentInputs& in, BPrimeSign sign = BPrimeSign::NonNegative);

/// p* = (n + 2 omega (sigma - delta)) / (omega (n + min{r0, r1 - 2 delta} + gamma)).
double p_star(const ExponentInputs& in, BPrimeSign sign = BPrimeSign::NonNegative);

/// Intersection of (p*, inf) with the displayed admissible interval;
/// nullopt when the dimension restriction fails or the window is empty.
std::optional<PInterval> admissible_p_range(const ExponentInputs& in,
                                            BPrimeSign sign = BPrimeSign::NonNegative);

/// Gagliardo-Nirenberg interpolation exponent
/// theta = (1/q0 - 1/q + kappa/n) / (1/q0 - 1/q1 + r/n).
double gn_theta(double kappa, double r, double q, double q0, double q1, int n);

/// Guaranteed lower bound r* >= eta - n/2 for data in a negative
/// Sobolev space of order eta in (0, n/2).
double r_star_lower_bound_from_negative_sobolev(double eta, int n);

}  // namespace sevo
