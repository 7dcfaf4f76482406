#pragma once

#include "sevo/monotone_cubic.hpp"

#include <string>
#include <vector>

namespace sevo {

enum class ProfileKind { PowerCutoff, GaussianHat, TabulatedRadial };

/// Radial Fourier magnitude of an initial datum. Only |u_hat| matters
/// for every quantity computed here, so phases are not represented.
/// `shift` multiplies the base amplitude by rho^{-shift} (produced by
/// shift_character).
struct SpectralProfile {
    int n = 1;
    ProfileKind kind = ProfileKind::PowerCutoff;
    double amplitude = 1.0;
    double r_exp = 0.0;   // PowerCutoff: A rho^{r_exp} below the cutoff
    double cutoff = 1.0;  // PowerCutoff support radius
    double width = 1.0;   // GaussianHat: A exp(-(width rho)^2 / 2)
    MonotoneCubic table;
    double table_rho_max = 0.0;
    double shift = 0.0;

    double operator()(double rho) const;

    static SpectralProfile power_cutoff(double A, double r_exp, double cutoff, int n);
    static SpectralProfile gaussian_hat(double A, double width, int n);
    static SpectralProfile tabulated_radial(std::vector<double> rhos, std::vector<double> values,
                                            int n);
};

struct DecayCharacterEstimate {
    enum class Status { Finite, Zero, Infinite, Indeterminate, Degenerate };
    Status status = Status::Finite;
    double r_star = 0.0;
    double P_value = 0.0;
    // fit diagnostics
    double slope = 0.0;
    double residual = 0.0;
    double rho_lo = 0.0;
    double rho_hi = 0.0;
};

struct PNormResult {
    double value = 0.0;
    double sobolev_part = 0.0;
    double indicator_part = 0.0;
    std::string status = "ok";
};

/// Surface area of the unit sphere in R^n.
double sphere_area(int n);

/// c_n \int_0^rho s^{n-1} |u_hat(s)|^2 ds (the inner integral of the
/// decay indicator). Closed forms for PowerCutoff and GaussianHat,
/// adaptive quadrature otherwise.
double low_freq_energy(const SpectralProfile& profile, double rho);

/// rho^{-2r-n} * low_freq_energy(profile, rho).
double decay_indicator(const SpectralProfile& profile, double r, double rho);

/// Fits log low_freq_energy against log rho on the geometric ladder
/// rho_max 2^{-k}, k = 4..16, and reports r* = (slope - n)/2 together
/// with the indicator at the smallest rho.
DecayCharacterEstimate estimate_decay_character(const SpectralProfile& profile);

/// Returns the profile with amplitude rho^{-s} |u_hat(rho)|.
SpectralProfile shift_character(const SpectralProfile& profile, double s);

/// ||h||_{P,eta}: homogeneous Sobolev norm of order eta plus the square
/// root of the estimated decay indicator. eta = 0 gives ||h||_P.
PNormResult p_norm(const SpectralProfile& profile, double eta);

}  // namespace sevo
