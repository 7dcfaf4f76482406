#pragma once

#include "sevo/damping.hpp"

#include <optional>
#include <string>

namespace sevo {

/// Zone-splitting constants. Defaults: N = 2, eps = 0.1, d0 = 2
/// (d0 above 4*C1/3 for the families exercised here); M splits the
/// delta = sigma/2 corollaries.
struct ZoneParams {
    double N = 2.0;
    double eps = 0.1;
    double d0 = 2.0;
    double M = 1.0;
};

enum class ZoneLabel { Hyp, Pd, Red, Ell, Diss };

const char* zone_name(ZoneLabel z);

enum class EnvelopeKind { K1, DtK1, K0, DtK0 };
enum class EnvelopeRegime { High, Mid, Low };

/// sqrt| |xi|^{2 sigma} - |xi|^{4 delta} b^2(t)/4 |.
double weight(const DampingSpec& spec, double t, double xi_mag);

/// |xi|^{2 sigma} - |xi|^{4 delta} b^2(t)/4 - |xi|^{2 delta} b'(t)/2.
double mass(const DampingSpec& spec, double t, double xi_mag);

/// Classifies (t, xi) with ties broken toward the earlier label in
/// Diss < Ell < Red < Pd < Hyp. For delta = 0 the dissipative test
/// degenerates and those points fall to Ell.
ZoneLabel classify(const DampingSpec& spec, const ZoneParams& params, double t, double xi_mag);

/// Solves b(t) = 2 |xi|^{sigma-2delta} / sqrt(1-eps^2); nullopt when no
/// t >= 0 crosses. `horizon` bounds the bisection for tabulated specs.
std::optional<double> curve_t_ell(const DampingSpec& spec, const ZoneParams& params,
                                  double xi_mag, double horizon = 1e9);

/// Solves |xi|^{2 delta} (1+t) b(t) = d0 (left side increasing);
/// nullopt when already above d0 at t = 0. Requires delta > 0.
std::optional<double> curve_t_diss(const DampingSpec& spec, const ZoneParams& params,
                                   double xi_mag);

/// Omega(s,t) = (max{b(s), b(t)} sqrt(1-eps^2)/2)^{1/(sigma-2delta)}.
double omega_threshold(const DampingSpec& spec, const ZoneParams& params, double s, double t);

/// Lambda(t) = (d0 / ((1+t) b(t)))^{1/(2 delta)}.
double lambda_threshold(const DampingSpec& spec, const ZoneParams& params, double t);

EnvelopeRegime envelope_regime(const DampingSpec& spec, const ZoneParams& params, double t,
                               double s, double xi_mag);

/// Right-hand side of the kernel corollaries with every implicit
/// constant set to 1 and beta = eps. The regime overload validates
/// membership and throws for samples outside the stated regime.
double bound_envelope(EnvelopeKind kind, const DampingSpec& spec, const ZoneParams& params,
                      double t, double s, double xi_mag);
double bound_envelope(EnvelopeKind kind, EnvelopeRegime regime, const DampingSpec& spec,
                      const ZoneParams& params, double t, double s, double xi_mag);

}  // namespace sevo
