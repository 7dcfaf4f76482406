#include "sevo/decay_verify.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sevo {

const char* statement_name(Statement s) {
    switch (s) {
        case Statement::Thm1_1_i: return "thm1.1-i";
        case Statement::Thm1_1_ii: return "thm1.1-ii";
        case Statement::Thm1_2_i: return "thm1.2-i";
        case Statement::Thm1_2_ii: return "thm1.2-ii";
        case Statement::Thm1_2_iii: return "thm1.2-iii";
        case Statement::HeatA1: return "heat-a1";
    }
    return "?";
}

const char* abscissa_name(Abscissa a) {
    switch (a) {
        case Abscissa::B: return "B";
        case Abscissa::Bhat: return "Bhat";
        case Abscissa::T: return "t";
    }
    return "?";
}

namespace {

std::string describe_branch(const char* which, double e) {
    std::ostringstream os;
    os << which << " exponent " << e;
    return os.str();
}

}  // namespace

RatePrediction predicted_rate(Statement st, double sigma, double delta, int n, double alpha,
                              double r0, double r1, Quantity quantity) {
    if (st == Statement::HeatA1) {
        // sigma slot carries the diffusion order, alpha the Sobolev index
        if (!(sigma > 0.0)) throw std::invalid_argument("predicted_rate: heat order must be > 0");
        RatePrediction p;
        p.statement = st;
        p.quantity = quantity;
        p.abscissa = Abscissa::Bhat;  // the a-integral when a(t) is carried as a DampingSpec
        p.exponent = -(2.0 * r0 + n + 2.0 * alpha) / (2.0 * sigma);
        p.b_prefactor_power = 0;
        p.branch_note = "squared-norm exponent of the exact diffusion flow";
        return p;
    }

    if (!(sigma >= 1.0) || !(delta >= 0.0 && delta <= sigma / 2.0) || n < 1)
        throw std::invalid_argument("predicted_rate: invalid (sigma, delta, n)");
    if (!(alpha >= 0.0 && alpha <= sigma))
        throw std::invalid_argument("predicted_rate: alpha must lie in [0, sigma]");
    if (!(r0 > -n / 2.0 && r1 - 2.0 * delta > -n / 2.0))
        throw std::domain_error("predicted_rate: requires -n/2 < r0 and -n/2 < r1 - 2 delta");

    const bool positive_delta = delta > 0.0;
    RatePrediction p;
    p.statement = st;
    p.quantity = quantity;
    const double den = 2.0 * (sigma - delta);

    switch (st) {
        case Statement::Thm1_1_i: {
            if (!positive_delta)
                throw std::invalid_argument("Thm1.1 i) applies to delta in (0, sigma/2]");
            p.abscissa = Abscissa::B;
            if (quantity == Quantity::SolutionHalpha) {
                const double e1 = -(r1 + n / 2.0 + alpha - 2.0 * delta) / den;
                const double e0 = -(r0 + n / 2.0 + alpha) / den;
                if (e1 >= e0) {
                    p.exponent = e1;
                    p.b_prefactor_power = -1;
                    p.branch_note = describe_branch("u1 B-branch dominates; t-branch parallel", e0);
                } else {
                    p.exponent = e0;
                    p.b_prefactor_power = 0;
                    p.branch_note = describe_branch("u0 B-branch dominates; t-branch parallel", e1);
                }
            } else {
                const double e1 = -(r1 + n / 2.0 + 2.0 * sigma - 4.0 * delta) / den;
                const double e0 = -(r0 + n / 2.0 + 2.0 * sigma - 2.0 * delta) / den;
                p.b_prefactor_power = -1;
                if (e1 >= e0) {
                    p.exponent = e1;
                    p.branch_note =
                        describe_branch("u1 B-branch dominates; Bhat branch also present", e0);
                } else {
                    p.exponent = e0;
                    p.branch_note =
                        describe_branch("u0 B-branch dominates; Bhat branch also present", e1);
                }
            }
            break;
        }
        case Statement::Thm1_1_ii: {
            if (positive_delta)
                throw std::invalid_argument("Thm1.1 ii) applies to delta = 0");
            p.abscissa = Abscissa::B;
            const double m = std::min(r0, r1);
            if (quantity == Quantity::SolutionHalpha) {
                p.exponent = -(m + n / 2.0 + alpha) / (2.0 * sigma);
                p.b_prefactor_power = 0;
            } else {
                p.exponent = -(m + n / 2.0 + 2.0 * sigma) / (2.0 * sigma);
                p.b_prefactor_power = -1;
            }
            p.branch_note = r0 <= r1 ? "u0 branch dominates" : "u1 branch dominates";
            break;
        }
        case Statement::Thm1_2_i:
        case Statement::Thm1_2_ii:
        case Statement::Thm1_2_iii: {
            const bool delta_zero_form = st == Statement::Thm1_2_iii;
            if (delta_zero_form && positive_delta)
                throw std::invalid_argument("Thm1.2 iii) applies to delta = 0");
            if (!delta_zero_form && !positive_delta)
                throw std::invalid_argument("Thm1.2 i)/ii) apply to delta in (0, sigma/2]");
            const double m = std::min(r0, r1 - 2.0 * delta);
            const double d = delta_zero_form ? 2.0 * sigma : den;
            p.abscissa = st == Statement::Thm1_2_ii ? Abscissa::Bhat : Abscissa::B;
            if (quantity == Quantity::SolutionHalpha) {
                if (alpha == 0.0) {
                    p.exponent = -(n / 2.0 + m) / d;
                } else if (alpha == sigma) {
                    p.exponent = -(n / 2.0 + sigma + m) / d;
                } else {
                    throw std::invalid_argument(
                        "Thm1.2 displays rates for alpha = 0 and alpha = sigma only");
                }
                p.b_prefactor_power = 0;
            } else {
                p.exponent = -(n / 2.0 + 2.0 * sigma - 2.0 * delta + m) / d;
                p.b_prefactor_power = st == Statement::Thm1_2_ii ? 1 : -1;
            }
            p.branch_note = "min{r0, r1 - 2 delta} = " + std::to_string(m);
            break;
        }
        case Statement::HeatA1:
            break;  // handled above
    }
    return p;
}

FitResult fit_observed_rate(const std::vector<double>& times, const std::vector<double>& values,
                            const std::vector<double>& abscissa_values, double window_fraction) {
    const std::size_t m = values.size();
    if (m < 20 || times.size() != m || abscissa_values.size() != m)
        throw std::invalid_argument("fit_observed_rate: need >= 20 aligned samples");
    for (std::size_t i = 0; i < m; ++i) {
        if (!(values[i] > 0.0))
            throw std::invalid_argument("fit_observed_rate: values must be positive");
        if (i > 0 && !(abscissa_values[i] > abscissa_values[i - 1]))
            throw std::invalid_argument("fit_observed_rate: abscissa must be increasing");
    }

    const double x_hi = std::log10(1.0 + abscissa_values.back());
    const double x_lo_all = std::log10(1.0 + abscissa_values.front());
    const double range = x_hi - x_lo_all;
    double win = window_fraction > 0.0 ? window_fraction * range : std::min(1.0, range);
    const double x_lo = x_hi - win;

    std::vector<double> xs, ys;
    FitResult out;
    out.window_hi = abscissa_values.back();
    for (std::size_t i = 0; i < m; ++i) {
        const double x = std::log10(1.0 + abscissa_values[i]);
        if (x >= x_lo) {
            if (xs.empty()) out.window_lo = abscissa_values[i];
            xs.push_back(x);
            ys.push_back(std::log10(values[i]));
        }
    }
    if (xs.size() < 3) throw std::invalid_argument("fit_observed_rate: window too narrow");

    const std::size_t k = xs.size();
    double xb = 0.0, yb = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        xb += xs[i];
        yb += ys[i];
    }
    xb /= k;
    yb /= k;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        sxx += (xs[i] - xb) * (xs[i] - xb);
        sxy += (xs[i] - xb) * (ys[i] - yb);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_observed_rate: degenerate abscissa window");
    out.slope = sxy / sxx;
    double ss = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double r = ys[i] - (yb + out.slope * (xs[i] - xb));
        ss += r * r;
    }
    out.width = k > 2 ? 2.0 * std::sqrt(ss / (k - 2) / sxx) : 0.0;
    out.points = k;
    return out;
}

DecayFitReport verify_rate(const RatePrediction& prediction, const std::vector<double>& times,
                           const std::vector<double>& values,
                           const std::vector<double>& abscissa_values,
                           const std::vector<double>& b_values, double window_fraction,
                           double tolerance) {
    std::vector<double> adjusted = values;
    if (prediction.b_prefactor_power != 0) {
        if (b_values.size() != values.size())
            throw std::invalid_argument("verify_rate: b(t) samples required for the prefactor");
        for (std::size_t i = 0; i < adjusted.size(); ++i)
            adjusted[i] /= std::pow(b_values[i], prediction.b_prefactor_power);
    }
    DecayFitReport rep;
    rep.predicted = prediction.exponent;
    rep.tolerance = tolerance;
    rep.fit = fit_observed_rate(times, adjusted, abscissa_values, window_fraction);
    if (rep.fit.width > 2.0 * tolerance) {
        rep.verdict = DecayFitReport::V::Inconclusive;
    } else if (std::abs(rep.fit.slope - prediction.exponent) <= tolerance) {
        rep.verdict = DecayFitReport::V::Consistent;
    } else {
        rep.verdict = DecayFitReport::V::Violated;
    }
    return rep;
}

HeatFlowResult heat_oracle(const DampingSpec& a_spec, double alpha_order,
                           const SpectralProfile& profile, const std::vector<double>& t_grid,
                           const std::vector<double>& sobolev_orders) {
    if (!(alpha_order > 0.0)) throw std::invalid_argument("heat_oracle: alpha must be > 0");
    if (t_grid.empty()) throw std::invalid_argument("heat_oracle: empty time grid");
    for (double t : t_grid)
        if (!(eval_b(a_spec, t) > 0.0))
            throw std::invalid_argument("heat_oracle: coefficient must stay positive");
    const double t_last = t_grid.back();
    if (t_last > 0.0 &&
        !(eval_Bhat(a_spec, 0.0, t_last) > eval_Bhat(a_spec, 0.0, t_last / 2.0)))
        throw std::invalid_argument("heat_oracle: \\int a must keep increasing on the horizon");

    HeatFlowResult out;
    out.times = t_grid;
    out.orders = sobolev_orders;
    out.norms.assign(sobolev_orders.size(), std::vector<double>(t_grid.size(), 0.0));
    out.a_integral.resize(t_grid.size());

    const double cn = sphere_area(profile.n);
    double top = 1.0;
    switch (profile.kind) {
        case ProfileKind::PowerCutoff: top = profile.cutoff; break;
        case ProfileKind::GaussianHat: top = std::sqrt(160.0) / profile.width; break;
        case ProfileKind::TabulatedRadial: top = profile.table_rho_max; break;
    }

    boost::math::quadrature::exp_sinh<double> es;
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        const double A = eval_Bhat(a_spec, 0.0, t_grid[i]);
        out.a_integral[i] = A;
        for (std::size_t s = 0; s < sobolev_orders.size(); ++s) {
            const double q = profile.n - 1 + 2.0 * sobolev_orders[s];
            double err = 0.0;
            const double v = es.integrate(
                [&](double x) {
                    const double rho = top * std::exp(-x);
                    const double a = profile(rho);
                    return std::pow(rho, q) * a * a *
                           std::exp(-2.0 * std::pow(rho, 2.0 * alpha_order) * A) * rho;
                },
                1e-9, &err);
            if (!std::isfinite(v)) throw std::runtime_error("heat_oracle: quadrature failure");
            out.norms[s][i] = std::sqrt(cn * v);
        }
    }
    return out;
}

EnvelopeConstantFit fit_envelope_constant(const std::vector<double>& kernel_samples,
                                          const std::vector<double>& envelope_samples) {
    if (kernel_samples.size() != envelope_samples.size() || kernel_samples.empty())
        throw std::invalid_argument("fit_envelope_constant: need matching nonempty samples");
    EnvelopeConstantFit out;
    for (std::size_t i = 0; i < kernel_samples.size(); ++i) {
        const double k = std::abs(kernel_samples[i]);
        const double e = envelope_samples[i];
        if (e <= 0.0) {
            if (k > 0.0)
                throw std::domain_error("fit_envelope_constant: envelope vanishes on a nonzero "
                                        "kernel sample");
            continue;
        }
        const double r = k / e;
        if (r > out.c_fit) {
            out.c_fit = r;
            out.worst_index = i;
        }
    }
    out.max_ratio = out.c_fit;
    return out;
}

}  // namespace sevo
