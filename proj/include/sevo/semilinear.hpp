#pragma once

#include "sevo/damping.hpp"

#include <complex>
#include <memory>
#include <string>
#include <vector>

namespace sevo {

struct GridSpec {
    int n = 1;        // spatial dimension, 1 or 2
    double L = 40.0;  // half width of the periodic box [-L, L)^n
    int M = 1024;     // points per axis, power of two
};

struct FieldState {
    std::vector<double> u;    // row-major for n = 2
    std::vector<double> u_t;
    double time = 0.0;
};

/// FFTW-backed real transforms for a periodic box, with the discrete
/// frequency magnitudes and Parseval weights precomputed.
class SpectralGrid {
  public:
    explicit SpectralGrid(GridSpec spec);
    ~SpectralGrid();
    SpectralGrid(const SpectralGrid&) = delete;
    SpectralGrid& operator=(const SpectralGrid&) = delete;

    const GridSpec& spec() const { return spec_; }
    std::size_t real_size() const { return real_size_; }
    std::size_t spectral_size() const { return spec_size_; }
    const std::vector<double>& k_mag() const { return k_mag_; }
    const std::vector<double>& sym_weight() const { return sym_weight_; }
    const std::vector<bool>& dealias_keep() const { return dealias_keep_; }
    double cell_volume() const { return cell_volume_; }

    void forward(const double* in, std::complex<double>* out) const;   // unnormalized
    void backward(const std::complex<double>* in, double* out) const;  // normalized by M^n

  private:
    struct Impl;
    GridSpec spec_;
    std::size_t real_size_ = 0, spec_size_ = 0;
    double cell_volume_ = 0.0;
    std::vector<double> k_mag_, sym_weight_;
    std::vector<bool> dealias_keep_;
    std::unique_ptr<Impl> impl_;
};

struct RunOutcome {
    enum class Status { Decayed, BlownUp, Inconclusive };
    Status status = Status::Inconclusive;
    double blowup_time = 0.0;  // meaningful only for BlownUp
    std::vector<double> times;
    std::vector<double> l2;
    std::vector<double> hsigma;
    std::vector<double> ut_l2;
    double initial_l2 = 0.0;
    std::string note;
};

struct SemilinearConfig {
    DampingSpec damping;
    double sigma = 1.0;
    double delta = 0.0;
    double gamma = 0.0;
    double p = 2.0;
    double nonlin_coeff = 1.0;  // 0 disables the nonlinearity
    GridSpec grid;
    double horizon = 100.0;
    double escape_threshold = 1e6;  // multiple of the initial L2 norm
    double dt_safety = 1.0;
    double output_interval = 1.0;
    double rel_tol = 1e-6;
};

/// Multiplies the Fourier coefficients by |k|^order. The zero mode is
/// annihilated for order > 0 and preserved for order = 0.
std::vector<double> apply_fractional(const std::vector<double>& field, double order,
                                     const SpectralGrid& grid);

/// (du, du_t) of u_tt = -(-Lap)^sigma u - b(t)(-Lap)^delta u_t
///                      + coeff * ||D|^gamma u|^p,
/// the power applied pointwise in real space. No de-aliasing here; the
/// stepper applies the 2/3 rule internally.
std::pair<std::vector<double>, std::vector<double>> rhs(const FieldState& state,
                                                        const DampingSpec& spec, double sigma,
                                                        double delta, double gamma, double p,
                                                        const SpectralGrid& grid,
                                                        double nonlin_coeff = 1.0);

RunOutcome solve_semilinear(const SemilinearConfig& cfg, const FieldState& initial);

/// Fujita-type critical exponent 1 + 2 sigma / (n - 2 delta).
double critical_p(double sigma, double delta, int n);

struct BlowupDataCheck {
    enum class Branch { NonDecreasing, Decreasing };
    bool satisfied = false;
    double value = 0.0;
    Branch branch = Branch::NonDecreasing;
    double B0 = 0.0;
    double A0 = 0.0;
};

/// Sign condition on the data integrals from the blow-up theorem,
/// evaluated through the zero Fourier mode of the periodic grid.
BlowupDataCheck check_blowup_data_condition(const DampingSpec& spec, double delta,
                                            const FieldState& data, const SpectralGrid& grid);

std::vector<double> gaussian_field(const GridSpec& grid, double amplitude, double width,
                                   const std::vector<double>& center = {});

}  // namespace sevo
