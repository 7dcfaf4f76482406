#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace sevo {

/// Fritsch-Carlson monotone cubic Hermite interpolant. Monotone data
/// produce a monotone interpolant; evaluation outside [x.front(),
/// x.back()] throws.
class MonotoneCubic {
  public:
    MonotoneCubic() = default;

    MonotoneCubic(std::vector<double> x, std::vector<double> y)
        : x_(std::move(x)), y_(std::move(y)) {
        const std::size_t n = x_.size();
        if (n < 2 || y_.size() != n)
            throw std::invalid_argument("MonotoneCubic: need >= 2 matching samples");
        for (std::size_t i = 1; i < n; ++i)
            if (!(x_[i] > x_[i - 1]))
                throw std::invalid_argument("MonotoneCubic: abscissae must be increasing");

        std::vector<double> h(n - 1), d(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            h[i] = x_[i + 1] - x_[i];
            d[i] = (y_[i + 1] - y_[i]) / h[i];
        }
        m_.assign(n, 0.0);
        if (n == 2) {
            m_[0] = m_[1] = d[0];
        } else {
            m_[0] = endpoint_slope(h[0], h[1], d[0], d[1]);
            m_[n - 1] = endpoint_slope(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
            for (std::size_t i = 1; i + 1 < n; ++i) {
                if (d[i - 1] * d[i] <= 0.0) {
                    m_[i] = 0.0;
                } else {
                    const double w1 = 2.0 * h[i] + h[i - 1];
                    const double w2 = h[i] + 2.0 * h[i - 1];
                    m_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
                }
            }
        }
    }

    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }

    double operator()(double x) const {
        const auto [i, s, h] = locate(x);
        const double t = s / h;
        const double t2 = t * t, t3 = t2 * t;
        return y_[i] * (2 * t3 - 3 * t2 + 1) + h * m_[i] * (t3 - 2 * t2 + t) +
               y_[i + 1] * (-2 * t3 + 3 * t2) + h * m_[i + 1] * (t3 - t2);
    }

    double derivative(double x) const {
        const auto [i, s, h] = locate(x);
        const double t = s / h;
        const double t2 = t * t;
        return (y_[i] * (6 * t2 - 6 * t) / h + m_[i] * (3 * t2 - 4 * t + 1) +
                y_[i + 1] * (-6 * t2 + 6 * t) / h + m_[i + 1] * (3 * t2 - 2 * t));
    }

    double second_derivative(double x) const {
        const auto [i, s, h] = locate(x);
        const double t = s / h;
        return (y_[i] * (12 * t - 6) / (h * h) + m_[i] * (6 * t - 4) / h +
                y_[i + 1] * (-12 * t + 6) / (h * h) + m_[i + 1] * (6 * t - 2) / h);
    }

  private:
    static double endpoint_slope(double h0, double h1, double d0, double d1) {
        double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (m * d0 <= 0.0) return 0.0;
        if (d0 * d1 < 0.0 && std::abs(m) > 3.0 * std::abs(d0)) return 3.0 * d0;
        return m;
    }

    struct Seg {
        std::size_t i;
        double s;
        double h;
    };

    Seg locate(double x) const {
        if (x < x_.front() || x > x_.back())
            throw std::out_of_range("MonotoneCubic: evaluation outside tabulated range");
        std::size_t lo = 0, hi = x_.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            (x_[mid] <= x ? lo : hi) = mid;
        }
        return {lo, x - x_[lo], x_[lo + 1] - x_[lo]};
    }

    std::vector<double> x_, y_, m_;
};

}  // namespace sevo
