#ifndef INVDES_DETAIL_HERMITE_HPP
#define INVDES_DETAIL_HERMITE_HPP

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace invdes::detail {

/// Piecewise cubic Hermite interpolant on strictly increasing knots, with
/// linear continuation outside the knot range and exact piecewise
/// integration. The caller supplies the knot derivatives.
class CubicHermite {
public:
    CubicHermite(std::vector<double> x, std::vector<double> y,
                 std::vector<double> d)
        : x_(std::move(x)), y_(std::move(y)), d_(std::move(d)) {
        const std::size_t n = x_.size();
        if (n < 2 || y_.size() != n || d_.size() != n)
            throw std::invalid_argument("hermite table needs matching arrays of >= 2 knots");
        for (std::size_t i = 1; i < n; ++i)
            if (!(x_[i] > x_[i - 1]))
                throw std::invalid_argument("hermite knots must increase");
        integral_.assign(n, 0.0);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const double h = x_[i + 1] - x_[i];
            integral_[i + 1] = integral_[i] +
                h * (0.5 * (y_[i] + y_[i + 1]) + h * (d_[i] - d_[i + 1]) / 12.0);
        }
    }

    double x_front() const { return x_.front(); }
    double x_back() const { return x_.back(); }
    double y_front() const { return y_.front(); }
    double y_back() const { return y_.back(); }

    double eval(double x) const {
        if (x <= x_.front()) return y_.front() + d_.front() * (x - x_.front());
        if (x >= x_.back()) return y_.back() + d_.back() * (x - x_.back());
        const std::size_t i = segment(x);
        const double h = x_[i + 1] - x_[i];
        const double t = (x - x_[i]) / h;
        const double t2 = t * t, t3 = t2 * t;
        return y_[i] * (2 * t3 - 3 * t2 + 1) + h * d_[i] * (t3 - 2 * t2 + t) +
               y_[i + 1] * (-2 * t3 + 3 * t2) + h * d_[i + 1] * (t3 - t2);
    }

    double deriv(double x) const {
        if (x <= x_.front()) return d_.front();
        if (x >= x_.back()) return d_.back();
        const std::size_t i = segment(x);
        const double h = x_[i + 1] - x_[i];
        const double t = (x - x_[i]) / h;
        const double t2 = t * t;
        return (y_[i] * (6 * t2 - 6 * t) + y_[i + 1] * (6 * t - 6 * t2)) / h +
               d_[i] * (3 * t2 - 4 * t + 1) + d_[i + 1] * (3 * t2 - 2 * t);
    }

    double integral_from_front(double x) const {
        if (x <= x_.front()) {
            const double s = x - x_.front();
            return y_.front() * s + 0.5 * d_.front() * s * s;
        }
        if (x >= x_.back()) {
            const double s = x - x_.back();
            return integral_.back() + y_.back() * s + 0.5 * d_.back() * s * s;
        }
        const std::size_t i = segment(x);
        const double h = x_[i + 1] - x_[i];
        const double t = (x - x_[i]) / h;
        const double t2 = t * t, t3 = t2 * t, t4 = t3 * t;
        const double i00 = 0.5 * t4 - t3 + t;
        const double i10 = 0.25 * t4 - (2.0 / 3.0) * t3 + 0.5 * t2;
        const double i01 = -0.5 * t4 + t3;
        const double i11 = 0.25 * t4 - t3 / 3.0;
        return integral_[i] + h * (y_[i] * i00 + h * d_[i] * i10 +
                                   y_[i + 1] * i01 + h * d_[i + 1] * i11);
    }

private:
    std::size_t segment(double x) const {
        auto it = std::upper_bound(x_.begin(), x_.end(), x);
        std::size_t i = static_cast<std::size_t>(it - x_.begin());
        if (i > 0) --i;
        return std::min(i, x_.size() - 2);
    }

    std::vector<double> x_, y_, d_, integral_;
};

/// Fritsch-Carlson derivative estimates: the resulting Hermite interpolant
/// preserves monotonicity of the data. For strictly increasing data the end
/// slopes are floored away from zero so the linear continuation stays
/// invertible.
std::vector<double> fritsch_carlson_slopes(const std::vector<double>& x,
                                           const std::vector<double>& y);

}  // namespace invdes::detail

#endif  // INVDES_DETAIL_HERMITE_HPP
