#ifndef INVDES_FLUX_HPP
#define INVDES_FLUX_HPP

#include <functional>
#include <string>
#include <vector>

#include "invdes/common.hpp"

namespace invdes {

/// Strongly convex flux f together with its derivative (characteristic
/// speed), the inverse of the derivative, and the interval of validity.
///
/// The derivative is strictly increasing on `domain`, which makes
/// `inv_deriv` well defined on `slope_domain` = f'(domain). Models are
/// immutable after construction and safe to share across threads.
class FluxModel {
public:
    FluxModel(std::string name,
              std::function<double(double)> eval,
              std::function<double(double)> deriv,
              std::function<double(double)> inv_deriv,
              Interval domain, Interval slope_domain);

    double eval(double u) const { return eval_(u); }
    double deriv(double u) const { return deriv_(u); }
    double inv_deriv(double y) const;

    const Interval& domain() const { return domain_; }
    const Interval& slope_domain() const { return slope_domain_; }
    const std::string& name() const { return name_; }

    /// Largest |f'| over a value interval; exact since f' is monotone.
    double max_abs_speed(const Interval& values) const;

    /// Convex conjugate f*(y) = y (f')^{-1}(y) - f((f')^{-1}(y)).
    /// y must lie in slope_domain (throws std::domain_error otherwise).
    double legendre(double y) const;

    /// The flux u -> f(-u); Legendre transform satisfies g*(p) = f*(-p).
    FluxModel reflected() const;

private:
    std::string name_;
    std::function<double(double)> eval_, deriv_, inv_deriv_;
    Interval domain_, slope_domain_;
};

/// Convex conjugate of a flux, exposed as a function table: value,
/// derivative (= inverse flux derivative, computed by an independent
/// five-point stencil so the identity is checkable), and slope domain.
class LegendreTransform {
public:
    explicit LegendreTransform(const FluxModel& flux);

    double conj_eval(double y) const;
    /// Derivative of the conjugate via finite differences of conj_eval.
    double conj_deriv(double y) const;
    const Interval& domain() const { return domain_; }

private:
    const FluxModel* flux_;
    Interval domain_;
    double fd_step_;
};

/// f(u) = u^2/2 on the whole line.
FluxModel make_burgers_flux();

/// Flux from samples (u_i, f_i) with strictly convex divided differences.
/// The derivative is the shape-preserving (Fritsch-Carlson) cubic through
/// the divided differences at interval midpoints; f is its exact integral
/// anchored at the first sample. Throws std::invalid_argument for fewer
/// than 4 points or non-convex tables.
FluxModel make_table_flux(const std::vector<std::pair<double, double>>& samples);

/// alpha such that f(u) >= alpha + A|u| on the flux domain. Computed at the
/// tangency points f'(u) = +-A; throws std::domain_error when the slope A
/// is not attained inside the slope domain.
double lower_bound_certificate(const FluxModel& flux, double A);

/// Discrete validation of strong convexity: strictly increasing derivative,
/// inversion identity, midpoint convexity on a sample grid. Throws
/// std::invalid_argument on failure.
void validate_flux(const FluxModel& flux);

}  // namespace invdes

#endif  // INVDES_FLUX_HPP
