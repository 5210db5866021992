#include "invdes/flux.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "invdes/detail/hermite.hpp"

namespace invdes {

namespace detail {

std::vector<double> fritsch_carlson_slopes(const std::vector<double>& x,
                                           const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n)
        throw std::invalid_argument("slope estimation needs >= 2 matching points");
    std::vector<double> h(n - 1), delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x[i + 1] - x[i];
        if (!(h[i] > 0.0)) throw std::invalid_argument("abscissae must increase");
        delta[i] = (y[i + 1] - y[i]) / h[i];
    }
    auto endpoint = [](double h0, double h1, double d0, double d1) {
        double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (d * d0 <= 0.0) return 0.0;
        if (std::abs(d) > 3.0 * std::abs(d0)) return 3.0 * d0;
        return d;
    };
    std::vector<double> d(n, 0.0);
    if (n == 2) {
        d[0] = d[1] = delta[0];
    } else {
        d[0] = endpoint(h[0], h[1], delta[0], delta[1]);
        d[n - 1] = endpoint(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (delta[i - 1] * delta[i] <= 0.0) {
                d[i] = 0.0;
            } else {
                const double w1 = 2.0 * h[i] + h[i - 1];
                const double w2 = h[i] + 2.0 * h[i - 1];
                d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
            }
        }
    }
    // Keep the end slopes strictly positive for increasing data, so the
    // linear continuation remains invertible. Any value in [0, 3*delta]
    // preserves monotonicity of the boundary cubic.
    if (delta.front() > 0.0) d[0] = std::max(d[0], 0.25 * delta.front());
    if (delta.back() > 0.0) d[n - 1] = std::max(d[n - 1], 0.25 * delta.back());
    return d;
}

}  // namespace detail

namespace {

double bisect_increasing(const std::function<double(double)>& g, double target,
                         double lo, double hi, double rel_tol) {
    if (g(lo) - target > 0.0) return lo;
    if (g(hi) - target < 0.0) return hi;
    const double scale = std::max({std::abs(lo), std::abs(hi), 1.0});
    while (hi - lo > rel_tol * scale) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (g(mid) - target <= 0.0) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

void validate_flux(const FluxModel& flux) {
    // Discrete checks: f' strictly increasing, inversion identity, and the
    // midpoint convexity inequality, all on a sample grid over the domain.
    const Interval dom = flux.domain();
    const double lo = std::isfinite(dom.lo) ? dom.lo : -10.0;
    const double hi = std::isfinite(dom.hi) ? dom.hi : 10.0;
    const int m = 64;
    const double h = (hi - lo) / m;
    if (!(h > 0.0)) throw std::invalid_argument("flux domain is empty");
    double prev = flux.deriv(lo);
    for (int i = 1; i <= m; ++i) {
        const double fp = flux.deriv(lo + i * h);
        if (!(fp > prev))
            throw std::invalid_argument("flux derivative is not strictly increasing");
        prev = fp;
    }
    const double scale = std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
    for (int i = 0; i <= m; ++i) {
        const double u = lo + i * h;
        const double back = flux.inv_deriv(flux.deriv(u));
        if (std::abs(back - u) > 1e-7 * scale)
            throw std::invalid_argument("inverse derivative does not invert the derivative");
    }
    for (int i = 0; i + 2 <= m; i += 2) {
        const double a = lo + i * h, b = lo + (i + 2) * h;
        const double mid = flux.eval(0.5 * (a + b));
        if (mid > 0.5 * (flux.eval(a) + flux.eval(b)) + 1e-12 * scale)
            throw std::invalid_argument("flux fails the midpoint convexity check");
    }
}

FluxModel::FluxModel(std::string name,
                     std::function<double(double)> eval,
                     std::function<double(double)> deriv,
                     std::function<double(double)> inv_deriv,
                     Interval domain, Interval slope_domain)
    : name_(std::move(name)),
      eval_(std::move(eval)),
      deriv_(std::move(deriv)),
      inv_deriv_(std::move(inv_deriv)),
      domain_(domain),
      slope_domain_(slope_domain) {}

double FluxModel::inv_deriv(double y) const {
    const double tol = 1e-9 * std::max(1.0, std::abs(y));
    if (y < slope_domain_.lo - tol || y > slope_domain_.hi + tol)
        throw std::domain_error("slope " + std::to_string(y) +
                                " outside the covered range [" +
                                std::to_string(slope_domain_.lo) + ", " +
                                std::to_string(slope_domain_.hi) + "]");
    return inv_deriv_(slope_domain_.clamp(y));
}

double FluxModel::max_abs_speed(const Interval& values) const {
    const double a = deriv(domain_.clamp(values.lo));
    const double b = deriv(domain_.clamp(values.hi));
    return std::max(std::abs(a), std::abs(b));
}

double FluxModel::legendre(double y) const {
    const double u = inv_deriv(y);
    return y * u - eval_(u);
}

FluxModel FluxModel::reflected() const {
    auto f = eval_;
    auto fp = deriv_;
    auto fpinv = inv_deriv_;
    const Interval dom{-domain_.hi, -domain_.lo};
    const Interval slopes{-slope_domain_.hi, -slope_domain_.lo};
    return FluxModel(
        name_ + "-reflected",
        [f](double u) { return f(-u); },
        [fp](double u) { return -fp(-u); },
        [fpinv](double y) { return -fpinv(-y); },
        dom, slopes);
}

LegendreTransform::LegendreTransform(const FluxModel& flux)
    : flux_(&flux), domain_(flux.slope_domain()) {
    const double span = domain_.bounded() ? domain_.width() : 2.0;
    fd_step_ = std::max(1e-4, 1e-4 * span);
}

double LegendreTransform::conj_eval(double y) const { return flux_->legendre(y); }

double LegendreTransform::conj_deriv(double y) const {
    // Five-point stencil, shrunk near the domain boundary.
    double h = fd_step_;
    if (domain_.bounded()) {
        h = std::min({h, 0.25 * (y - domain_.lo), 0.25 * (domain_.hi - y)});
        if (h <= 0.0)
            throw std::domain_error("conjugate derivative queried at the domain edge");
    }
    const double f1 = flux_->legendre(y - 2 * h);
    const double f2 = flux_->legendre(y - h);
    const double f3 = flux_->legendre(y + h);
    const double f4 = flux_->legendre(y + 2 * h);
    return (f1 - 8 * f2 + 8 * f3 - f4) / (12 * h);
}

FluxModel make_burgers_flux() {
    return FluxModel(
        "burgers",
        [](double u) { return 0.5 * u * u; },
        [](double u) { return u; },
        [](double y) { return y; },
        Interval{-kInf, kInf}, Interval{-kInf, kInf});
}

FluxModel make_table_flux(const std::vector<std::pair<double, double>>& samples) {
    if (samples.size() < 4)
        throw std::invalid_argument("tabulated flux needs at least 4 samples");
    std::vector<double> u(samples.size()), f(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        u[i] = samples[i].first;
        f[i] = samples[i].second;
        if (i > 0 && u[i] <= u[i - 1])
            throw std::invalid_argument("flux samples must have increasing abscissae");
    }
    // The derivative is interpolated through the divided differences at the
    // interval midpoints; convexity means they must strictly increase.
    std::vector<double> mid(samples.size() - 1), dd(samples.size() - 1);
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
        mid[i] = 0.5 * (u[i] + u[i + 1]);
        dd[i] = (f[i + 1] - f[i]) / (u[i + 1] - u[i]);
        if (i > 0 && dd[i] <= dd[i - 1])
            throw std::invalid_argument("flux table is not strictly convex");
    }

    auto fp = std::make_shared<detail::CubicHermite>(
        mid, dd, detail::fritsch_carlson_slopes(mid, dd));
    const Interval dom{u.front(), u.back()};
    const double f0 = f.front();
    const double u0 = u.front();
    const Interval slopes{fp->eval(dom.lo), fp->eval(dom.hi)};

    auto eval = [fp, f0, u0](double x) {
        return f0 + (fp->integral_from_front(x) - fp->integral_from_front(u0));
    };
    auto deriv = [fp](double x) { return fp->eval(x); };
    auto inv = [fp, dom](double y) {
        return bisect_increasing([fp](double x) { return fp->eval(x); }, y,
                                 dom.lo, dom.hi, 1e-12);
    };
    FluxModel model("table", eval, deriv, inv, dom, slopes);
    validate_flux(model);
    return model;
}

double lower_bound_certificate(const FluxModel& flux, double A) {
    if (!std::isfinite(A)) throw std::domain_error("slope bound must be finite");
    const Interval slopes = flux.slope_domain();
    if (slopes.hi < A || slopes.lo > -A)
        throw std::domain_error("flux derivative never attains the requested slope");
    // h(u) = f(u) - A|u| is convex on each half line. On u >= 0 the minimum
    // sits where f'(u) = A, on u <= 0 where f'(u) = -A, with the kink at the
    // origin and finite domain edges as the remaining candidates.
    const Interval dom = flux.domain();
    auto h = [&](double u) { return flux.eval(u) - A * std::abs(u); };
    double alpha = kInf;
    const double xpos = flux.inv_deriv(slopes.clamp(A));
    const double xneg = flux.inv_deriv(slopes.clamp(-A));
    alpha = std::min(alpha, h(dom.clamp(std::max(xpos, 0.0))));
    alpha = std::min(alpha, h(dom.clamp(std::min(xneg, 0.0))));
    if (dom.contains(0.0)) alpha = std::min(alpha, h(0.0));
    if (std::isfinite(dom.lo)) alpha = std::min(alpha, h(dom.lo));
    if (std::isfinite(dom.hi)) alpha = std::min(alpha, h(dom.hi));
    return alpha;
}

}  // namespace invdes
