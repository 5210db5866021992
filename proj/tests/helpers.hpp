#ifndef INVDES_TESTS_HELPERS_HPP
#define INVDES_TESTS_HELPERS_HPP

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "invdes/flux.hpp"
#include "invdes/profile.hpp"

namespace testing {

using invdes::FluxModel;
using invdes::Grid;
using invdes::Interval;
using invdes::SampledProfile;

/// Profile from a closed-form function, sampled at cell right endpoints
/// (the left-continuous representative).
inline SampledProfile make_profile(double x0, double dx, int n,
                                   const std::function<double(double)>& f) {
    Grid g(x0, dx, n);
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = f(g.node(i + 1));
    return SampledProfile(g, std::move(v));
}

inline SampledProfile make_profile_on(const Interval& span, double dx,
                                      const std::function<double(double)>& f) {
    const int n = static_cast<int>(std::lround(span.width() / dx));
    return make_profile(span.lo, dx, n, f);
}

/// Midpoint sampling: the step sequence whose exact integral matches the
/// integral of any affine f. Preferred when discretizing smooth profiles.
inline SampledProfile make_profile_midpoint(const Interval& span, double dx,
                                            const std::function<double(double)>& f) {
    const int n = static_cast<int>(std::lround(span.width() / dx));
    Grid g(span.lo, dx, n);
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = f(g.node(i) + 0.5 * dx);
    return SampledProfile(g, std::move(v));
}

/// O(n^2) pair scan of the one-sided slope quotient; the independent oracle
/// for the O(n) check.
inline double oleinik_pair_scan(const SampledProfile& u, const FluxModel& flux) {
    double worst = -invdes::kInf;
    std::vector<double> fp(u.values.size());
    for (std::size_t i = 0; i < u.values.size(); ++i) fp[i] = flux.deriv(u.values[i]);
    for (std::size_t i = 0; i < fp.size(); ++i)
        for (std::size_t j = i + 1; j < fp.size(); ++j)
            worst = std::max(worst, (fp[j] - fp[i]) /
                                        (static_cast<double>(j - i) * u.grid.dx));
    return worst;
}

/// Brute-force convex conjugate: sup over a fine grid of y*u - f(u).
inline double legendre_brute_force(const FluxModel& flux, double y,
                                   const Interval& u_range, int samples = 200000) {
    double best = -invdes::kInf;
    for (int i = 0; i <= samples; ++i) {
        const double u = u_range.lo + u_range.width() * i / samples;
        best = std::max(best, y * u - flux.eval(u));
    }
    return best;
}

/// Random profile satisfying the slope condition at horizon T with margin.
/// The characteristic speed phi = f'(u) is a few smooth modes whose climb
/// rate stays below 0.7/T, with one to three isolated downward jumps
/// (shocks-to-be); downward jumps never violate the condition.
inline SampledProfile random_feasible_profile(std::mt19937_64& rng,
                                              const FluxModel& flux, double T,
                                              const Interval& span, double dx,
                                              const Interval& values) {
    const int n = static_cast<int>(std::lround(span.width() / dx));
    const double phi_lo = flux.deriv(values.lo);
    const double phi_hi = flux.deriv(values.hi);
    const double range = phi_hi - phi_lo;
    std::uniform_real_distribution<double> u01(0.0, 1.0);

    struct Mode {
        double amp, freq, phase;
    };
    std::vector<Mode> modes(3);
    double climb_budget = 0.7 / T;
    for (Mode& m : modes) {
        m.freq = (0.5 + 2.5 * u01(rng)) * 3.141592653589793 / span.width();
        const double a_rate = climb_budget * (0.2 + 0.5 * u01(rng)) / modes.size();
        m.amp = std::min(a_rate / m.freq, 0.25 * range);
        m.phase = 6.283185307179586 * u01(rng);
    }
    std::uniform_int_distribution<int> njumps(1, 3);
    const int k = njumps(rng);
    std::vector<std::pair<double, double>> drops(k);  // position, size
    for (auto& d : drops)
        d = {span.lo + (0.15 + 0.7 * u01(rng)) * span.width(),
             (0.2 + 0.3 * u01(rng)) * range};

    const double mid = 0.5 * (phi_lo + phi_hi) + 0.2 * range * (u01(rng) - 0.5);
    std::vector<double> v(n);
    const Grid g(span.lo, dx, n);
    for (int i = 0; i < n; ++i) {
        const double x = g.node(i + 1);
        double phi = mid;
        for (const Mode& m : modes) phi += m.amp * std::sin(m.freq * x + m.phase);
        for (const auto& d : drops)
            if (x > d.first) phi -= d.second;
        phi = std::min(std::max(phi, phi_lo), phi_hi);
        v[i] = flux.inv_deriv(phi);
    }
    return SampledProfile(g, std::move(v));
}

/// Same construction with one genuine upward jump of the characteristic
/// speed inserted mid-profile.
inline SampledProfile random_infeasible_profile(std::mt19937_64& rng,
                                                const FluxModel& flux, double T,
                                                const Interval& span, double dx,
                                                const Interval& values) {
    SampledProfile u = random_feasible_profile(rng, flux, T, span, dx, values);
    const double phi_lo = flux.deriv(values.lo);
    const double phi_hi = flux.deriv(values.hi);
    std::uniform_int_distribution<int> pick(u.grid.n / 4, 3 * u.grid.n / 4);
    std::uniform_real_distribution<double> mag(0.3, 0.6);
    const int k = pick(rng);
    const double jump = mag(rng) * (phi_hi - phi_lo);
    for (int i = k; i < u.grid.n; ++i) {
        const double phi = std::min(flux.deriv(u.values[i]) + jump, phi_hi);
        u.values[i] = flux.inv_deriv(phi);
    }
    // Make sure the jump survived the cap.
    u.values[k - 1] = flux.inv_deriv(phi_lo);
    u.values[k] = flux.inv_deriv(phi_hi);
    return u;
}

}  // namespace testing

#endif  // INVDES_TESTS_HELPERS_HPP
