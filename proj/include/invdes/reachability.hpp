#ifndef INVDES_REACHABILITY_HPP
#define INVDES_REACHABILITY_HPP

#include <vector>

#include "invdes/flux.hpp"
#include "invdes/profile.hpp"

namespace invdes {

/// Result of the one-sided slope test at horizon T: for every pair x_i < x_j,
/// (f'(u(x_j)) - f'(u(x_i))) / (x_j - x_i) <= 1/T + slack.
struct OleinikVerdict {
    bool ok = true;
    double ratio = 0.0;   // largest difference quotient found
    double bound = 0.0;   // 1/T
    double xi = 0.0;      // maximizing pair
    double xj = 0.0;
};

/// The backward characteristic foot map x -> x - T f'(u(x)), sampled at the
/// cell right endpoints of the target grid (the left-continuous
/// representative). Nondecreasing exactly when the slope test passes.
struct PiMap {
    Grid grid;
    std::vector<double> pi_values;  // pi at node(i+1), i = 0..n-1
    double horizon = 0.0;

    double front() const { return pi_values.front(); }
    double back() const { return pi_values.back(); }
};

/// A maximal open interval skipped by the pi map, i.e. the shadow of a
/// shock. `target_x` is the point where the map jumps.
struct Gap {
    double lo = 0.0;
    double hi = 0.0;
    double target_x = 0.0;

    double width() const { return hi - lo; }
};

/// Closure of the pi-map range, organized as closed intervals alternating
/// with the open gaps between them; together they tile the range hull.
struct ContactSet {
    std::vector<Interval> intervals;
    std::vector<Gap> gaps;

    bool in_gap(double x, std::size_t* index = nullptr) const;
};

/// Default tolerance on the slope ratio: a sampled exactly-critical ramp
/// legitimately hits the bound up to O(dx).
double default_oleinik_slack(const SampledProfile& u, const FluxModel& flux,
                             double T);

/// O(n) test via monotonicity of the pi map; the chord of largest slope is
/// always an adjacent pair on a uniform grid.
OleinikVerdict oleinik_check(const SampledProfile& u, const FluxModel& flux,
                             double T, double slack);

/// Pointwise pi map; throws NotReachableError when the slope test fails.
PiMap pi_map(const SampledProfile& u, const FluxModel& flux, double T,
             double slack);

/// Splits the pi range into contact intervals and gaps. An increment
/// counts as a jump when it exceeds what the locally observed slope could
/// produce; gap endpoints use the one-sided traces of pi.
ContactSet contact_set(const PiMap& pi, const SampledProfile& u,
                       const FluxModel& flux);

/// [pi(x1+), pi(x2-)]: the initial-time window determined by the target
/// window, computed from one-sided traces at the window ends.
Interval dependency_interval(const SampledProfile& u, const FluxModel& flux,
                             double T, double slack);

}  // namespace invdes

#endif  // INVDES_REACHABILITY_HPP
