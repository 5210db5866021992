#ifndef INVDES_TRAFFIC_HPP
#define INVDES_TRAFFIC_HPP

#include <functional>
#include <string>
#include <vector>

#include "invdes/localization.hpp"

namespace invdes {

/// Speed law v(rho) with jam density R and working density cap rho_bar.
/// The cap must stay strictly below the density of maximal flow so that the
/// flow-to-density inversion keeps a finite derivative.
struct SpeedLaw {
    std::function<double(double)> v, dv, ddv;
    double R = 1.0;
    double rho_bar = 0.0;
    std::string name;
};

SpeedLaw greenshields_law(double v_max, double R, double rho_bar);

/// Speed law from (rho, v) samples via shape-preserving interpolation.
SpeedLaw speed_law_from_table(
    const std::vector<std::pair<double, double>>& samples, double rho_bar);

/// The flux of the flow-variable formulation: f(q) = rho iff q = rho v(rho)
/// on the free-flow branch [0, rho_bar], tabulated exactly on a dense
/// density grid (values and derivatives in closed form, no root finding).
struct TrafficFlux {
    FluxModel flux;
    double q_bar = 0.0;    // rho_bar * v(rho_bar), flow cap
    double rho_bar = 0.0;
    double rho_hat = 0.0;  // argmax of rho v(rho)
};

/// Throws std::invalid_argument when the speed law violates its assumptions
/// (v(R) != 0, rho*v not strictly concave) or rho_bar >= rho_hat.
TrafficFlux flux_from_speed(const SpeedLaw& law);

/// Measured outflow on a time window, values capped by the flow cap.
struct OutflowRecord {
    SampledProfile q_out;  // time grid on [T1, T2]
    double q_bar = 0.0;
};

OutflowRecord make_outflow_record(SampledProfile q_out, const TrafficFlux& f);

/// Largest road length compatible with the record: 1 / max difference
/// quotient of f'(q_out). A genuine upward jump of f'(q_out) admits no
/// positive length; it is flagged and the bound reported as zero.
struct RoadLengthBound {
    double L_max = kInf;
    double ratio = 0.0;      // max difference quotient on the grid
    bool jump_infeasible = false;
    double t_i = 0.0, t_j = 0.0;  // maximizing pair
};

RoadLengthBound max_road_length(const OutflowRecord& rec, const TrafficFlux& f);

/// [tau_1, tau_2] = [T_1 - L f'(q_out(T_1+)), T_2 - L f'(q_out(T_2-))].
/// Throws NotReachableError when L exceeds the road length bound.
Interval upstream_window(const OutflowRecord& rec, double L,
                         const TrafficFlux& f);

/// A time where the reconstructed inflow potential is kinked, with the
/// slope jump (the flow released at that instant).
struct TrafficEvent {
    double tau = 0.0;
    double jump = 0.0;
};

/// Extremal inflow reconstructions on the upstream window: the full inverse
/// design machinery applied with time as the space variable and the road
/// length as the horizon, constraint [0, q_bar].
struct InflowEnvelope {
    Interval window;  // [tau_1, tau_2]
    SampledProfile q_flat, q_sharp;
    LipschitzProfile Q_flat;
    std::vector<TrafficEvent> kinks;  // at the default threshold
    RestrictedDesign design;
    double L = 0.0;
    double q_bar = 0.0;
};

InflowEnvelope inflow_envelope(const OutflowRecord& rec, double L,
                               const TrafficFlux& f);

/// Cumulative-flow band test: q_in is an admissible inflow iff its running
/// integral from tau_1 stays between those of q_flat and q_sharp.
struct InflowVerdict {
    bool admissible = true;
    double witness = 0.0;  // first violating time
    double excess = 0.0;
};

InflowVerdict admissible_inflow(const SampledProfile& q_in,
                                const InflowEnvelope& env);

/// Kinks of the reconstructed potentials: jumps of q_flat above the
/// threshold plus the cone meeting points inside each gap of the sharp
/// reconstruction (where an interrupted flow must have resumed).
std::vector<TrafficEvent> detect_events(const InflowEnvelope& env,
                                        double kink_threshold);

double default_kink_threshold(const InflowEnvelope& env);

}  // namespace invdes

#endif  // INVDES_TRAFFIC_HPP
