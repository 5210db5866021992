#ifndef INVDES_DESIGN_HPP
#define INVDES_DESIGN_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "invdes/forward.hpp"
#include "invdes/reachability.hpp"

namespace invdes {

/// The two extremal initial data for a target profile under a range
/// constraint J, together with their primitives, the contact structure and
/// the base point. The pair determines the full set of admissible initial
/// data: a profile belongs to it iff its primitive stays between U_flat and
/// U_sharp (relative to the base node) and its values stay in J.
struct DesignEnvelope {
    Grid grid_o;
    LipschitzProfile U_flat, U_sharp;
    SampledProfile u_flat, u_sharp;
    Interval J;
    ContactSet contact;
    double horizon = 0.0;
    double x_check = 0.0;            // base point on the target grid
    double y_check = 0.0;            // its backward characteristic foot
    int base_index = 0;              // grid_o node at y_check
    std::vector<double> argmax_map;  // maximizing foot per grid_o node
    bool has_sharp = false;

    /// Primitive band at node k, relative to the base node.
    double band_lo(int k) const {
        return U_flat.node_values[k] - U_flat.node_values[base_index];
    }
    double band_hi(int k) const {
        const auto& u = has_sharp ? U_sharp : U_flat;
        return u.node_values[k] - u.node_values[base_index];
    }
};

struct MembershipVerdict {
    bool member = true;
    std::string reason;   // "range" or "band" when rejected
    double witness = 0.0;  // position of the first violation
    double excess = 0.0;   // distance past the constraint
};

struct TvHullReport {
    double tv_target = 0.0, tv_flat = 0.0;
    Interval hull_target, hull_flat;
    double tv_tolerance = 0.0, hull_tolerance = 0.0;
    bool tv_ok = true, hull_ok = true;
};

/// Minimal-variation initial datum via the sup formula
/// U_flat(y) = max_xi [ U_T(xi) - T f*((xi - y)/T) ], with the density read
/// from the envelope derivative at the (smallest, monotone) maximizer.
/// Throws NotReachableError when the slope condition fails and
/// ConstraintInfeasibleError when the target leaves J.
DesignEnvelope flat_design(const SampledProfile& u_T, const FluxModel& flux,
                           double T, const Interval& J, double x_check);

/// Fills the maximal envelope: equal to the flat one on the contact set,
/// and on each gap the smaller of the two admissible cones anchored at the
/// gap endpoints. Requires a compact J (throws SharpUndefinedError).
DesignEnvelope sharp_design(DesignEnvelope env);

/// Both steps.
DesignEnvelope design_envelope(const SampledProfile& u_T, const FluxModel& flux,
                               double T, const Interval& J, double x_check);

/// Primitive band test: member iff values stay in J and the primitive based
/// at the base node stays inside [band_lo, band_hi] at every node, within
/// dx * width(J). The witness is the violation nearest to the base.
MembershipVerdict membership(const SampledProfile& u_o,
                             const DesignEnvelope& env);

/// Derivative of the convex combination (1 - lambda) U_flat + lambda U_sharp.
SampledProfile sample_design(const DesignEnvelope& env, double lambda);

/// Random element of the design set: midpoint-perturbation bisection of the
/// primitive band with slopes kept in J. Deterministic per seed; always a
/// member.
SampledProfile sample_design_random(const DesignEnvelope& env,
                                    std::uint64_t seed);

/// Flat design through the reversed equation: evolve -u_T forward under
/// u -> f(-u) for time T and negate. An independent construction used to
/// cross-check flat_design.
enum class ReversalScheme { HopfLax, Godunov };
SampledProfile flat_via_reversal(const SampledProfile& u_T, const FluxModel& flux,
                                 double T, const Interval& window,
                                 ReversalScheme scheme = ReversalScheme::HopfLax,
                                 double cfl = 0.45);

/// Total-variation and range-hull comparison between target and flat
/// design; both are preserved by the construction up to grid effects.
TvHullReport tv_and_hull_report(const SampledProfile& u_T,
                                const DesignEnvelope& env);

}  // namespace invdes

#endif  // INVDES_DESIGN_HPP
