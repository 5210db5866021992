#ifndef INVDES_LOCALIZATION_HPP
#define INVDES_LOCALIZATION_HPP

#include "invdes/design.hpp"

namespace invdes {

/// A target profile known only on a window, with the range constraint and
/// horizon of the reconstruction.
struct LocalizedTarget {
    SampledProfile profile;  // defined on the window grid
    Interval J;
    double horizon = 0.0;

    Interval window() const { return profile.grid.span(); }
};

/// The design envelope restricted to the dependency interval
/// K_o = [pi(x1+), pi(x2-)] of the target window.
struct RestrictedDesign {
    Interval K_o;
    DesignEnvelope envelope;  // grid clipped to K_o
    bool degenerate = false;  // K_o collapsed to (nearly) a point
};

struct ConsistencyReport {
    Interval K_o;
    double flat_discrepancy = 0.0;   // L1 over K_o
    double sharp_discrepancy = 0.0;  // L1 over K_o
};

/// Constant continuation of the window traces onto a grid that covers the
/// dependency interval plus the horizon's characteristic cone.
SampledProfile extend_profile(const LocalizedTarget& target,
                              const FluxModel& flux);

/// Inverse design of the extended profile, clipped to K_o. Any admissible
/// extension would give the same restriction, so this is the localized
/// design set itself. Degenerate windows (all characteristics focusing in
/// one point) are flagged rather than widened.
RestrictedDesign restricted_design(const LocalizedTarget& target,
                                   const FluxModel& flux);

/// Concatenate two initial data along the backward characteristic through
/// (T, x_bar): left datum left of pi(0) = x_bar - T f'(trace), right datum
/// from there on. The left traces of both evolutions at x_bar must agree
/// within `trace_tol` (GlueMismatchError otherwise).
SampledProfile glue(const SampledProfile& u_left, const SampledProfile& u_right,
                    double x_bar, const FluxModel& flux, double T,
                    double trace_tol);

/// Compares the restricted envelopes of two profiles that agree on
/// [x1, x2]: their flat and sharp designs must coincide on K_o.
ConsistencyReport extension_consistency(const SampledProfile& u_1,
                                        const SampledProfile& u_2,
                                        double x1, double x2,
                                        const FluxModel& flux, double T,
                                        const Interval& J);

}  // namespace invdes

#endif  // INVDES_LOCALIZATION_HPP
