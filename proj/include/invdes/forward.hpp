#ifndef INVDES_FORWARD_HPP
#define INVDES_FORWARD_HPP

#include <vector>

#include "invdes/flux.hpp"
#include "invdes/profile.hpp"

namespace invdes {

/// Evolution of a Lipschitz potential over time t, with the minimizing
/// foot point per node. The foot map is nondecreasing (characteristics do
/// not cross), which the evaluation asserts.
struct EvolutionResult {
    SampledProfile u_t;
    LipschitzProfile U_t;
    std::vector<double> argmin_map;  // minimizer per node of U_t.grid
};

/// Variational evaluation of the evolved potential at time t on `window`:
/// nodewise minimization of U_o(xi) + t f*((x - xi)/t) over the foot
/// window x - t f'(slope range), smallest minimizer kept. The density is
/// read from the envelope derivative at the minimizer, not from finite
/// differences.
EvolutionResult hopf_lax(const LipschitzProfile& U_o, const FluxModel& flux,
                         double t, const Interval& window);

/// Density-level evolution through the potential: primitive, hopf_lax,
/// envelope derivative.
SampledProfile evolve(const SampledProfile& u_o, const FluxModel& flux,
                      double t, const Interval& window);

inline SampledProfile evolve(const SampledProfile& u_o, const FluxModel& flux,
                             double t) {
    return evolve(u_o, flux, t, u_o.grid.span());
}

/// First-order finite volume scheme with the exact convex-flux Riemann
/// solver, constant continuation at the boundaries. Methodologically
/// independent of the variational route; converges to the entropy solution.
SampledProfile godunov(const SampledProfile& u_o, const FluxModel& flux,
                       double t, double cfl);

}  // namespace invdes

#endif  // INVDES_FORWARD_HPP
