#include "invdes/localization.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "invdes/forward.hpp"

namespace invdes {

namespace {

// Clip an envelope to the smallest node range of grid_o covering K_o, so
// the restriction carries genuine values on all of K_o.
DesignEnvelope clip_envelope(const DesignEnvelope& env, const Interval& K_o) {
    const Grid& go = env.grid_o;
    int k_lo = static_cast<int>(std::floor((K_o.lo - go.x0) / go.dx + 1e-9));
    int k_hi = static_cast<int>(std::ceil((K_o.hi - go.x0) / go.dx - 1e-9));
    k_lo = std::clamp(k_lo, 0, go.n);
    k_hi = std::clamp(k_hi, 0, go.n);
    if (k_hi - k_lo < 2) {
        k_lo = std::max(0, k_lo - 1);
        k_hi = std::min(go.n, k_lo + 2);
        k_lo = k_hi - 2;
    }

    DesignEnvelope out;
    out.J = env.J;
    out.horizon = env.horizon;
    out.x_check = env.x_check;
    out.y_check = env.y_check;
    out.has_sharp = env.has_sharp;
    out.grid_o = Grid(go.node(k_lo), go.dx, k_hi - k_lo);
    out.base_index = std::clamp(env.base_index - k_lo, 0, out.grid_o.n);

    auto slice_nodes = [&](const std::vector<double>& v) {
        return std::vector<double>(v.begin() + k_lo, v.begin() + k_hi + 1);
    };
    auto slice_cells = [&](const std::vector<double>& v) {
        return std::vector<double>(v.begin() + k_lo, v.begin() + k_hi);
    };
    out.U_flat = LipschitzProfile(out.grid_o, slice_nodes(env.U_flat.node_values), env.J);
    out.u_flat = SampledProfile(out.grid_o, slice_cells(env.u_flat.values), env.J);
    if (env.has_sharp) {
        out.U_sharp = LipschitzProfile(out.grid_o, slice_nodes(env.U_sharp.node_values), env.J);
        out.u_sharp = SampledProfile(out.grid_o, slice_cells(env.u_sharp.values), env.J);
    }
    out.argmax_map = slice_nodes(env.argmax_map);
    // Gaps intersecting the clipped window survive; contact intervals are
    // re-tiled against them.
    const Interval span = out.grid_o.span();
    double lo = span.lo;
    for (const Gap& gap : env.contact.gaps) {
        if (gap.hi <= span.lo || gap.lo >= span.hi) continue;
        Gap clipped{std::max(gap.lo, span.lo), std::min(gap.hi, span.hi), gap.target_x};
        out.contact.intervals.push_back({lo, clipped.lo});
        out.contact.gaps.push_back(clipped);
        lo = clipped.hi;
    }
    out.contact.intervals.push_back({lo, span.hi});
    return out;
}

}  // namespace

SampledProfile extend_profile(const LocalizedTarget& target,
                              const FluxModel& flux) {
    const SampledProfile& u = target.profile;
    const Grid& g = u.grid;
    const double T = target.horizon;
    const double slack = default_oleinik_slack(u, flux, T);
    const Interval K_o = dependency_interval(u, flux, T, slack);

    const double margin = T * flux.max_abs_speed(target.J) + 2.0 * g.dx;
    const double lo = std::min(K_o.lo, g.x0) - margin;
    const double hi = std::max(K_o.hi, g.right()) + margin;
    const Grid wide = Grid::aligned(g.x0, lo, hi, g.dx);

    std::vector<double> v(wide.n);
    for (int i = 0; i < wide.n; ++i) v[i] = u.at(wide.node(i + 1));
    return SampledProfile(wide, std::move(v), target.J);
}

RestrictedDesign restricted_design(const LocalizedTarget& target,
                                   const FluxModel& flux) {
    const SampledProfile& u = target.profile;
    const double T = target.horizon;
    const double slack = default_oleinik_slack(u, flux, T);

    RestrictedDesign out;
    out.K_o = dependency_interval(u, flux, T, slack);  // throws NotReachableError
    out.degenerate = out.K_o.width() < 2.0 * u.grid.dx;

    const SampledProfile extended = extend_profile(target, flux);
    const double x_check = 0.5 * (u.grid.x0 + u.grid.right());
    const DesignEnvelope full = design_envelope(extended, flux, T, target.J, x_check);
    out.envelope = clip_envelope(full, out.K_o);
    return out;
}

SampledProfile glue(const SampledProfile& u_left, const SampledProfile& u_right,
                    double x_bar, const FluxModel& flux, double T,
                    double trace_tol) {
    const Grid& gl = u_left.grid;
    const Grid& gr = u_right.grid;
    if (std::abs(gl.dx - gr.dx) > 1e-12 * gl.dx)
        throw std::invalid_argument("glue needs matching grid spacings");

    // Left traces at x_bar of both evolutions; the split line is the common
    // backward characteristic through (T, x_bar).
    auto left_trace_at = [&](const SampledProfile& w) {
        const double reach = T * flux.max_abs_speed(w.value_range()) + 2.0 * gl.dx;
        const SampledProfile wt =
            evolve(w, flux, T, Interval{x_bar - reach, x_bar + reach});
        const int j = wt.grid.snap(x_bar);
        return wt.values[std::max(j - 1, 0)];
    };
    const double tl = left_trace_at(u_left);
    const double tr = left_trace_at(u_right);
    if (std::abs(tl - tr) > trace_tol) throw GlueMismatchError(tl, tr);

    const double split = x_bar - T * flux.deriv(0.5 * (tl + tr));
    const Interval span = hull(gl.span(), gr.span());
    const Grid g = Grid::aligned(gl.x0, span.lo, span.hi, gl.dx);
    std::vector<double> v(g.n);
    for (int i = 0; i < g.n; ++i) {
        const double x = g.node(i + 1);
        v[i] = (x < split) ? u_left.at(x) : u_right.at(x);
    }
    return SampledProfile(g, std::move(v));
}

ConsistencyReport extension_consistency(const SampledProfile& u_1,
                                        const SampledProfile& u_2,
                                        double x1, double x2,
                                        const FluxModel& flux, double T,
                                        const Interval& J) {
    if (!(x2 > x1)) throw std::invalid_argument("window must have positive width");
    if (l1_distance(u_1, u_2, Interval{x1, x2}) >
        1e-9 * std::max(1.0, x2 - x1) * std::max(1.0, J.width()))
        throw std::invalid_argument("profiles disagree on the common window");

    // Full-line designs of the two profiles, each clipped to its own
    // dependency interval. The traces at x1, x2 agree, so the intervals and
    // the base feet coincide and the clipped envelopes are comparable.
    const double x_check = 0.5 * (x1 + x2);
    auto restricted = [&](const SampledProfile& u) {
        const double right_trace = trace(u, x1, Side::Right);
        const double left_trace = trace(u, x2, Side::Left);
        const Interval K_o{x1 - T * flux.deriv(right_trace),
                           x2 - T * flux.deriv(left_trace)};
        DesignEnvelope env = design_envelope(u, flux, T, J, x_check);
        return std::pair{K_o, clip_envelope(env, K_o)};
    };
    const auto [K1, e1] = restricted(u_1);
    const auto [K2, e2] = restricted(u_2);

    ConsistencyReport rep;
    rep.K_o = {std::max(K1.lo, K2.lo), std::min(K1.hi, K2.hi)};
    rep.flat_discrepancy = l1_distance(e1.u_flat, e2.u_flat, rep.K_o);
    rep.sharp_discrepancy = l1_distance(e1.u_sharp, e2.u_sharp, rep.K_o);
    return rep;
}

}  // namespace invdes
