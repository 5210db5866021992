#include "invdes/design.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace invdes {

namespace {

// Largest adjacent slope of the sampled profile, used for grid tolerances.
double max_adjacent_slope(const SampledProfile& u) {
    double s = 0.0;
    for (std::size_t i = 1; i < u.values.size(); ++i)
        s = std::max(s, std::abs(u.values[i] - u.values[i - 1]) / u.grid.dx);
    return s;
}

// One exact maximization of xi -> U_T(xi) + T f*((xi - y)/T)-type target.
// Mirrors the forward scan but runs on the sup form with the foot window
// taken from the constraint interval; kept separate so the reversal route
// stays an independent cross-check.
struct ArgmaxResult {
    double value;
    double xi;
    long node_index;
};

ArgmaxResult maximize_over_targets(const LipschitzProfile& U_T,
                                   const FluxModel& flux, double T, double y,
                                   double w_lo, double w_hi, long start_index) {
    const Grid& g = U_T.grid;
    auto objective = [&](double xi) {
        return U_T.at(xi) - T * flux.legendre((xi - y) / T);
    };

    long ilo = static_cast<long>(std::floor((w_lo - g.x0) / g.dx)) + 1;
    long ihi = static_cast<long>(std::ceil((w_hi - g.x0) / g.dx)) - 1;
    ilo = std::max(ilo, start_index);

    ArgmaxResult best{objective(w_lo), w_lo, ilo - 1};
    const double tie = 1e-13 * (1.0 + std::abs(best.value));
    for (long i = ilo; i <= ihi; ++i) {
        const double xi = g.x0 + i * g.dx;
        const double v = objective(xi);
        if (v > best.value + tie) best = {v, xi, i};
    }
    {
        const double v = objective(w_hi);
        if (v > best.value + tie) best = {v, w_hi, ihi + 1};
    }

    // Stationary point of each neighbouring linear piece: slope s gives
    // xi = y + T f'(s).
    const Interval dom = flux.domain();
    for (long c : {best.node_index - 1, best.node_index}) {
        const double a = std::max(g.x0 + c * g.dx, w_lo);
        const double b = std::min(g.x0 + (c + 1) * g.dx, w_hi);
        if (!(b > a)) continue;
        const double s =
            (U_T.at(g.x0 + (c + 1) * g.dx) - U_T.at(g.x0 + c * g.dx)) / g.dx;
        double xi = y + T * flux.deriv(dom.clamp(s));
        xi = std::min(std::max(xi, a), b);
        const double v = objective(xi);
        if (v > best.value + tie || (v > best.value - tie && xi < best.xi)) {
            best.value = v;
            best.xi = xi;
        }
    }
    return best;
}

}  // namespace

DesignEnvelope flat_design(const SampledProfile& u_T, const FluxModel& flux,
                           double T, const Interval& J, double x_check) {
    if (!(T > 0.0)) throw std::invalid_argument("horizon must be positive");
    if (!(J.lo <= J.hi)) throw std::invalid_argument("constraint interval is empty");
    const Interval range = u_T.value_range();
    const double rtol = 1e-9 * std::max(1.0, std::max(std::abs(range.lo), std::abs(range.hi)));
    if (range.lo < J.lo - rtol || range.hi > J.hi + rtol)
        throw ConstraintInfeasibleError(
            "target range [" + std::to_string(range.lo) + ", " +
            std::to_string(range.hi) + "] leaves the constraint interval");

    const double slack = default_oleinik_slack(u_T, flux, T);
    const PiMap pi = pi_map(u_T, flux, T, slack);  // throws NotReachableError

    DesignEnvelope env;
    env.J = J;
    env.horizon = T;
    env.contact = contact_set(pi, u_T, flux);

    const Grid& gt = u_T.grid;
    const int snap = gt.snap(x_check);
    env.x_check = gt.node(snap);
    const double u_at_check = u_T.values[std::max(snap - 1, 0)];
    env.y_check = env.x_check - T * flux.deriv(u_at_check);

    const LipschitzProfile U_T = primitive(u_T, env.x_check);

    const double hull_lo = pi.pi_values.front() - gt.dx;
    const double hull_hi = pi.pi_values.back();
    env.grid_o = Grid::aligned(env.y_check, hull_lo, hull_hi, gt.dx);
    env.base_index = env.grid_o.snap(env.y_check);

    // Foot window from the constraint: the maximizer satisfies
    // (xi - y)/T = f'(u) with u in J.
    const Interval dom = flux.domain();
    const double c_lo = flux.deriv(dom.clamp(J.lo));
    const double c_hi = flux.deriv(dom.clamp(J.hi));

    const Grid& go = env.grid_o;
    std::vector<double> nodes(go.n + 1);
    env.argmax_map.resize(go.n + 1);
    long start = std::numeric_limits<long>::min() / 2;
    for (int k = 0; k <= go.n; ++k) {
        const double y = go.node(k);
        const ArgmaxResult r = maximize_over_targets(
            U_T, flux, T, y, y + T * c_lo, y + T * c_hi, start);
        nodes[k] = r.value;
        env.argmax_map[k] = r.xi;
        start = r.node_index - 1;
        if (k > 0 && r.xi < env.argmax_map[k - 1] - 1e-6 * gt.dx)
            throw std::logic_error("maximizing feet are not monotone");
    }
    env.U_flat = LipschitzProfile(go, std::move(nodes), J);

    std::vector<double> v(go.n);
    for (int i = 0; i < go.n; ++i) {
        const double y = go.node(i + 1);
        v[i] = J.clamp(flux.inv_deriv((env.argmax_map[i + 1] - y) / T));
    }
    env.u_flat = SampledProfile(go, std::move(v), J);
    return env;
}

DesignEnvelope sharp_design(DesignEnvelope env) {
    if (!env.J.bounded())
        throw SharpUndefinedError(
            "the maximal design is unbounded for a non-compact constraint");
    const Grid& go = env.grid_o;
    const double J_lo = env.J.lo, J_hi = env.J.hi;

    struct GapCones {
        double lo, hi;    // gap endpoints
        double A, B;      // flat potential there
        double kink;      // where the two cones meet
    };
    std::vector<GapCones> cones;
    cones.reserve(env.contact.gaps.size());
    for (const Gap& gap : env.contact.gaps) {
        GapCones c{gap.lo, gap.hi, env.U_flat.at(gap.lo), env.U_flat.at(gap.hi), 0.0};
        c.kink = (J_hi > J_lo)
                     ? (c.B - c.A + J_hi * c.lo - J_lo * c.hi) / (J_hi - J_lo)
                     : c.lo;
        cones.push_back(c);
    }

    auto find_gap = [&](double x) -> const GapCones* {
        for (const GapCones& c : cones)
            if (x > c.lo && x <= c.hi) return &c;
        return nullptr;
    };

    std::vector<double> nodes(go.n + 1);
    for (int k = 0; k <= go.n; ++k) {
        const double y = go.node(k);
        const GapCones* c = find_gap(y);
        nodes[k] = c ? std::min(c->A + J_hi * (y - c->lo), c->B - J_lo * (c->hi - y))
                     : env.U_flat.node_values[k];
    }
    env.U_sharp = LipschitzProfile(go, std::move(nodes), env.J);

    std::vector<double> v(go.n);
    for (int i = 0; i < go.n; ++i) {
        const double y = go.node(i + 1);
        const GapCones* c = find_gap(y);
        if (c) {
            // Left-continuous: the value at the kink is the left cone slope.
            v[i] = (y <= c->kink + 1e-12 * std::max(1.0, std::abs(c->kink))) ? J_hi : J_lo;
        } else {
            v[i] = env.u_flat.values[i];
        }
    }
    env.u_sharp = SampledProfile(go, std::move(v), env.J);
    env.has_sharp = true;
    return env;
}

DesignEnvelope design_envelope(const SampledProfile& u_T, const FluxModel& flux,
                               double T, const Interval& J, double x_check) {
    return sharp_design(flat_design(u_T, flux, T, J, x_check));
}

MembershipVerdict membership(const SampledProfile& u_o,
                             const DesignEnvelope& env) {
    const Grid& go = env.grid_o;
    if (std::abs(u_o.grid.x0 - go.x0) > 1e-9 * std::max(1.0, std::abs(go.x0)) ||
        std::abs(u_o.grid.dx - go.dx) > 1e-9 * go.dx || u_o.grid.n != go.n)
        throw std::invalid_argument("candidate must live on the envelope grid");

    MembershipVerdict verdict;
    const double vtol = 1e-9 * std::max(1.0, std::max(std::abs(env.J.lo), std::abs(env.J.hi)));
    for (int i = 0; i < go.n; ++i) {
        const double w = u_o.values[i];
        if (w < env.J.lo - vtol || w > env.J.hi + vtol) {
            verdict.member = false;
            verdict.reason = "range";
            verdict.witness = go.node(i + 1);
            verdict.excess = std::max(env.J.lo - w, w - env.J.hi);
            return verdict;
        }
    }

    std::vector<double> P(go.n + 1, 0.0);
    for (int i = 0; i < go.n; ++i) P[i + 1] = P[i] + u_o.values[i] * go.dx;
    const double base = P[env.base_index];

    const double tol = go.dx * std::max(env.J.width(), 1e-12) +
                       1e-12 * std::max(1.0, std::abs(base));
    // Scan outward from the base node so the witness is the escape point
    // nearest to where all admissible primitives agree.
    auto check = [&](int k) -> bool {
        const double p = P[k] - base;
        const double lo = env.band_lo(k), hi = env.band_hi(k);
        if (p < lo - tol || p > hi + tol) {
            verdict.member = false;
            verdict.reason = "band";
            verdict.witness = go.node(k);
            verdict.excess = std::max(lo - p, p - hi);
            return false;
        }
        return true;
    };
    const int reach = std::max(env.base_index, go.n - env.base_index);
    for (int d = 1; d <= reach; ++d) {
        if (env.base_index - d >= 0 && !check(env.base_index - d)) return verdict;
        if (env.base_index + d <= go.n && !check(env.base_index + d)) return verdict;
    }
    return verdict;
}

SampledProfile sample_design(const DesignEnvelope& env, double lambda) {
    if (!env.has_sharp)
        throw std::invalid_argument("sampling requires the sharp envelope");
    lambda = std::clamp(lambda, 0.0, 1.0);
    const Grid& go = env.grid_o;
    std::vector<double> nodes(go.n + 1);
    for (int k = 0; k <= go.n; ++k)
        nodes[k] = (1.0 - lambda) * env.U_flat.node_values[k] +
                   lambda * env.U_sharp.node_values[k];
    const LipschitzProfile W(go, std::move(nodes), env.J);
    SampledProfile u = derivative(W);
    for (double& w : u.values) w = env.J.clamp(w);
    u.range_hint = env.J;
    return u;
}

SampledProfile sample_design_random(const DesignEnvelope& env,
                                    std::uint64_t seed) {
    if (!env.has_sharp)
        throw std::invalid_argument("sampling requires the sharp envelope");
    const Grid& go = env.grid_o;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);

    // Bisection of the primitive band: each midpoint value is drawn from
    // the exact feasible range given the already fixed endpoint values (the
    // band plus the slope cones toward both endpoints).
    std::vector<double> W(go.n + 1);
    W.front() = env.U_flat.node_values.front();
    W.back() = env.U_flat.node_values.back();
    std::vector<std::pair<int, int>> stack{{0, go.n}};
    while (!stack.empty()) {
        auto [a, b] = stack.back();
        stack.pop_back();
        if (b - a <= 1) continue;
        const int m = (a + b) / 2;
        const double da = (m - a) * go.dx, db = (b - m) * go.dx;
        double lo = std::max({env.U_flat.node_values[m], W[a] + env.J.lo * da,
                              W[b] - env.J.hi * db});
        double hi = std::min({env.U_sharp.node_values[m], W[a] + env.J.hi * da,
                              W[b] - env.J.lo * db});
        if (hi < lo) hi = lo;  // float guard; the exact range is nonempty
        W[m] = lo + u01(rng) * (hi - lo);
        stack.emplace_back(a, m);
        stack.emplace_back(m, b);
    }
    const LipschitzProfile Wp(go, std::move(W), env.J);
    SampledProfile u = derivative(Wp);
    for (double& w : u.values) w = env.J.clamp(w);
    u.range_hint = env.J;
    return u;
}

SampledProfile flat_via_reversal(const SampledProfile& u_T, const FluxModel& flux,
                                 double T, const Interval& window,
                                 ReversalScheme scheme, double cfl) {
    const SampledProfile neg = u_T.negated();
    const FluxModel g = flux.reflected();
    if (scheme == ReversalScheme::HopfLax)
        return evolve(neg, g, T, window).negated();
    // The finite volume route needs cells covering the requested window.
    const Interval covered = hull(window, neg.grid.span());
    const Grid wide = Grid::aligned(neg.grid.x0, covered.lo, covered.hi, neg.grid.dx);
    const SampledProfile v = godunov(resample(neg, wide), g, T, cfl);
    return resample(v.negated(), Grid::aligned(neg.grid.x0, window.lo, window.hi,
                                               neg.grid.dx));
}

TvHullReport tv_and_hull_report(const SampledProfile& u_T,
                                const DesignEnvelope& env) {
    TvHullReport rep;
    rep.tv_target = total_variation(u_T);
    rep.tv_flat = total_variation(env.u_flat);
    rep.hull_target = u_T.value_range();
    rep.hull_flat = env.u_flat.value_range();
    const double lip = max_adjacent_slope(u_T);
    rep.tv_tolerance = 2.0 * u_T.grid.dx * std::max(1.0, lip);
    rep.hull_tolerance = u_T.grid.dx * std::max(1.0, lip);
    rep.tv_ok = std::abs(rep.tv_target - rep.tv_flat) <= rep.tv_tolerance;
    rep.hull_ok =
        std::abs(rep.hull_target.lo - rep.hull_flat.lo) <= rep.hull_tolerance &&
        std::abs(rep.hull_target.hi - rep.hull_flat.hi) <= rep.hull_tolerance;
    return rep;
}

}  // namespace invdes
