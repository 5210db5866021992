#include "invdes/forward.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace invdes {

namespace {

// One exact minimization of xi -> U_o(xi) + t f*((x - xi)/t) over
// [w_lo, w_hi]. U_o is piecewise linear, so after a node scan the winner's
// neighbouring cells are refined with the stationary point xi = x - t f'(s)
// of each linear piece (clamped to the piece). Smallest minimizer wins ties.
struct ScanResult {
    double value;
    double xi;
    long node_index;  // virtual node index of the best scanned node
};

ScanResult minimize_over_feet(const LipschitzProfile& U_o, const FluxModel& flux,
                              double t, double x, double w_lo, double w_hi,
                              long start_index) {
    const Grid& g = U_o.grid;
    auto objective = [&](double xi) {
        return U_o.at(xi) + t * flux.legendre((x - xi) / t);
    };

    long ilo = static_cast<long>(std::floor((w_lo - g.x0) / g.dx)) + 1;
    long ihi = static_cast<long>(std::ceil((w_hi - g.x0) / g.dx)) - 1;
    ilo = std::max(ilo, start_index);

    ScanResult best{objective(w_lo), w_lo, ilo - 1};
    const double tie = 1e-13 * (1.0 + std::abs(best.value));
    {
        const double v = objective(w_hi);
        if (v < best.value - tie) best = {v, w_hi, ihi + 1};
    }
    for (long i = ilo; i <= ihi; ++i) {
        const double xi = g.x0 + i * g.dx;
        const double v = objective(xi);
        if (v < best.value - tie) best = {v, xi, i};
    }

    // Refine inside the two cells adjacent to the winner. Each linear piece
    // has slope s; the piece-restricted objective is strictly convex with
    // stationary foot x - t f'(s).
    const Interval dom = flux.domain();
    for (long c : {best.node_index - 1, best.node_index}) {
        const double a = std::max(g.x0 + c * g.dx, w_lo);
        const double b = std::min(g.x0 + (c + 1) * g.dx, w_hi);
        if (!(b > a)) continue;
        const double s = (U_o.at(g.x0 + (c + 1) * g.dx) - U_o.at(g.x0 + c * g.dx)) / g.dx;
        double xi = x - t * flux.deriv(dom.clamp(s));
        xi = std::min(std::max(xi, a), b);
        const double v = objective(xi);
        if (v < best.value - tie || (v < best.value + tie && xi < best.xi)) {
            best.value = v;
            best.xi = xi;
        }
    }
    return best;
}

}  // namespace

EvolutionResult hopf_lax(const LipschitzProfile& U_o, const FluxModel& flux,
                         double t, const Interval& window) {
    if (!(t > 0.0)) throw std::invalid_argument("evolution time must be positive");
    const Interval dom = flux.domain();
    const double stol = 1e-9 * std::max(1.0, std::abs(U_o.slope_bounds.hi));
    if (U_o.slope_bounds.lo < dom.lo - stol || U_o.slope_bounds.hi > dom.hi + stol)
        throw std::domain_error("potential slopes leave the flux domain");

    const Interval s{dom.clamp(U_o.slope_bounds.lo), dom.clamp(U_o.slope_bounds.hi)};
    const double speed_lo = flux.deriv(s.lo);
    const double speed_hi = flux.deriv(s.hi);

    const Grid out = Grid::aligned(U_o.grid.x0, window.lo, window.hi, U_o.grid.dx);
    EvolutionResult res;
    res.argmin_map.resize(out.n + 1);
    std::vector<double> nodes(out.n + 1);

    long start = std::numeric_limits<long>::min() / 2;
    for (int k = 0; k <= out.n; ++k) {
        const double x = out.node(k);
        const ScanResult r = minimize_over_feet(
            U_o, flux, t, x, x - t * speed_hi, x - t * speed_lo, start);
        nodes[k] = r.value;
        res.argmin_map[k] = r.xi;
        start = r.node_index - 1;
        if (k > 0 && r.xi < res.argmin_map[k - 1] - 1e-9 * U_o.grid.dx)
            throw std::logic_error("minimizing feet are not monotone");
    }

    res.U_t = LipschitzProfile(out, std::move(nodes), s);
    std::vector<double> v(out.n);
    for (int i = 0; i < out.n; ++i) {
        const double x = out.node(i + 1);
        v[i] = flux.inv_deriv((x - res.argmin_map[i + 1]) / t);
    }
    res.u_t = SampledProfile(out, std::move(v));
    return res;
}

SampledProfile evolve(const SampledProfile& u_o, const FluxModel& flux,
                      double t, const Interval& window) {
    const LipschitzProfile U_o = primitive(u_o, u_o.grid.x0);
    return hopf_lax(U_o, flux, t, window).u_t;
}

SampledProfile godunov(const SampledProfile& u_o, const FluxModel& flux,
                       double t, double cfl) {
    if (!(cfl > 0.0) || cfl > 0.9)
        throw std::invalid_argument("cfl factor must lie in (0, 0.9]");
    if (!(t > 0.0)) throw std::invalid_argument("evolution time must be positive");

    const Grid& g = u_o.grid;
    const Interval r = u_o.value_range();
    const Interval dom = flux.domain();

    // Sonic state: where f' crosses zero, clamped to the covered range.
    const Interval slopes = flux.slope_domain();
    double sonic;
    if (slopes.lo >= 0.0) sonic = dom.clamp(r.lo);
    else if (slopes.hi <= 0.0) sonic = dom.clamp(r.hi);
    else sonic = flux.inv_deriv(0.0);

    auto riemann_flux = [&](double a, double b) {
        if (a <= b) {
            // min of f over [a, b]
            return flux.eval(std::min(std::max(sonic, a), b));
        }
        return std::max(flux.eval(a), flux.eval(b));
    };

    const double max_speed = std::max(flux.max_abs_speed(r), 1e-300);
    const double dt_full = cfl * g.dx / max_speed;

    std::vector<double> u = u_o.values;
    std::vector<double> next(u.size());
    double elapsed = 0.0;
    while (elapsed < t) {
        const double dt = std::min(dt_full, t - elapsed);
        const double lambda = dt / g.dx;
        double flux_left = riemann_flux(u.front(), u.front());  // ghost cell
        for (int i = 0; i < g.n; ++i) {
            const double right_state = (i + 1 < g.n) ? u[i + 1] : u.back();
            const double flux_right = riemann_flux(u[i], right_state);
            next[i] = u[i] - lambda * (flux_right - flux_left);
            flux_left = flux_right;
        }
        u.swap(next);
        elapsed += dt;
    }
    return SampledProfile(g, std::move(u));
}

}  // namespace invdes
