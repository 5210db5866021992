#include "invdes/reachability.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace invdes {

namespace {

// Lipschitz constant of f' over the profile's value hull, estimated on a
// refinement of the hull (f'' is not exposed by the model).
double lipschitz_of_deriv(const SampledProfile& u, const FluxModel& flux) {
    Interval r = u.value_range();
    if (!(r.hi > r.lo)) return 0.0;
    r.lo = flux.domain().clamp(r.lo);
    r.hi = flux.domain().clamp(r.hi);
    const int m = 128;
    const double h = (r.hi - r.lo) / m;
    if (!(h > 0.0)) return 0.0;
    double lip = 0.0;
    double prev = flux.deriv(r.lo);
    for (int i = 1; i <= m; ++i) {
        const double cur = flux.deriv(r.lo + i * h);
        lip = std::max(lip, (cur - prev) / h);
        prev = cur;
    }
    return lip;
}

}  // namespace

bool ContactSet::in_gap(double x, std::size_t* index) const {
    for (std::size_t k = 0; k < gaps.size(); ++k) {
        if (x > gaps[k].lo && x <= gaps[k].hi) {
            if (index) *index = k;
            return true;
        }
    }
    return false;
}

double default_oleinik_slack(const SampledProfile& u, const FluxModel& flux,
                             double T) {
    return 10.0 * u.grid.dx * lipschitz_of_deriv(u, flux) * std::max(1.0, 1.0 / T);
}

OleinikVerdict oleinik_check(const SampledProfile& u, const FluxModel& flux,
                             double T, double slack) {
    if (!(T > 0.0)) throw std::invalid_argument("horizon must be positive");
    OleinikVerdict v;
    v.bound = 1.0 / T;
    const Grid& g = u.grid;
    // The max difference quotient over all pairs equals the max over
    // adjacent cells: any chord slope is a mean of the adjacent ones.
    double worst = -kInf;
    int at = 0;
    double prev = flux.deriv(u.values[0]);
    for (int i = 1; i < g.n; ++i) {
        const double cur = flux.deriv(u.values[i]);
        const double q = (cur - prev) / g.dx;
        if (q > worst) {
            worst = q;
            at = i;
        }
        prev = cur;
    }
    v.ratio = (g.n > 1) ? worst : 0.0;
    v.xi = g.node(at);       // right endpoint of cell at-1
    v.xj = g.node(at + 1);   // right endpoint of cell at
    v.ok = v.ratio <= v.bound + slack;
    return v;
}

PiMap pi_map(const SampledProfile& u, const FluxModel& flux, double T,
             double slack) {
    const OleinikVerdict v = oleinik_check(u, flux, T, slack);
    if (!v.ok) throw NotReachableError(v.xi, v.xj, v.ratio, v.bound);
    PiMap pi;
    pi.grid = u.grid;
    pi.horizon = T;
    pi.pi_values.resize(u.grid.n);
    for (int i = 0; i < u.grid.n; ++i)
        pi.pi_values[i] = u.grid.node(i + 1) - T * flux.deriv(u.values[i]);
    return pi;
}

ContactSet contact_set(const PiMap& pi, const SampledProfile& u,
                       const FluxModel& flux) {
    const Grid& g = pi.grid;
    const double dx = g.dx;
    const double T = pi.horizon;
    const double lip = lipschitz_of_deriv(u, flux);
    const auto& p = pi.pi_values;

    // Local slope scale next to node j, taken from the neighbouring
    // increments so a genuine jump does not mask itself.
    auto local_slope = [&](int j) {
        double s = 0.0;
        if (j >= 2) s = std::max(s, std::abs(u.values[j - 1] - u.values[j - 2]) / dx);
        if (j + 1 < g.n) s = std::max(s, std::abs(u.values[j + 1] - u.values[j]) / dx);
        return s;
    };

    ContactSet cs;
    std::vector<std::pair<int, int>> runs;  // [first, last] jump increments
    int run_start = -1;
    for (int j = 1; j < g.n; ++j) {
        const double inc = p[j] - p[j - 1];
        const double threshold = (1.0 + 1e-6) * dx * (1.0 + T * lip * local_slope(j));
        const bool jump = inc > threshold;
        if (jump && run_start < 0) run_start = j;
        if (!jump && run_start >= 0) {
            runs.emplace_back(run_start, j - 1);
            run_start = -1;
        }
    }
    if (run_start >= 0) runs.emplace_back(run_start, g.n - 1);

    for (auto [a, b] : runs) {
        Gap gap;
        gap.lo = p[a - 1];            // pi(x-) at the node where the jump starts
        gap.hi = p[b] - dx;           // pi(x+) past the jump
        // Report the node with the largest single increment as the jump point.
        int best = a;
        for (int j = a + 1; j <= b; ++j)
            if (p[j] - p[j - 1] > p[best] - p[best - 1]) best = j;
        gap.target_x = g.node(best);
        if (gap.width() >= 2.0 * dx) cs.gaps.push_back(gap);
    }

    double lo = p.front();
    for (const Gap& gap : cs.gaps) {
        cs.intervals.push_back({lo, gap.lo});
        lo = gap.hi;
    }
    cs.intervals.push_back({lo, p.back()});
    return cs;
}

Interval dependency_interval(const SampledProfile& u, const FluxModel& flux,
                             double T, double slack) {
    const OleinikVerdict v = oleinik_check(u, flux, T, slack);
    if (!v.ok) throw NotReachableError(v.xi, v.xj, v.ratio, v.bound);
    const double right_trace = u.values.front();  // u(x1+)
    const double left_trace = u.values.back();    // u(x2-)
    return {u.grid.x0 - T * flux.deriv(right_trace),
            u.grid.right() - T * flux.deriv(left_trace)};
}

}  // namespace invdes
