#include "invdes/profile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace invdes {

Grid::Grid(double x0, double dx, int n) : x0(x0), dx(dx), n(n) {
    if (!(dx > 0.0)) throw std::invalid_argument("grid spacing must be positive");
    if (n < 2) throw std::invalid_argument("grid needs at least 2 cells");
}

int Grid::snap(double x) const {
    const double t = (x - x0) / dx;
    const long i = std::lround(t);
    return static_cast<int>(std::clamp(i, 0L, static_cast<long>(n)));
}

Grid Grid::aligned(double anchor, double lo, double hi, double dx) {
    if (!(dx > 0.0)) throw std::invalid_argument("grid spacing must be positive");
    const long k_lo = static_cast<long>(std::ceil((anchor - lo) / dx - 1e-9));
    const long k_hi = static_cast<long>(std::ceil((hi - anchor) / dx - 1e-9));
    const long n = std::max(2L, k_lo + k_hi);
    return Grid(anchor - k_lo * dx, dx, static_cast<int>(n));
}

SampledProfile::SampledProfile(Grid g, std::vector<double> v,
                               std::optional<Interval> hint)
    : grid(g), values(std::move(v)), range_hint(hint) {
    if (static_cast<int>(values.size()) != grid.n)
        throw std::invalid_argument("profile needs one value per grid cell");
    if (range_hint) {
        for (double w : values)
            if (!range_hint->contains(w, 1e-12 * std::max(1.0, std::abs(w))))
                throw std::invalid_argument("profile value outside its declared range");
    }
}

double SampledProfile::at(double x) const {
    // Cell i = (node i, node i+1]; left continuity picks the cell whose
    // right endpoint is the first node >= x.
    const double t = (x - grid.x0) / grid.dx;
    const long i = static_cast<long>(std::ceil(t - 1e-12)) - 1;
    const long k = std::clamp(i, 0L, static_cast<long>(grid.n) - 1);
    return values[static_cast<std::size_t>(k)];
}

Interval SampledProfile::value_range() const {
    auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    return {*mn, *mx};
}

SampledProfile SampledProfile::negated() const {
    std::vector<double> v(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) v[i] = -values[i];
    std::optional<Interval> hint;
    if (range_hint) hint = Interval{-range_hint->hi, -range_hint->lo};
    return SampledProfile(grid, std::move(v), hint);
}

LipschitzProfile::LipschitzProfile(Grid g, std::vector<double> nodes,
                                   Interval slopes)
    : grid(g), node_values(std::move(nodes)), slope_bounds(slopes) {
    if (static_cast<int>(node_values.size()) != grid.n + 1)
        throw std::invalid_argument("profile needs one value per grid node");
}

double LipschitzProfile::at(double x) const {
    if (x <= grid.x0)
        return node_values.front() + slope_of_cell(0) * (x - grid.x0);
    if (x >= grid.right())
        return node_values.back() + slope_of_cell(grid.n - 1) * (x - grid.right());
    const double t = (x - grid.x0) / grid.dx;
    int i = static_cast<int>(t);
    i = std::clamp(i, 0, grid.n - 1);
    const double s = t - i;
    return node_values[i] * (1.0 - s) + node_values[i + 1] * s;
}

LipschitzProfile primitive(const SampledProfile& u, double x_check) {
    const Grid& g = u.grid;
    const int base = g.snap(x_check);
    std::vector<double> nodes(g.n + 1, 0.0);
    // Cumulative cell integrals, then shift so the base node reads zero.
    for (int i = 0; i < g.n; ++i) nodes[i + 1] = nodes[i] + u.values[i] * g.dx;
    const double shift = nodes[base];
    for (double& w : nodes) w -= shift;
    return LipschitzProfile(g, std::move(nodes), u.value_range());
}

SampledProfile derivative(const LipschitzProfile& U) {
    std::vector<double> v(U.grid.n);
    for (int i = 0; i < U.grid.n; ++i) v[i] = U.slope_of_cell(i);
    return SampledProfile(U.grid, std::move(v));
}

double total_variation(const SampledProfile& u) {
    double tv = 0.0;
    for (std::size_t i = 1; i < u.values.size(); ++i)
        tv += std::abs(u.values[i] - u.values[i - 1]);
    return tv;
}

double trace(const SampledProfile& u, double x, Side side) {
    const int j = u.grid.snap(x);
    if (side == Side::Left) {
        if (j == 0) throw std::domain_error("left trace requested at the left boundary");
        return u.values[j - 1];
    }
    if (j == u.grid.n)
        throw std::domain_error("right trace requested at the right boundary");
    return u.values[j];
}

SampledProfile resample(const SampledProfile& u, const Grid& grid) {
    std::vector<double> v(grid.n);
    for (int i = 0; i < grid.n; ++i) v[i] = u.at(grid.node(i + 1));
    return SampledProfile(grid, std::move(v), u.range_hint);
}

double l1_distance(const SampledProfile& a, const SampledProfile& b,
                   const Interval& window) {
    if (!(window.hi > window.lo)) return 0.0;
    // Integrate |a-b| exactly: both are piecewise constant, so walk the
    // merged breakpoints of the two grids inside the window.
    std::vector<double> cuts{window.lo, window.hi};
    for (const Grid* g : {&a.grid, &b.grid}) {
        const long lo = static_cast<long>(std::ceil((window.lo - g->x0) / g->dx));
        const long hi = static_cast<long>(std::floor((window.hi - g->x0) / g->dx));
        for (long i = std::max(lo, 0L); i <= std::min(hi, static_cast<long>(g->n)); ++i)
            cuts.push_back(g->node(static_cast<int>(i)));
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double w = cuts[k + 1] - cuts[k];
        if (w <= 0.0) continue;
        const double mid = 0.5 * (cuts[k] + cuts[k + 1]);
        acc += w * std::abs(a.at(mid) - b.at(mid));
    }
    return acc;
}

}  // namespace invdes
