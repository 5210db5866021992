#ifndef INVDES_PROFILE_HPP
#define INVDES_PROFILE_HPP

#include <optional>
#include <vector>

#include "invdes/common.hpp"

namespace invdes {

/// Uniform cell grid: n cells of width dx, left endpoint x0.
/// Nodes are x0 + i*dx, i = 0..n; cell i is the half-open (node i, node i+1].
struct Grid {
    double x0 = 0.0;
    double dx = 1.0;
    int n = 0;

    Grid() = default;
    Grid(double x0, double dx, int n);

    double node(int i) const { return x0 + i * dx; }
    double right() const { return node(n); }
    Interval span() const { return {x0, right()}; }

    /// Index of the nearest node (clamped to [0, n]).
    int snap(double x) const;

    /// Grid with the same spacing whose nodes contain `anchor`, covering
    /// [lo, hi]. Used to align envelope grids on a base point.
    static Grid aligned(double anchor, double lo, double hi, double dx);
};

enum class Side { Left, Right };

/// Left-continuous piecewise constant function: values[i] is the value on
/// cell i = (node i, node i+1]. Outside the grid the profile continues with
/// its boundary cell values.
struct SampledProfile {
    Grid grid;
    std::vector<double> values;
    std::optional<Interval> range_hint;

    SampledProfile() = default;
    SampledProfile(Grid g, std::vector<double> v,
                   std::optional<Interval> hint = std::nullopt);

    /// Value of the left-continuous representative at x (constant
    /// continuation beyond the grid).
    double at(double x) const;

    Interval value_range() const;
    SampledProfile negated() const;
};

/// Continuous piecewise linear function on grid nodes, extended linearly
/// beyond the grid with its boundary slopes (the primitive of the constant
/// continuation of its derivative).
struct LipschitzProfile {
    Grid grid;
    std::vector<double> node_values;  // size n+1
    Interval slope_bounds;

    LipschitzProfile() = default;
    LipschitzProfile(Grid g, std::vector<double> nodes, Interval slopes);

    double at(double x) const;
    double slope_of_cell(int i) const {
        return (node_values[i + 1] - node_values[i]) / grid.dx;
    }
};

/// Exact primitive U(x) = integral of u from x_check to x; x_check is
/// snapped to the nearest grid node and U(x_check) = 0.
LipschitzProfile primitive(const SampledProfile& u, double x_check);

/// Cellwise slopes of U, the discrete inverse of `primitive`.
SampledProfile derivative(const LipschitzProfile& U);

double total_variation(const SampledProfile& u);

/// One-sided trace at an interior node. Throws std::domain_error when the
/// requested side points outside the grid.
double trace(const SampledProfile& u, double x, Side side);

/// L1 distance over `window` (both profiles evaluated with their
/// continuations; integrated cell-exactly on the union of breakpoints).
double l1_distance(const SampledProfile& a, const SampledProfile& b,
                   const Interval& window);

/// Profile read onto another grid through the left-continuous
/// representative (exact when the grids share node positions).
SampledProfile resample(const SampledProfile& u, const Grid& grid);

}  // namespace invdes

#endif  // INVDES_PROFILE_HPP
