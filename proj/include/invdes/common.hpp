#ifndef INVDES_COMMON_HPP
#define INVDES_COMMON_HPP

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace invdes {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Closed real interval [lo, hi]. Endpoints may be infinite.
struct Interval {
    double lo = -kInf;
    double hi = kInf;

    double width() const { return hi - lo; }
    bool contains(double x, double tol = 0.0) const {
        return x >= lo - tol && x <= hi + tol;
    }
    bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
    double clamp(double x) const { return std::min(std::max(x, lo), hi); }
};

inline Interval hull(const Interval& a, const Interval& b) {
    return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

/// Target profile cannot be reached at the requested horizon: the one-sided
/// slope condition fails. Carries the worst offending pair.
class NotReachableError : public std::runtime_error {
public:
    NotReachableError(double xi, double xj, double ratio, double bound)
        : std::runtime_error("target not reachable: slope ratio " +
                             std::to_string(ratio) + " exceeds bound " +
                             std::to_string(bound) + " on pair (" +
                             std::to_string(xi) + ", " + std::to_string(xj) + ")"),
          xi(xi), xj(xj), ratio(ratio), bound(bound) {}

    double xi, xj, ratio, bound;
};

/// Target values leave the admissible range constraint.
class ConstraintInfeasibleError : public std::runtime_error {
public:
    explicit ConstraintInfeasibleError(const std::string& what)
        : std::runtime_error(what) {}
};

/// The upper design envelope is unbounded (constraint interval not compact).
class SharpUndefinedError : public std::runtime_error {
public:
    explicit SharpUndefinedError(const std::string& what)
        : std::runtime_error(what) {}
};

/// Traces of two solutions disagree at the requested split point.
class GlueMismatchError : public std::runtime_error {
public:
    GlueMismatchError(double left_value, double right_value)
        : std::runtime_error("trace mismatch at split point: " +
                             std::to_string(left_value) + " vs " +
                             std::to_string(right_value)),
          left_value(left_value), right_value(right_value) {}

    double left_value, right_value;
};

}  // namespace invdes

#endif  // INVDES_COMMON_HPP
