#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace rvc {

using NodeId = std::size_t;

/// A point in R^d. Agent states, broadcast values and middle points all use it.
using Point = std::vector<double>;

/// Ordered multiset of points sharing one dimension. Duplicates are kept.
struct PointSet {
    std::size_t dim = 0;
    std::vector<Point> points;

    PointSet() = default;
    PointSet(std::size_t d, std::vector<Point> pts);

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
    const Point& operator[](std::size_t i) const { return points[i]; }

    bool operator==(const PointSet&) const = default;
};

// Error hierarchy. Every library failure is one of these so the CLI can map
// them onto exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class EnumerationCapExceeded : public Error {
public:
    using Error::Error;
};

/// Some agent has fewer than (d+1)F+1 neighbours.
class AssumptionViolation : public Error {
public:
    using Error::Error;
};

/// The LP backing a middle point came back infeasible. Points to a numerical
/// problem, since the intersection is provably nonempty.
class SolverFailure : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

std::string to_string(const Point& p);

}  // namespace rvc
