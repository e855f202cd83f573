#include "rvc/types.hpp"

#include <sstream>

namespace rvc {

PointSet::PointSet(std::size_t d, std::vector<Point> pts) : dim(d), points(std::move(pts)) {
    for (const auto& p : points) {
        if (p.size() != dim) {
            throw DimensionMismatch("point of length " + std::to_string(p.size()) +
                                    " in a set of dimension " + std::to_string(dim));
        }
    }
}

std::string to_string(const Point& p) {
    std::ostringstream os;
    os.precision(17);
    os << '(';
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) os << ", ";
        os << p[i];
    }
    os << ')';
    return os.str();
}

}  // namespace rvc
