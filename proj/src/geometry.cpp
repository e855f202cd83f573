#include "rvc/geometry.hpp"

#include <string>

#include "rvc/lp.hpp"

namespace rvc {

namespace {

void require_dims(const Point& q, const PointSet& s) {
    if (q.size() != s.dim) {
        throw DimensionMismatch("query of dimension " + std::to_string(q.size()) +
                                " against a point set of dimension " + std::to_string(s.dim));
    }
}

void require_drop_count(const PointSet& s, std::size_t n) {
    if (n > s.size()) {
        throw InvalidArgument("cannot drop " + std::to_string(n) + " points from a set of " +
                              std::to_string(s.size()));
    }
}

}  // namespace

bool hull_contains(const Point& q, const PointSet& s, double tol) {
    require_dims(q, s);
    if (s.empty()) throw InvalidArgument("hull of an empty point set");
    const std::size_t d = s.dim;
    const std::size_t m = s.size();
    lp::Matrix a(d + 1, m);
    std::vector<double> b(d + 1);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = 0; k < d; ++k) a(k, j) = s[j][k];
        a(d, j) = 1.0;
    }
    for (std::size_t k = 0; k < d; ++k) b[k] = q[k];
    b[d] = 1.0;
    lp::Tolerances t;
    t.feas = tol;
    return lp::solve_feasibility(a, b, true, t).status == lp::Status::Optimal;
}

std::vector<std::vector<std::size_t>> reduced_subset_indices(std::size_t m, std::size_t n) {
    if (n > m) throw InvalidArgument("drop count exceeds set size");
    const std::size_t keep = m - n;
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> idx(keep);
    for (std::size_t i = 0; i < keep; ++i) idx[i] = i;
    while (true) {
        out.push_back(idx);
        // Advance to the next combination in lexicographic order.
        std::size_t pos = keep;
        while (pos > 0 && idx[pos - 1] == m - keep + pos - 1) --pos;
        if (pos == 0) break;
        ++idx[pos - 1];
        for (std::size_t i = pos; i < keep; ++i) idx[i] = idx[i - 1] + 1;
    }
    return out;
}

std::vector<PointSet> enumerate_reduced_subsets(const PointSet& s, std::size_t n) {
    require_drop_count(s, n);
    std::vector<PointSet> out;
    for (const auto& idx : reduced_subset_indices(s.size(), n)) {
        PointSet sub;
        sub.dim = s.dim;
        sub.points.reserve(idx.size());
        for (std::size_t i : idx) sub.points.push_back(s[i]);
        out.push_back(std::move(sub));
    }
    return out;
}

bool psi_contains(const Point& q, const PointSet& a, std::size_t n, double tol) {
    require_dims(q, a);
    require_drop_count(a, n);
    if (n == a.size()) return false;  // hull of the empty set
    for (const auto& sub : enumerate_reduced_subsets(a, n)) {
        if (!hull_contains(q, sub, tol)) return false;
    }
    return true;
}

std::optional<Point> psi_point_oracle(const PointSet& a, std::size_t n) {
    require_drop_count(a, n);
    if (n == a.size()) return std::nullopt;
    const std::size_t d = a.dim;
    const auto subsets = reduced_subset_indices(a.size(), n);
    const std::size_t r = subsets.size();
    const std::size_t keep = a.size() - n;

    // Variables: lambda_j (keep entries per subset j). Rows: for j >= 1,
    // Y_j lambda_j - Y_0 lambda_0 = 0 (d rows each); then 1'lambda_j = 1.
    lp::Matrix m((r - 1) * d + r, r * keep);
    std::vector<double> b(m.rows(), 0.0);
    for (std::size_t j = 1; j < r; ++j) {
        for (std::size_t k = 0; k < d; ++k) {
            const std::size_t row = (j - 1) * d + k;
            for (std::size_t t = 0; t < keep; ++t) {
                m(row, j * keep + t) = a[subsets[j][t]][k];
                m(row, t) -= a[subsets[0][t]][k];
            }
        }
    }
    for (std::size_t j = 0; j < r; ++j) {
        const std::size_t row = (r - 1) * d + j;
        for (std::size_t t = 0; t < keep; ++t) m(row, j * keep + t) = 1.0;
        b[row] = 1.0;
    }
    const auto res = lp::solve_feasibility(m, b, true);
    if (res.status != lp::Status::Optimal) return std::nullopt;

    Point q(d, 0.0);
    for (std::size_t t = 0; t < keep; ++t)
        for (std::size_t k = 0; k < d; ++k) q[k] += res.beta[t] * a[subsets[0][t]][k];
    return q;
}

}  // namespace rvc
