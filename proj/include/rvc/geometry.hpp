#pragma once

#include <optional>
#include <vector>

#include "rvc/types.hpp"

namespace rvc {

/// Boundary classification tolerance used by the membership predicates.
inline constexpr double kDefaultMembershipTol = 1e-7;

/// True iff q is a convex combination of the points of s, up to an equality
/// residual of `tol`.
bool hull_contains(const Point& q, const PointSet& s, double tol = kDefaultMembershipTol);

/// Index lists of every (m - n)-subset of {0..m-1}, lexicographic.
std::vector<std::vector<std::size_t>> reduced_subset_indices(std::size_t m, std::size_t n);

/// All sub-multisets of s obtained by dropping exactly n points, in
/// lexicographic order of the kept indices.
std::vector<PointSet> enumerate_reduced_subsets(const PointSet& s, std::size_t n);

/// Membership in the intersection of the hulls of all (m - n)-subsets of a.
bool psi_contains(const Point& q, const PointSet& a, std::size_t n,
                  double tol = kDefaultMembershipTol);

/// Some point of that intersection, or nullopt when it is empty.
///
/// Encodes the intersection directly: one weight vector per reduced subset,
/// every subset combination tied to the first one. This is a separate route
/// from the circulant system used by the consensus kernel, so the two can be
/// checked against each other.
std::optional<Point> psi_point_oracle(const PointSet& a, std::size_t n);

}  // namespace rvc
