#include "rvc/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "rvc/geometry.hpp"

namespace rvc {

std::size_t binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::size_t out = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        if (out > std::numeric_limits<std::size_t>::max() / (n - k + i))
            throw InvalidArgument("binomial coefficient overflows");
        out = out * (n - k + i) / i;
    }
    return out;
}

MiddlePointProblem::MiddlePointProblem(PointSet subset, std::size_t d, std::size_t faults)
    : subset_(std::move(subset)), d_(d), faults_(faults) {
    if (d_ == 0) throw InvalidArgument("dimension must be >= 1");
    if (subset_.dim != d_) throw DimensionMismatch("subset dimension differs from d");
    if (subset_.size() != kappa()) {
        throw InvalidArgument("middle-point subset needs exactly (d+1)F+1 = " +
                              std::to_string(kappa()) + " points, got " +
                              std::to_string(subset_.size()));
    }
}

std::size_t active_dimension(std::size_t round, std::size_t d) {
    if (d == 0) throw InvalidArgument("dimension must be >= 1");
    return round % d + 1;
}

ExtremeSubsets select_extreme_subsets(const std::vector<ReceivedValue>& received, std::size_t p,
                                      std::size_t d, std::size_t faults) {
    if (p < 1 || p > d) throw InvalidArgument("active dimension out of range");
    const std::size_t kappa = (d + 1) * faults + 1;
    if (received.size() < kappa) {
        throw AssumptionViolation("received " + std::to_string(received.size()) +
                                  " values but (d+1)F+1 = " + std::to_string(kappa) +
                                  " are required");
    }
    for (const auto& rv : received)
        if (rv.value.size() != d) throw DimensionMismatch("received value has wrong dimension");

    std::vector<const ReceivedValue*> order;
    order.reserve(received.size());
    for (const auto& rv : received) order.push_back(&rv);
    const std::size_t axis = p - 1;
    std::sort(order.begin(), order.end(), [axis](const ReceivedValue* a, const ReceivedValue* b) {
        if (a->value[axis] != b->value[axis]) return a->value[axis] < b->value[axis];
        return a->sender < b->sender;
    });

    ExtremeSubsets out;
    out.low.dim = d;
    out.high.dim = d;
    for (std::size_t i = 0; i < kappa; ++i) out.low.points.push_back(order[i]->value);
    for (std::size_t i = order.size() - kappa; i < order.size(); ++i)
        out.high.points.push_back(order[i]->value);
    return out;
}

namespace {

// The stacked system for an arbitrary point list: one block per subset that
// drops `faults` points, coupled through the circulant C (row i: +1 at block
// i, -1 at block i+1 mod r), then one convexity row per block.
lp::LinearProgram assemble_stacked(const std::vector<Point>& pts, std::size_t dim, std::size_t faults) {
    const auto blocks = reduced_subset_indices(pts.size(), faults);
    const std::size_t r = blocks.size();
    const std::size_t cols = pts.size() - faults;

    lp::LinearProgram lp;
    lp.a_eq = lp::Matrix(dim * r + r, r * cols);
    lp.b_eq.assign(dim * r + r, 0.0);
    lp.objective = lp::MaxMinSlack{};
    auto add_block = [&](std::size_t row_block, std::size_t col_block, double coef) {
        for (std::size_t k = 0; k < dim; ++k)
            for (std::size_t t = 0; t < cols; ++t)
                lp.a_eq(row_block * dim + k, col_block * cols + t) += coef * pts[blocks[col_block][t]][k];
    };
    for (std::size_t i = 0; i < r; ++i) {
        add_block(i, i, 1.0);
        add_block(i, (i + 1) % r, -1.0);
    }
    for (std::size_t j = 0; j < r; ++j) {
        for (std::size_t t = 0; t < cols; ++t) lp.a_eq(dim * r + j, j * cols + t) = 1.0;
        lp.b_eq[dim * r + j] = 1.0;
    }
    return lp;
}

// Weights are clipped at zero and renormalized per block first, so every
// block term is an exact convex combination even when the solver hands back
// round-off negatives on a degenerate (zero-slack) optimum. `spread` gets the
// largest sup-norm gap between a block term and the average.
Point block_average(const std::vector<Point>& pts, std::size_t dim, std::size_t faults,
                    const std::vector<double>& beta, double& spread) {
    const auto blocks = reduced_subset_indices(pts.size(), faults);
    const std::size_t r = blocks.size();
    const std::size_t cols = pts.size() - faults;
    std::vector<Point> terms(r, Point(dim, 0.0));
    Point y(dim, 0.0);
    for (std::size_t j = 0; j < r; ++j) {
        double mass = 0.0;
        for (std::size_t t = 0; t < cols; ++t) mass += std::max(0.0, beta[j * cols + t]);
        for (std::size_t t = 0; t < cols; ++t) {
            const double w = std::max(0.0, beta[j * cols + t]) / mass;
            for (std::size_t k = 0; k < dim; ++k) terms[j][k] += w * pts[blocks[j][t]][k];
        }
        for (std::size_t k = 0; k < dim; ++k) y[k] += terms[j][k];
    }
    for (double& v : y) v /= static_cast<double>(r);
    spread = 0.0;
    for (const auto& t : terms)
        for (std::size_t k = 0; k < dim; ++k) spread = std::max(spread, std::abs(t[k] - y[k]));
    return y;
}

// Helly guarantees an exact nonnegative solution, but in floating point the
// optimum of a zero-slack instance can come back slightly negative, and
// clipping is only harmless when the clipped block terms still agree. Within
// this gap (zoomed units) every kept hull holds a point that close to y.
constexpr double kBlockAgreementTol = 1e-5;
// Agreement at which a solve is taken without trying the fallbacks.
constexpr double kBlockAgreementGood = 1e-12;

// Late in a run a subset is often flat up to its last few bits, and the safe
// region is then a sliver far thinner than any solver tolerance. Projecting
// onto the dominant directions moves each point by at most the largest
// dropped singular value (times the zoom scale), so a direction is dropped
// outright when that thickness is below this, relative to the coordinates. Measured in
// original units on purpose: a far outlier inflates the leading singular
// value, and a relative cut would flatten a genuine cluster.
constexpr double kFlatTol = 1e-12;

// A point this many times farther out than the rest gets pulled in, to about
// kFarTarget times their radius.
constexpr double kFarRatio = 1e3;
constexpr double kFarTarget = 10.0;

// Zoom boxes narrower than this, relative to the coordinates, are round-off.
constexpr double kRoundoffBox = 1e-13;

struct Candidate {
    Point y;
    // Sup-norm distance bound from y to every kept hull, in working units.
    double error = INFINITY;
};

// Solves the stacked program on `pts` and returns the averaged middle point
// whose block terms agree best. Tries the plain system, then the same system
// with each column divided by its point's magnitude (beta_i = gamma_i / s_i),
// then both at a looser equality tolerance, stopping at the first good one.
// The later forms only matter in zero-slack cases, where every nonnegative
// solution is optimal anyway.
std::optional<Candidate> solve_stacked(const std::vector<Point>& pts, std::size_t dim, std::size_t faults,
                                       std::string& why) {
    const auto system = assemble_stacked(pts, dim, faults);
    const auto blocks = reduced_subset_indices(pts.size(), faults);
    const std::size_t cols = pts.size() - faults;
    std::vector<double> column_scale(system.a_eq.cols(), 1.0);
    for (std::size_t j = 0; j < blocks.size(); ++j)
        for (std::size_t t = 0; t < cols; ++t)
            for (double v : pts[blocks[j][t]])
                column_scale[j * cols + t] = std::max(column_scale[j * cols + t], std::abs(v));
    lp::LinearProgram rescaled = system;
    for (std::size_t r = 0; r < rescaled.a_eq.rows(); ++r)
        for (std::size_t c = 0; c < rescaled.a_eq.cols(); ++c) rescaled.a_eq(r, c) /= column_scale[c];

    std::optional<Candidate> best;
    for (double feas : {1e-9, 1e-7}) {
        for (bool use_rescaled : {false, true}) {
            lp::Tolerances tol;
            tol.feas = feas;
            auto res = lp::solve_max_min_slack(use_rescaled ? rescaled : system, tol);
            if (res.status != lp::Status::Optimal) {
                why = lp::to_string(res.status);
                continue;
            }
            if (use_rescaled)
                for (std::size_t c = 0; c < res.beta.size(); ++c) res.beta[c] /= column_scale[c];
            Candidate cand;
            cand.y = block_average(pts, dim, faults, res.beta, cand.error);
            if (!(cand.error < INFINITY)) continue;  // NaN from an all-zero block
            if (!best || cand.error < best->error) best = std::move(cand);
            if (best->error <= kBlockAgreementGood) return best;
            why = "block terms " + std::to_string(best->error) + " apart";
        }
    }
    return best;
}

}  // namespace

lp::LinearProgram assemble_lemma1_system(const MiddlePointProblem& prob) {
    return assemble_stacked(prob.subset().points, prob.dim(), prob.faults());
}

Point middle_point(const MiddlePointProblem& prob) {
    const std::size_t d = prob.dim();
    const std::size_t f = prob.faults();
    const PointSet& pts = prob.subset();

    // Every kept subset misses at most F points, so the safe region sits in the
    // box spanned per coordinate by the (F+1)-th smallest and largest entries.
    // Zoom onto that box: a far outlier then cannot squash the region below
    // the solver tolerances. Affine maps leave the weights unchanged.
    Point center(d);
    double scale = 0.0;
    std::vector<double> column(pts.size());
    for (std::size_t k = 0; k < d; ++k) {
        for (std::size_t i = 0; i < pts.size(); ++i) column[i] = pts[i][k];
        std::sort(column.begin(), column.end());
        const double lo = column[f];
        const double hi = column[column.size() - 1 - f];
        center[k] = lo + 0.5 * (hi - lo);
        scale = std::max(scale, 0.5 * (hi - lo));
    }
    // The safe region lies in the box, so once the box is down to round-off
    // its centre is as good an answer as any program would give.
    double magnitude = 1.0;
    for (double c : center) magnitude = std::max(magnitude, std::abs(c));
    if (scale <= kRoundoffBox * magnitude) return center;

    Eigen::MatrixXd u(pts.size(), d);
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t k = 0; k < d; ++k) u(i, k) = (pts[i][k] - center[k]) / scale;

    // Far outliers: pull each one in with x -> x / (1 + <w, x>), w pointing at
    // it. Projective maps with a positive denominator on every point carry
    // hulls to hulls, so the safe region maps onto the new one and the answer
    // maps back exactly. Without this the coupling rows span many orders of
    // magnitude and a weight at round-off level moves the block terms.
    std::vector<Eigen::RowVectorXd> pulls;
    for (std::size_t pass = 0; pass < pts.size(); ++pass) {
        const Eigen::VectorXd norms = u.rowwise().norm();
        Eigen::Index far = 0;
        const double far_norm = norms.maxCoeff(&far);
        double rest = 1.0, behind = 0.0;
        const Eigen::RowVectorXd dir = u.row(far) / far_norm;
        for (Eigen::Index i = 0; i < u.rows(); ++i) {
            if (i == far) continue;
            rest = std::max(rest, norms(i));
            behind = std::max(behind, -u.row(i).dot(dir));
        }
        if (far_norm <= kFarRatio * rest) break;
        // Keeps every other denominator >= 1/2; the outlier lands near
        // kFarTarget times the radius of the rest.
        double lambda = 1.0 / (kFarTarget * rest);
        if (behind > 0.0) lambda = std::min(lambda, 0.5 / behind);
        const Eigen::RowVectorXd w = lambda * dir;
        for (Eigen::Index i = 0; i < u.rows(); ++i) u.row(i) /= 1.0 + u.row(i).dot(w);
        pulls.push_back(w);
    }

    // Flat subsets: work in coordinates of their affine hull. For an exactly
    // flat subset the dropped coupling rows vanish identically, so the
    // program is the same one; otherwise projecting moves each point by at
    // most the largest dropped singular value. Anchor at the point nearest the
    // box centre; a mean would be dragged off by an outlier and cost the
    // inner points their precision.
    Eigen::Index nearest = 0;
    u.rowwise().squaredNorm().minCoeff(&nearest);
    const Eigen::RowVectorXd anchor = u.row(nearest);
    const Eigen::MatrixXd centred = u.rowwise() - anchor;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(centred, Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    auto dropped = [&](std::size_t rank) {
        return rank < static_cast<std::size_t>(sv.size()) ? sv(static_cast<Eigen::Index>(rank)) : 0.0;
    };
    // Directions at round-off thickness always go.
    std::size_t top_rank = 0;
    while (top_rank < d && dropped(top_rank) * scale > kFlatTol * magnitude) ++top_rank;

    auto solve_at = [&](std::size_t rank, std::string& why) -> std::optional<Candidate> {
        if (rank == 0) {
            Candidate c{Point(anchor.data(), anchor.data() + d), dropped(0)};
            return c;
        }
        const bool flat = rank < d;
        const Eigen::MatrixXd basis = svd.matrixV().leftCols(static_cast<Eigen::Index>(rank));
        const Eigen::MatrixXd coords = flat ? Eigen::MatrixXd(centred * basis) : u;
        std::vector<Point> work(pts.size(), Point(rank));
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t k = 0; k < rank; ++k) work[i][k] = coords(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
        auto cand = solve_stacked(work, rank, f, why);
        if (!cand || !flat) return cand;
        const Eigen::VectorXd back =
            anchor.transpose() + basis * Eigen::Map<const Eigen::VectorXd>(cand->y.data(), static_cast<Eigen::Index>(rank));
        cand->y.assign(back.data(), back.data() + d);
        cand->error += dropped(rank);
        return cand;
    };

    // Thin but not round-off thin: the solve may not resolve the sliver, so
    // compare against flattening it and keep whichever error bound is smaller.
    // Errors below round-off in original units count as none.
    const double negligible = std::max(kBlockAgreementGood, kFlatTol * magnitude / scale);
    const double acceptable = std::max(kBlockAgreementTol, negligible);
    std::string why;
    std::optional<Candidate> best = solve_at(top_rank, why);
    for (std::size_t rank = top_rank; rank-- > 0 && !(best && best->error <= negligible);) {
        if (best && dropped(rank) >= best->error) break;
        auto cand = solve_at(rank, why);
        if (cand && (!best || cand->error < best->error)) best = std::move(cand);
    }
    if (!best || !(best->error <= acceptable))
        throw SolverFailure("middle-point program rejected: " + (best ? "block terms " + std::to_string(best->error) + " apart" : why));
    Point y_zoomed = std::move(best->y);

    Eigen::Map<Eigen::RowVectorXd> y_row(y_zoomed.data(), static_cast<Eigen::Index>(d));
    for (auto w = pulls.rbegin(); w != pulls.rend(); ++w) y_row /= 1.0 - y_row.dot(*w);
    Point out(d);
    for (std::size_t k = 0; k < d; ++k) out[k] = center[k] + scale * y_zoomed[k];
    return out;
}

Point update_state(const Point& x, const Point& y, const Point& z) {
    if (x.size() != y.size() || x.size() != z.size())
        throw DimensionMismatch("update_state: operands differ in dimension");
    Point out(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) out[k] = (x[k] + y[k] + z[k]) / 3.0;
    return out;
}

bool RoundOutcome::order_bounds_hold(double tol) const {
    return y[p - 1] <= lower_order_stat + tol && z[p - 1] >= upper_order_stat - tol;
}

RoundOutcome benign_round(const RoundInputs& inputs, std::size_t d, std::size_t faults) {
    if (inputs.own_state.size() != d) throw DimensionMismatch("own state has wrong dimension");
    RoundOutcome out;
    out.p = active_dimension(inputs.round, d);
    const auto subsets = select_extreme_subsets(inputs.received, out.p, d, faults);
    out.y = middle_point(MiddlePointProblem(subsets.low, d, faults));
    out.z = middle_point(MiddlePointProblem(subsets.high, d, faults));
    out.next = update_state(inputs.own_state, out.y, out.z);

    std::vector<double> entries;
    entries.reserve(inputs.received.size());
    for (const auto& rv : inputs.received) entries.push_back(rv.value[out.p - 1]);
    std::sort(entries.begin(), entries.end());
    const std::size_t rank = d * faults;  // 0-based index of the (dF+1)-th
    out.lower_order_stat = entries[rank];
    out.upper_order_stat = entries[entries.size() - 1 - rank];
    return out;
}

}  // namespace rvc
