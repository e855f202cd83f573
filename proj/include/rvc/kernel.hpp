#pragma once

#include <cstddef>
#include <vector>

#include "rvc/lp.hpp"
#include "rvc/types.hpp"

namespace rvc {

/// C(n, k) for the small arguments used here. Throws on overflow.
std::size_t binomial(std::size_t n, std::size_t k);

/// A subset of exactly (d+1)F+1 points whose safe intersection (drop any F)
/// we need a point of.
class MiddlePointProblem {
public:
    /// Throws InvalidArgument unless |subset| == (d+1)F+1 and subset.dim == d.
    MiddlePointProblem(PointSet subset, std::size_t d, std::size_t faults);

    const PointSet& subset() const { return subset_; }
    std::size_t dim() const { return d_; }
    std::size_t faults() const { return faults_; }

    /// (d+1)F+1
    std::size_t kappa() const { return (d_ + 1) * faults_ + 1; }
    /// Number of reduced subsets, C(kappa, F).
    std::size_t block_count() const { return binomial(kappa(), faults_); }
    /// Points per reduced subset, dF+1.
    std::size_t cols_per_block() const { return d_ * faults_ + 1; }

private:
    PointSet subset_;
    std::size_t d_;
    std::size_t faults_;
};

struct ReceivedValue {
    NodeId sender = 0;
    Point value;
};

struct RoundInputs {
    Point own_state;
    /// One value per neighbour, as addressed to this agent.
    std::vector<ReceivedValue> received;
    std::size_t round = 0;
};

/// (k mod d) + 1, the 1-based coordinate sorted at round k.
std::size_t active_dimension(std::size_t round, std::size_t d);

struct ExtremeSubsets {
    PointSet low;
    PointSet high;
};

/// Sorts by (p-th entry, sender id) and keeps the first and last (d+1)F+1
/// values. p is 1-based. Throws AssumptionViolation when fewer values arrive.
ExtremeSubsets select_extreme_subsets(const std::vector<ReceivedValue>& received, std::size_t p,
                                      std::size_t d, std::size_t faults);

/// The stacked equality system whose nonnegative solutions parametrize the
/// intersection: circulant coupling rows (C kron I_d) Y beta = 0 followed by
/// one convexity row per block, with the max-min-slack objective.
lp::LinearProgram assemble_lemma1_system(const MiddlePointProblem& prob);

/// (1/r) sum_j Y_j beta_j for the max-min-slack solution of the stacked
/// system. Before solving, the subset is zoomed onto its inner box, far
/// outliers are pulled in projectively and round-off-flat directions are
/// projected out, so the solver tolerances stay meaningful when the points
/// nearly coincide. All of these maps carry hulls to hulls.
/// Throws SolverFailure if no nonnegative solution is found.
Point middle_point(const MiddlePointProblem& prob);

/// Componentwise mean of x, y and z.
Point update_state(const Point& x, const Point& y, const Point& z);

struct RoundOutcome {
    Point next;
    Point y;
    Point z;
    /// 1-based active dimension.
    std::size_t p = 1;
    /// (dF+1)-th smallest and largest p-th entries among the received values.
    double lower_order_stat = 0.0;
    double upper_order_stat = 0.0;

    /// y_p <= lower_order_stat and z_p >= upper_order_stat, within tol.
    bool order_bounds_hold(double tol) const;
};

/// One full update of a benign agent.
RoundOutcome benign_round(const RoundInputs& inputs, std::size_t d, std::size_t faults);

}  // namespace rvc
