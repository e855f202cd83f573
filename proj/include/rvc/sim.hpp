#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <vector>

#include "rvc/adversary.hpp"
#include "rvc/graph.hpp"
#include "rvc/kernel.hpp"
#include "rvc/types.hpp"

namespace rvc {

/// 1-based coordinate indices; blocks must partition {1..d}.
using Grouping = std::vector<std::vector<std::size_t>>;

struct SimConfig {
    Graph graph;
    std::size_t d = 2;
    AttackModel attack;
    std::vector<NodeId> faults;
    std::map<NodeId, AdversaryStrategy> strategies;
    /// One entry per node. Entries of faulty nodes are ignored and may be empty.
    std::vector<Point> initial_states;
    std::size_t max_rounds = 1000;
    double convergence_tol = 1e-6;
    std::uint64_t seed = 0;
    std::optional<Grouping> grouping;

    std::size_t fault_bound() const { return attack.faults; }
    std::vector<bool> faulty_mask() const;
    std::size_t benign_count() const;

    bool operator==(const SimConfig&) const = default;
};

/// Checks every structural invariant of the config (fault set vs. attack
/// model, strategy per faulty node, state dimensions, grouping partition).
/// Throws ConfigError. Does not check the degree assumption.
void validate_config(const SimConfig& config);

/// Throws AssumptionViolation if some benign node has fewer than
/// (d_g+1)F+1 neighbours for a block of size d_g.
void require_degree_assumption(const SimConfig& config, const Grouping& blocks);

/// n points drawn uniformly from the box [lo, hi] with the given seed.
std::vector<Point> draw_initial_states(std::size_t n, const Point& lo, const Point& hi,
                                       std::uint64_t seed);

struct MetricsRecord {
    /// Per coordinate: min, max and spread over benign agents.
    std::vector<double> min;
    std::vector<double> max;
    std::vector<double> diameter;
    double max_pairwise_distance = 0.0;
    /// Every benign state lies in the hull of the initial benign states.
    bool validity = true;
    /// Same check restricted to each grouping block (empty without grouping).
    std::vector<bool> group_validity;
    /// Benign updates in this round whose middle points broke the order
    /// statistic bounds.
    std::size_t order_bound_violations = 0;

    double max_diameter() const;
};

struct Broadcast {
    NodeId sender = 0;
    NodeId receiver = 0;
    Point value;
};

struct RoundRecord {
    std::size_t round = 0;
    /// Benign agents: state x(k). Faulty agents: the value sent to their
    /// lowest-id neighbour this round.
    std::vector<Point> states;
    /// Every value a faulty agent sent this round, per receiver.
    std::vector<Broadcast> byzantine;
    MetricsRecord metrics;
};

enum class Termination { Converged, RoundLimit };

struct Trace {
    std::size_t d = 0;
    std::vector<bool> faulty;
    std::vector<RoundRecord> rounds;
    Termination termination = Termination::RoundLimit;

    const RoundRecord& final_round() const { return rounds.back(); }
    bool validity_always() const;
    std::size_t order_bound_violations() const;
};

/// Hull-membership tolerance for the validity flag.
inline constexpr double kValidityTol = 1e-9;
/// Tolerance of the order statistic bounds on middle points.
inline constexpr double kOrderBoundTol = 1e-7;

struct StepResult {
    std::vector<Point> next;
    std::vector<Broadcast> byzantine;
    std::size_t order_bound_violations = 0;
};

/// What a benign agent does with its inbox. Returns the next state; may bump
/// `order_bound_violations`.
using BenignRule =
    std::function<Point(NodeId agent, const RoundInputs& inputs, std::size_t& order_bound_violations)>;

/// Values faulty agents send in round k, computed against `snapshot`.
std::vector<Broadcast> faulty_messages(const SimConfig& config, const std::vector<Point>& snapshot,
                                       std::size_t round);

/// Gathers agent i's inbox for round k: benign neighbours' snapshot states
/// and the faulty neighbours' values addressed to i.
std::vector<ReceivedValue> inbox(const SimConfig& config, const std::vector<Point>& snapshot,
                                 const std::vector<Broadcast>& byzantine, NodeId agent);

/// One synchronous round of the middle-point algorithm over all benign agents.
StepResult step(const SimConfig& config, const std::vector<Point>& snapshot, std::size_t round);

/// Same, with each coordinate block updated independently and rejoined.
StepResult step_grouped(const SimConfig& config, const Grouping& blocks,
                        const std::vector<Point>& snapshot, std::size_t round);

/// Generic synchronous driver: iterates `rule` until the largest benign
/// per-coordinate spread drops below the tolerance or max_rounds is hit.
Trace run_with_rule(const SimConfig& config, const BenignRule& rule);

/// The middle-point algorithm on the full d-dimensional state.
Trace run(const SimConfig& config);

/// The middle-point algorithm applied per block of config.grouping.
Trace run_grouped(const SimConfig& config);

/// Checks Delta_1(k + d*n_benign) <= (1 - 1/(2*3^(d*n_benign))) Delta_1(k)
/// at every k for which both rounds are in the trace.
bool rate_bound_check(const Trace& trace, std::size_t d, std::size_t n_benign);

/// Least-squares slope of log(spread of coordinate `dim`) against the round
/// index, over rounds with positive spread. nullopt with fewer than two such
/// rounds.
std::optional<double> log_spread_slope(const Trace& trace, std::size_t dim = 0);

// CSV exports. Numbers use round-trip precision so equal runs give equal bytes.
void write_trace_csv(std::ostream& out, const Trace& trace);
void write_metrics_csv(std::ostream& out, const Trace& trace);
void write_byzantine_csv(std::ostream& out, const Trace& trace);

}  // namespace rvc
