#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rvc/graph.hpp"
#include "rvc/types.hpp"

namespace rvc {

enum class AttackKind { FTotal, FLocal };

struct AttackModel {
    AttackKind kind = AttackKind::FTotal;
    std::size_t faults = 0;

    bool operator==(const AttackModel&) const = default;
};

/// F-total: |faults| <= F. F-local: every neighbourhood holds at most F faults.
bool validate_fault_set(const Graph& g, const std::vector<NodeId>& faults, const AttackModel& model);

// Faulty-agent behaviours. Each one is a pure function of its parameters and
// (round, sender, receiver, observation).

/// Fixed trajectories indexed by round, identical for every receiver.
struct Scripted {
    enum class Script {
        /// (4.5 sin(k/5), k/25 + 1); two-dimensional only.
        Sine,
    };
    Script script = Script::Sine;
    bool operator==(const Scripted&) const = default;
};

/// Always sends the same value.
struct Stubborn {
    Point value;
    bool operator==(const Stubborn&) const = default;
};

/// Independent uniform draw in [lo, hi] per (round, sender, receiver).
struct RandomBounded {
    Point lo;
    Point hi;
    std::uint64_t seed = 0;
    bool operator==(const RandomBounded&) const = default;
};

/// Sends target + gain * (target - c), where c is the centroid of the benign
/// states the receiver currently sees. Pushes each receiver away from its own
/// neighbourhood.
struct HullEscape {
    Point target;
    double gain = 1.0;
    bool operator==(const HullEscape&) const = default;
};

using AdversaryStrategy = std::variant<Scripted, Stubborn, RandomBounded, HullEscape>;

/// Throws DimensionMismatch / InvalidArgument if the parameters do not fit d.
void validate_strategy(const AdversaryStrategy& strategy, std::size_t d);

/// Everything a faulty agent is allowed to look at: the full previous-round
/// state of every agent plus the topology.
struct Observation {
    const Graph& graph;
    std::span<const Point> states;
    const std::vector<bool>& faulty;
};

Point adversary_value(const AdversaryStrategy& strategy, std::size_t round, NodeId sender,
                      NodeId receiver, const Observation& obs, std::size_t d);

/// Short human-readable label, e.g. "stubborn".
std::string strategy_name(const AdversaryStrategy& strategy);

}  // namespace rvc
