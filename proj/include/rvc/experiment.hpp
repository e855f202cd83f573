#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rvc/adversary.hpp"
#include "rvc/sim.hpp"

namespace rvc {

// Experiment files are JSON. Every object rejects keys it does not know.

struct GraphFile {
    /// Relative paths resolve against the experiment file's directory.
    std::string path;
    bool operator==(const GraphFile&) const = default;
};

struct GraphGenerator {
    std::string name;  // complete | cycle | path
    std::size_t n = 0;
    bool operator==(const GraphGenerator&) const = default;
};

/// Growth rule applied to a generated base graph until it has n nodes.
struct GraphGrowth {
    GraphGenerator base;
    int r = 1;
    int s = 1;
    std::size_t degree = 1;
    std::size_t n = 0;
    /// Defaults to the run seed, so sweeps regenerate the graph per replicate.
    std::optional<std::uint64_t> seed;
    bool operator==(const GraphGrowth&) const = default;
};

using GraphSource = std::variant<GraphFile, GraphGenerator, GraphGrowth>;

/// RandomBounded without a seed draws from the run seed.
struct StrategySpec {
    AdversaryStrategy strategy;
    bool seed_from_run = false;
    bool operator==(const StrategySpec&) const = default;
};

struct InitBox {
    Point lo;
    Point hi;
    bool operator==(const InitBox&) const = default;
};

/// One entry per node; faulty entries may be empty.
struct InitStates {
    std::vector<Point> states;
    bool operator==(const InitStates&) const = default;
};

using InitSpec = std::variant<InitBox, InitStates>;

enum class Algorithm { MiddlePoints, Wmsr, Grouped };

const char* to_string(Algorithm a);

struct Experiment {
    std::string name;
    GraphSource graph;
    std::size_t d = 2;
    std::size_t faults_bound = 0;
    AttackKind attack = AttackKind::FTotal;
    std::vector<NodeId> faults;
    std::map<NodeId, StrategySpec> strategies;
    InitSpec init;
    Algorithm algorithm = Algorithm::MiddlePoints;
    std::optional<Grouping> grouping;
    std::size_t max_rounds = 1000;
    double tol = 1e-6;
    std::uint64_t seed = 0;
    std::string output_dir = "rvc_out";

    bool operator==(const Experiment&) const = default;
};

/// Throws ConfigError on malformed JSON, unknown keys, wrong types or
/// missing required fields.
Experiment parse_experiment(const std::string& text);
Experiment load_experiment(const std::filesystem::path& path);

/// Canonical JSON text; parse_experiment(emit_experiment(e)) == e.
std::string emit_experiment(const Experiment& e);

/// Builds the graph, draws initial states and resolves seeds. `seed`
/// overrides the file's seed (used by sweeps). `base_dir` anchors relative
/// graph paths. Runs validate_config; throws ConfigError on any problem.
SimConfig to_sim_config(const Experiment& e, const std::filesystem::path& base_dir = {},
                        std::optional<std::uint64_t> seed = std::nullopt);

/// Executes the experiment's algorithm on a built config.
Trace run_experiment(const Experiment& e, const SimConfig& config);

/// The directory outputs go to: $RVC_OUTPUT_DIR when set, else output_dir.
std::filesystem::path output_directory(const Experiment& e);

struct SummaryReport {
    bool converged = false;
    std::size_t rounds_used = 0;
    double final_max_diameter = 0.0;
    bool validity_always = false;
    bool rate_bound_ok = false;
    double wall_clock_s = 0.0;
};

SummaryReport summarize(const Trace& trace, std::size_t n_benign, double wall_clock_s);

}  // namespace rvc
