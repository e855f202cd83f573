#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace rvc::cli {

// Process exit codes.
inline constexpr int kOk = 0;
inline constexpr int kCheckFailed = 1;  // also: unexpected runtime failure
inline constexpr int kBadInput = 2;
inline constexpr int kCapExceeded = 3;
inline constexpr int kAssumptionViolated = 4;

struct CheckGraphArgs {
    std::string path;
    int r = 1;
    std::optional<int> s;
    /// Min-degree check, only when both are given.
    std::optional<int> d;
    std::optional<int> faults;
    std::size_t cap = 14;
};

int check_graph(const CheckGraphArgs& args, std::ostream& out, std::ostream& err);

/// Writes trace.csv, metrics.csv and byzantine.csv into the output directory
/// and prints the summary.
int run(const std::string& experiment_path, std::ostream& out, std::ostream& err);

/// `count` replicates with seeds first_seed, first_seed+1, ... (first_seed
/// defaults to the file's seed). Writes sweep.csv and prints it.
int sweep(const std::string& experiment_path, std::size_t count, std::optional<std::uint64_t> first_seed,
          std::ostream& out, std::ostream& err);

struct GenGraphArgs {
    std::string kind;  // complete | cycle | path | growth
    std::size_t n = 0;
    // growth only
    std::size_t base = 0;
    int r = 1;
    int s = 1;
    std::size_t degree = 0;
    std::uint64_t seed = 0;
    /// Empty: write to `out`.
    std::string output;
};

int gen_graph(const GenGraphArgs& args, std::ostream& out, std::ostream& err);

}  // namespace rvc::cli
