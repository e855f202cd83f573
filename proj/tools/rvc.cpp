#include <iostream>

#include <CLI11.hpp>

#include "rvc/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Resilient vector consensus: graph checks, simulations and sweeps"};
    app.require_subcommand(1);

    rvc::cli::CheckGraphArgs check;
    int d = -1;
    int faults = -1;
    int s = -1;
    auto* check_cmd = app.add_subcommand("check-graph", "Certify robustness and the minimum-degree condition");
    check_cmd->add_option("path", check.path, "Graph file")->required();
    check_cmd->add_option("-r,--r", check.r, "Robustness parameter r")->required();
    check_cmd->add_option("-s,--s", s, "Second robustness parameter s");
    check_cmd->add_option("-d,--d", d, "State dimension for the degree check");
    check_cmd->add_option("-F,--F", faults, "Fault bound for the degree check");
    check_cmd->add_option("--cap", check.cap, "Largest graph the brute-force checker accepts");

    std::string experiment;
    auto* run_cmd = app.add_subcommand("run", "Run one experiment file");
    run_cmd->add_option("experiment", experiment, "Experiment JSON")->required();

    std::size_t seeds = 10;
    std::uint64_t first_seed = 0;
    auto* sweep_cmd = app.add_subcommand("sweep", "Run seeded replicates of an experiment");
    sweep_cmd->add_option("experiment", experiment, "Experiment JSON")->required();
    sweep_cmd->add_option("--seeds", seeds, "Number of replicates");
    auto* first_opt = sweep_cmd->add_option("--first-seed", first_seed, "Seed of the first replicate");

    rvc::cli::GenGraphArgs gen;
    auto* gen_cmd = app.add_subcommand("gen-graph", "Write a generated graph file");
    gen_cmd->add_option("kind", gen.kind, "complete | cycle | path | growth")->required();
    gen_cmd->add_option("-n,--n", gen.n, "Number of nodes")->required();
    gen_cmd->add_option("--base", gen.base, "growth: size of the complete base graph");
    gen_cmd->add_option("--r", gen.r, "growth: r");
    gen_cmd->add_option("--s", gen.s, "growth: s");
    gen_cmd->add_option("--degree", gen.degree, "growth: links per new node");
    gen_cmd->add_option("--seed", gen.seed, "growth: seed");
    gen_cmd->add_option("-o,--output", gen.output, "Output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return rvc::cli::kBadInput;
    }

    if (*check_cmd) {
        if (s >= 0) check.s = s;
        if (d >= 0) check.d = d;
        if (faults >= 0) check.faults = faults;
        return rvc::cli::check_graph(check, std::cout, std::cerr);
    }
    if (*run_cmd) return rvc::cli::run(experiment, std::cout, std::cerr);
    if (*sweep_cmd) {
        std::optional<std::uint64_t> first;
        if (*first_opt) first = first_seed;
        return rvc::cli::sweep(experiment, seeds, first, std::cout, std::cerr);
    }
    return rvc::cli::gen_graph(gen, std::cout, std::cerr);
}
