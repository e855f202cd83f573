// Seeded search for an instance where W-MSR leaves the convex hull of the
// initial benign states while the middle-point algorithm does not. Writes the
// first hit as a graph file plus an experiment file.
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "rvc/baselines.hpp"
#include "rvc/experiment.hpp"

using namespace rvc;

int main(int argc, char** argv) {
    CLI::App app{"Search seeded instances for a W-MSR vs middle-point containment contrast"};
    std::string out_dir = ".";
    std::uint64_t first = 0;
    std::size_t tries = 1000;
    app.add_option("--out", out_dir, "Directory for the fixture files");
    app.add_option("--first-seed", first, "First seed tried");
    app.add_option("--tries", tries, "Number of seeds tried");
    CLI11_PARSE(app, argc, argv);

    for (std::uint64_t seed = first; seed < first + tries; ++seed) {
        Experiment e;
        e.name = "wmsr_contrast";
        e.graph = GraphGrowth{{"complete", 5}, 3, 2, 4, 8, seed};
        e.d = 2;
        e.faults_bound = 1;
        e.faults = {0};
        e.strategies[0] = StrategySpec{Stubborn{{0.0, 0.0}}, false};
        e.init = InitBox{{0, 0}, {1, 1}};
        e.seed = seed;
        e.max_rounds = 300;

        SimConfig c = to_sim_config(e);
        // Benign states as drawn; they become explicit in the fixture.
        const Trace w = wmsr_vector_run(c);
        if (w.validity_always()) continue;
        const Trace m = run(c);
        if (!m.validity_always() || m.termination != Termination::Converged) continue;

        const std::string graph_name = "wmsr_contrast_graph.txt";
        write_graph_file(out_dir + "/" + graph_name, c.graph);
        Experiment fixed = e;
        fixed.graph = GraphFile{graph_name};
        InitStates states{c.initial_states};
        states.states[0].clear();
        fixed.init = states;
        std::ofstream(out_dir + "/wmsr_contrast.json") << emit_experiment(fixed);
        std::cout << "seed " << seed << ": W-MSR left the hull, middle points stayed inside\n";
        return 0;
    }
    std::cout << "no contrast found\n";
    return 1;
}
