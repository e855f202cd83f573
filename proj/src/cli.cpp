#include "rvc/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "rvc/experiment.hpp"

namespace rvc::cli {

namespace {

std::string set_text(const std::vector<NodeId>& s) {
    std::string out = "{";
    for (std::size_t i = 0; i < s.size(); ++i) out += (i ? ", " : "") + std::to_string(s[i]);
    return out + "}";
}

const char* yes_no(bool b) { return b ? "true" : "false"; }

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write " + path.string());
    f << text;
}

template <class Fn>
std::string render(Fn&& fn) {
    std::ostringstream s;
    fn(s);
    return s.str();
}

}  // namespace

int check_graph(const CheckGraphArgs& args, std::ostream& out, std::ostream& err) {
    if (args.d.has_value() != args.faults.has_value()) {
        err << "error: --d and --F go together\n";
        return kBadInput;
    }
    Graph g;
    try {
        g = read_graph_file(args.path);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kBadInput;
    }
    out << "graph: " << g.size() << " nodes, " << g.edge_count() << " edges\n";

    bool ok = true;
    try {
        const RobustnessReport rep =
            args.s ? is_rs_robust(g, args.r, *args.s, args.cap) : is_r_robust(g, args.r, args.cap);
        if (args.s) {
            out << "(" << args.r << "," << *args.s << ")-robust: ";
        } else {
            out << args.r << "-robust: ";
        }
        out << (rep.holds ? "pass" : "fail") << "\n";
        if (!rep.holds) {
            out << "  witness: S1 = " << set_text(rep.witness.first) << ", S2 = " << set_text(rep.witness.second)
                << "\n";
        }
        ok = rep.holds;
    } catch (const EnumerationCapExceeded& e) {
        err << "error: " << e.what() << "\n";
        return kCapExceeded;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kBadInput;
    }

    if (args.d) {
        const int need = (*args.d + 1) * *args.faults + 1;
        std::size_t min_deg = g.size() ? g.degree(0) : 0;
        for (NodeId i = 0; i < g.size(); ++i) min_deg = std::min(min_deg, g.degree(i));
        const bool deg_ok = check_min_degree(g, *args.d, *args.faults);
        out << "min degree " << min_deg << " >= (d+1)F+1 = " << need << ": " << (deg_ok ? "pass" : "fail") << "\n";
        ok = ok && deg_ok;
    }
    return ok ? kOk : kCheckFailed;
}

int run(const std::string& experiment_path, std::ostream& out, std::ostream& err) {
    try {
        const Experiment e = load_experiment(experiment_path);
        const SimConfig config = to_sim_config(e, std::filesystem::path(experiment_path).parent_path());
        const auto t0 = std::chrono::steady_clock::now();
        const Trace trace = run_experiment(e, config);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const SummaryReport s = summarize(trace, config.benign_count(), secs);

        const auto dir = output_directory(e);
        std::filesystem::create_directories(dir);
        write_file(dir / "trace.csv", render([&](std::ostream& o) { write_trace_csv(o, trace); }));
        write_file(dir / "metrics.csv", render([&](std::ostream& o) { write_metrics_csv(o, trace); }));
        write_file(dir / "byzantine.csv", render([&](std::ostream& o) { write_byzantine_csv(o, trace); }));

        out << "experiment: " << e.name << "\n"
            << "algorithm: " << to_string(e.algorithm) << "\n"
            << "seed: " << config.seed << "\n"
            << "converged: " << yes_no(s.converged) << "\n"
            << "rounds_used: " << s.rounds_used << "\n"
            << "final_max_diameter: " << s.final_max_diameter << "\n"
            << "validity_always: " << yes_no(s.validity_always) << "\n"
            << "rate_bound_ok: " << yes_no(s.rate_bound_ok) << "\n"
            << "wall_clock_s: " << s.wall_clock_s << "\n"
            << "output_dir: " << dir.string() << "\n";
        return kOk;
    } catch (const ConfigError& e) {
        err << "invalid experiment: " << e.what() << "\n";
        return kBadInput;
    } catch (const AssumptionViolation& e) {
        err << "assumption violated: " << e.what() << "\n";
        return kAssumptionViolated;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kCheckFailed;
    }
}

int sweep(const std::string& experiment_path, std::size_t count, std::optional<std::uint64_t> first_seed,
          std::ostream& out, std::ostream& err) {
    try {
        const Experiment e = load_experiment(experiment_path);
        const auto base_dir = std::filesystem::path(experiment_path).parent_path();
        const std::uint64_t first = first_seed.value_or(e.seed);

        std::ostringstream table;
        table << "seed,converged,rounds_used,final_max_diameter,validity_always,rate_bound_ok,wall_clock_s\n";
        std::size_t converged = 0;
        for (std::size_t i = 0; i < count; ++i) {
            const std::uint64_t seed = first + i;
            const SimConfig config = to_sim_config(e, base_dir, seed);
            const auto t0 = std::chrono::steady_clock::now();
            const Trace trace = run_experiment(e, config);
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            const SummaryReport s = summarize(trace, config.benign_count(), secs);
            converged += s.converged;
            table << seed << ',' << s.converged << ',' << s.rounds_used << ',' << s.final_max_diameter << ','
                  << s.validity_always << ',' << s.rate_bound_ok << ',' << s.wall_clock_s << '\n';
        }

        const auto dir = output_directory(e);
        std::filesystem::create_directories(dir);
        write_file(dir / "sweep.csv", table.str());
        out << table.str();
        out << "runs: " << count << "\n";
        if (count > 0) {
            out << "convergence_fraction: " << static_cast<double>(converged) / static_cast<double>(count) << "\n";
        } else {
            out << "convergence_fraction: n/a\n";
        }
        return kOk;
    } catch (const ConfigError& e) {
        err << "invalid experiment: " << e.what() << "\n";
        return kBadInput;
    } catch (const AssumptionViolation& e) {
        err << "assumption violated: " << e.what() << "\n";
        return kAssumptionViolated;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kCheckFailed;
    }
}

int gen_graph(const GenGraphArgs& args, std::ostream& out, std::ostream& err) {
    Graph g;
    try {
        if (args.kind == "complete") {
            g = complete_graph(args.n);
        } else if (args.kind == "cycle") {
            g = cycle_graph(args.n);
        } else if (args.kind == "path") {
            g = path_graph(args.n);
        } else if (args.kind == "growth") {
            g = grow_robust_graph_to(complete_graph(args.base), args.r, args.s, args.degree, args.n, args.seed);
        } else {
            err << "error: unknown graph kind '" << args.kind << "'\n";
            return kBadInput;
        }
        if (args.output.empty()) {
            write_graph(out, g);
        } else {
            write_graph_file(args.output, g);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kBadInput;
    }
    return kOk;
}

}  // namespace rvc::cli
