#include "rvc/experiment.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rvc/baselines.hpp"

namespace rvc {

using nlohmann::json;

const char* to_string(Algorithm a) {
    switch (a) {
        case Algorithm::MiddlePoints: return "middle-points";
        case Algorithm::Wmsr: return "wmsr";
        case Algorithm::Grouped: return "grouped";
    }
    return "unknown";
}

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ConfigError(where + ": " + what);
}

const json& object(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) fail(where, "expected an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : j.items())
        if (!ok.count(key)) fail(where, "unknown key '" + key + "'");
    return j;
}

const json& field(const json& j, const char* key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) fail(where, std::string("missing '") + key + "'");
    return *it;
}

std::uint64_t as_uint(const json& j, const std::string& where) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return j.get<std::uint64_t>();
    fail(where, "expected a non-negative integer");
}

int as_int(const json& j, const std::string& where) {
    if (!j.is_number_integer()) fail(where, "expected an integer");
    return j.get<int>();
}

double as_number(const json& j, const std::string& where) {
    if (!j.is_number()) fail(where, "expected a number");
    return j.get<double>();
}

std::string as_string(const json& j, const std::string& where) {
    if (!j.is_string()) fail(where, "expected a string");
    return j.get<std::string>();
}

Point as_point(const json& j, const std::string& where) {
    if (!j.is_array()) fail(where, "expected an array of numbers");
    Point p;
    for (std::size_t i = 0; i < j.size(); ++i) p.push_back(as_number(j[i], where + "[" + std::to_string(i) + "]"));
    return p;
}

GraphGenerator parse_generator(const json& j, const std::string& where) {
    object(j, where, {"generator", "n"});
    GraphGenerator g{as_string(field(j, "generator", where), where + ".generator"),
                     as_uint(field(j, "n", where), where + ".n")};
    if (g.name != "complete" && g.name != "cycle" && g.name != "path")
        fail(where, "unknown generator '" + g.name + "'");
    return g;
}

GraphSource parse_graph(const json& j) {
    const std::string where = "graph";
    if (!j.is_object()) fail(where, "expected an object");
    if (j.contains("file")) {
        object(j, where, {"file"});
        return GraphFile{as_string(j["file"], "graph.file")};
    }
    if (j.contains("growth")) {
        object(j, where, {"growth"});
        const json& g = object(j["growth"], "graph.growth", {"base", "r", "s", "degree", "n", "seed"});
        GraphGrowth out;
        out.base = parse_generator(field(g, "base", "graph.growth"), "graph.growth.base");
        out.r = as_int(field(g, "r", "graph.growth"), "graph.growth.r");
        out.s = as_int(field(g, "s", "graph.growth"), "graph.growth.s");
        out.degree = as_uint(field(g, "degree", "graph.growth"), "graph.growth.degree");
        out.n = as_uint(field(g, "n", "graph.growth"), "graph.growth.n");
        if (g.contains("seed")) out.seed = as_uint(g["seed"], "graph.growth.seed");
        return out;
    }
    return parse_generator(j, where);
}

StrategySpec parse_strategy(const json& j, const std::string& where) {
    if (!j.is_object()) fail(where, "expected an object");
    const std::string kind = as_string(field(j, "kind", where), where + ".kind");
    StrategySpec spec;
    if (kind == "scripted") {
        object(j, where, {"kind", "script"});
        const std::string script = as_string(field(j, "script", where), where + ".script");
        if (script != "sine") fail(where, "unknown script '" + script + "'");
        spec.strategy = Scripted{Scripted::Script::Sine};
    } else if (kind == "stubborn") {
        object(j, where, {"kind", "value"});
        spec.strategy = Stubborn{as_point(field(j, "value", where), where + ".value")};
    } else if (kind == "random") {
        object(j, where, {"kind", "lo", "hi", "seed"});
        RandomBounded s{as_point(field(j, "lo", where), where + ".lo"),
                        as_point(field(j, "hi", where), where + ".hi"), 0};
        if (j.contains("seed")) {
            s.seed = as_uint(j["seed"], where + ".seed");
        } else {
            spec.seed_from_run = true;
        }
        spec.strategy = s;
    } else if (kind == "hull_escape") {
        object(j, where, {"kind", "target", "gain"});
        HullEscape s{as_point(field(j, "target", where), where + ".target"), 1.0};
        if (j.contains("gain")) s.gain = as_number(j["gain"], where + ".gain");
        spec.strategy = s;
    } else {
        fail(where, "unknown strategy kind '" + kind + "'");
    }
    return spec;
}

InitSpec parse_init(const json& j) {
    if (!j.is_object()) fail("init", "expected an object");
    if (j.contains("box")) {
        object(j, "init", {"box"});
        const json& b = object(j["box"], "init.box", {"lo", "hi"});
        return InitBox{as_point(field(b, "lo", "init.box"), "init.box.lo"),
                       as_point(field(b, "hi", "init.box"), "init.box.hi")};
    }
    object(j, "init", {"states"});
    const json& s = field(j, "states", "init");
    if (!s.is_array()) fail("init.states", "expected an array");
    InitStates out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const std::string where = "init.states[" + std::to_string(i) + "]";
        out.states.push_back(s[i].is_null() ? Point{} : as_point(s[i], where));
    }
    return out;
}

Grouping parse_grouping(const json& j) {
    if (!j.is_array()) fail("grouping", "expected an array of arrays");
    Grouping g;
    for (std::size_t b = 0; b < j.size(); ++b) {
        const std::string where = "grouping[" + std::to_string(b) + "]";
        if (!j[b].is_array()) fail(where, "expected an array");
        std::vector<std::size_t> block;
        for (const auto& q : j[b]) block.push_back(as_uint(q, where));
        g.push_back(std::move(block));
    }
    return g;
}

json emit_generator(const GraphGenerator& g) { return {{"generator", g.name}, {"n", g.n}}; }

json emit_strategy(const StrategySpec& spec) {
    return std::visit(
        [&](const auto& s) -> json {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Scripted>) {
                return {{"kind", "scripted"}, {"script", "sine"}};
            } else if constexpr (std::is_same_v<T, Stubborn>) {
                return {{"kind", "stubborn"}, {"value", s.value}};
            } else if constexpr (std::is_same_v<T, RandomBounded>) {
                json j = {{"kind", "random"}, {"lo", s.lo}, {"hi", s.hi}};
                if (!spec.seed_from_run) j["seed"] = s.seed;
                return j;
            } else {
                return {{"kind", "hull_escape"}, {"target", s.target}, {"gain", s.gain}};
            }
        },
        spec.strategy);
}

Graph build_generator(const GraphGenerator& g) {
    if (g.name == "complete") return complete_graph(g.n);
    if (g.name == "cycle") return cycle_graph(g.n);
    return path_graph(g.n);
}

}  // namespace

Experiment parse_experiment(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("experiment file is not valid JSON: ") + e.what());
    }
    object(root, "experiment",
           {"name", "graph", "d", "F", "attack", "faults", "strategies", "init", "algorithm", "grouping",
            "max_rounds", "tol", "seed", "output_dir"});

    Experiment e;
    if (root.contains("name")) e.name = as_string(root["name"], "name");
    e.graph = parse_graph(field(root, "graph", "experiment"));
    e.d = as_uint(field(root, "d", "experiment"), "d");
    e.faults_bound = as_uint(field(root, "F", "experiment"), "F");

    const std::string attack = root.contains("attack") ? as_string(root["attack"], "attack") : "f-total";
    if (attack == "f-total") {
        e.attack = AttackKind::FTotal;
    } else if (attack == "f-local") {
        e.attack = AttackKind::FLocal;
    } else {
        fail("attack", "expected 'f-total' or 'f-local', got '" + attack + "'");
    }

    if (root.contains("faults")) {
        const json& f = root["faults"];
        if (!f.is_array()) fail("faults", "expected an array of node ids");
        for (const auto& id : f) e.faults.push_back(as_uint(id, "faults"));
    }
    if (root.contains("strategies")) {
        const json& s = root["strategies"];
        if (!s.is_object()) fail("strategies", "expected an object keyed by node id");
        for (const auto& [key, value] : s.items()) {
            NodeId id = 0;
            std::size_t used = 0;
            try {
                id = std::stoull(key, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || used != key.size()) fail("strategies", "key '" + key + "' is not a node id");
            e.strategies[id] = parse_strategy(value, "strategies." + key);
        }
    }
    e.init = parse_init(field(root, "init", "experiment"));

    const std::string algo =
        root.contains("algorithm") ? as_string(root["algorithm"], "algorithm") : "middle-points";
    if (algo == "middle-points") {
        e.algorithm = Algorithm::MiddlePoints;
    } else if (algo == "wmsr") {
        e.algorithm = Algorithm::Wmsr;
    } else if (algo == "grouped") {
        e.algorithm = Algorithm::Grouped;
    } else {
        fail("algorithm", "expected 'middle-points', 'wmsr' or 'grouped', got '" + algo + "'");
    }
    if (root.contains("grouping")) {
        if (e.algorithm != Algorithm::Grouped) fail("grouping", "only valid with algorithm 'grouped'");
        e.grouping = parse_grouping(root["grouping"]);
    } else if (e.algorithm == Algorithm::Grouped) {
        fail("experiment", "algorithm 'grouped' needs 'grouping'");
    }

    if (root.contains("max_rounds")) e.max_rounds = as_uint(root["max_rounds"], "max_rounds");
    if (root.contains("tol")) e.tol = as_number(root["tol"], "tol");
    if (root.contains("seed")) e.seed = as_uint(root["seed"], "seed");
    if (root.contains("output_dir")) e.output_dir = as_string(root["output_dir"], "output_dir");
    return e;
}

Experiment load_experiment(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open experiment file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_experiment(buf.str());
}

std::string emit_experiment(const Experiment& e) {
    json root;
    root["name"] = e.name;
    root["graph"] = std::visit(
        [](const auto& g) -> json {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, GraphFile>) {
                return {{"file", g.path}};
            } else if constexpr (std::is_same_v<T, GraphGenerator>) {
                return emit_generator(g);
            } else {
                json growth = {{"base", emit_generator(g.base)}, {"r", g.r},      {"s", g.s},
                               {"degree", g.degree},             {"n", g.n}};
                if (g.seed) growth["seed"] = *g.seed;
                return {{"growth", growth}};
            }
        },
        e.graph);
    root["d"] = e.d;
    root["F"] = e.faults_bound;
    root["attack"] = e.attack == AttackKind::FTotal ? "f-total" : "f-local";
    root["faults"] = e.faults;
    json strategies = json::object();
    for (const auto& [id, spec] : e.strategies) strategies[std::to_string(id)] = emit_strategy(spec);
    root["strategies"] = strategies;
    if (const auto* box = std::get_if<InitBox>(&e.init)) {
        root["init"] = {{"box", {{"lo", box->lo}, {"hi", box->hi}}}};
    } else {
        json states = json::array();
        for (const auto& x : std::get<InitStates>(e.init).states)
            states.push_back(x.empty() ? json(nullptr) : json(x));
        root["init"] = {{"states", states}};
    }
    root["algorithm"] = to_string(e.algorithm);
    if (e.grouping) root["grouping"] = *e.grouping;
    root["max_rounds"] = e.max_rounds;
    root["tol"] = e.tol;
    root["seed"] = e.seed;
    root["output_dir"] = e.output_dir;
    return root.dump(2) + "\n";
}

SimConfig to_sim_config(const Experiment& e, const std::filesystem::path& base_dir,
                        std::optional<std::uint64_t> seed) {
    const std::uint64_t run_seed = seed.value_or(e.seed);
    SimConfig c;
    try {
        c.graph = std::visit(
            [&](const auto& g) -> Graph {
                using T = std::decay_t<decltype(g)>;
                if constexpr (std::is_same_v<T, GraphFile>) {
                    std::filesystem::path p(g.path);
                    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
                    return read_graph_file(p.string());
                } else if constexpr (std::is_same_v<T, GraphGenerator>) {
                    return build_generator(g);
                } else {
                    return grow_robust_graph_to(build_generator(g.base), g.r, g.s, g.degree, g.n,
                                                g.seed.value_or(run_seed));
                }
            },
            e.graph);
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& err) {
        throw ConfigError(std::string("graph: ") + err.what());
    }

    c.d = e.d;
    c.attack = {e.attack, e.faults_bound};
    c.faults = e.faults;
    for (const auto& [id, spec] : e.strategies) {
        AdversaryStrategy s = spec.strategy;
        if (spec.seed_from_run) std::get<RandomBounded>(s).seed = run_seed;
        c.strategies[id] = s;
    }
    if (const auto* box = std::get_if<InitBox>(&e.init)) {
        if (box->lo.size() != e.d || box->hi.size() != e.d) throw ConfigError("init.box: corners must have length d");
        try {
            c.initial_states = draw_initial_states(c.graph.size(), box->lo, box->hi, run_seed);
        } catch (const Error& err) {
            throw ConfigError(std::string("init.box: ") + err.what());
        }
    } else {
        c.initial_states = std::get<InitStates>(e.init).states;
    }
    c.max_rounds = e.max_rounds;
    c.convergence_tol = e.tol;
    c.seed = run_seed;
    if (e.algorithm == Algorithm::Grouped) c.grouping = e.grouping;
    validate_config(c);
    return c;
}

Trace run_experiment(const Experiment& e, const SimConfig& config) {
    switch (e.algorithm) {
        case Algorithm::MiddlePoints: return run(config);
        case Algorithm::Wmsr: return wmsr_vector_run(config);
        case Algorithm::Grouped: return run_grouped(config);
    }
    throw InvalidArgument("unknown algorithm");
}

std::filesystem::path output_directory(const Experiment& e) {
    if (const char* env = std::getenv("RVC_OUTPUT_DIR"); env && *env) return env;
    return e.output_dir;
}

SummaryReport summarize(const Trace& trace, std::size_t n_benign, double wall_clock_s) {
    SummaryReport s;
    s.converged = trace.termination == Termination::Converged;
    s.rounds_used = trace.rounds.empty() ? 0 : trace.rounds.size() - 1;
    s.final_max_diameter = trace.rounds.empty() ? 0.0 : trace.final_round().metrics.max_diameter();
    s.validity_always = trace.validity_always();
    s.rate_bound_ok = rate_bound_check(trace, trace.d, n_benign);
    s.wall_clock_s = wall_clock_s;
    return s;
}

}  // namespace rvc
