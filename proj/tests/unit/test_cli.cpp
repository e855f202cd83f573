#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "rvc/cli.hpp"
#include "rvc/experiment.hpp"

using namespace rvc;
namespace fs = std::filesystem;

namespace {

const fs::path kScenario = fs::path(RVC_SOURCE_DIR) / "scenarios" / "paper_sec7.json";

struct TempDir {
    fs::path path;
    TempDir() {
        std::random_device rd;
        path = fs::temp_directory_path() / ("rvc_cli_" + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void spit(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

const char* kSmall = R"({
  "name": "small",
  "graph": {"generator": "complete", "n": 6},
  "d": 2, "F": 1,
  "faults": [0],
  "strategies": {"0": {"kind": "random", "lo": [-5, -5], "hi": [5, 5]}},
  "init": {"box": {"lo": [0, 0], "hi": [1, 1]}},
  "seed": 4
})";

// Runs the CLI with outputs redirected into `dir`.
int run_into(const fs::path& dir, const fs::path& experiment, std::string* stdout_text = nullptr) {
    setenv("RVC_OUTPUT_DIR", dir.c_str(), 1);
    std::ostringstream out, err;
    int code = cli::run(experiment.string(), out, err);
    unsetenv("RVC_OUTPUT_DIR");
    if (stdout_text) *stdout_text = out.str() + err.str();
    return code;
}

}  // namespace

TEST_CASE("bundled scenario parses") {
    Experiment e = load_experiment(kScenario);
    CHECK(e.name == "paper_sec7");
    CHECK(e.d == 2);
    CHECK(e.faults_bound == 1);
    CHECK(e.faults == std::vector<NodeId>{1});
    CHECK(std::holds_alternative<GraphGrowth>(e.graph));
    SimConfig c = to_sim_config(e);
    CHECK(c.graph.size() == 20);
    CHECK(std::holds_alternative<Scripted>(c.strategies.at(1)));
}

TEST_CASE("round trip") {
    for (const std::string& text : {slurp(kScenario), std::string(kSmall)}) {
        Experiment a = parse_experiment(text);
        Experiment b = parse_experiment(emit_experiment(a));
        CHECK(a == b);
        CHECK(to_sim_config(a) == to_sim_config(b));
        CHECK(emit_experiment(a) == emit_experiment(b));
    }
    Experiment g = parse_experiment(R"({"graph": {"generator": "complete", "n": 5}, "d": 2, "F": 1,
        "init": {"states": [[0,0],[1,0],[0,1],[1,1],null]}, "faults": [4],
        "strategies": {"4": {"kind": "hull_escape", "target": [2, 2], "gain": 0.5}},
        "algorithm": "grouped", "grouping": [[1],[2]]})");
    CHECK(parse_experiment(emit_experiment(g)) == g);
    CHECK(to_sim_config(g).grouping == Grouping{{1}, {2}});
}

TEST_CASE("unknown keys and bad values are rejected") {
    auto bad = [](const std::string& text) { CHECK_THROWS_AS(parse_experiment(text), ConfigError); };
    bad(R"({"graph": {"generator": "complete", "n": 5}, "d": 2, "F": 1, "init": {"box": {"lo": [0,0], "hi": [1,1]}}, "colour": 3})");
    bad(R"({"graph": {"generator": "complete", "n": 5, "extra": 1}, "d": 2, "F": 1, "init": {"box": {"lo": [0,0], "hi": [1,1]}}})");
    bad(R"({"graph": {"generator": "star", "n": 5}, "d": 2, "F": 1, "init": {"box": {"lo": [0,0], "hi": [1,1]}}})");
    bad(R"({"graph": {"generator": "complete", "n": 5}, "d": -2, "F": 1, "init": {"box": {"lo": [0,0], "hi": [1,1]}}})");
    bad(R"({"graph": {"generator": "complete", "n": 5}, "d": 2.5, "F": 1, "init": {"box": {"lo": [0,0], "hi": [1,1]}}})");
    bad(R"({"graph": {"generator": "complete", "n": 5}, "d": 2, "F": 1, "init": {"box": {"lo": [0,0], "hi": [1,1], "mid": 0}}})");
    bad(R"({"graph": {"generator": "complete", "n": 5}, "d": 2, "F": 1, "init": {"box": {"lo": [0,0], "hi": [1,1]}},
           "faults": [0], "strategies": {"0": {"kind": "stubborn", "value": [1, 1], "when": 3}}})");
    bad(R"({"graph": {"generator": "complete", "n": 5}, "d": 2, "F": 1, "init": {"box": {"lo": [0,0], "hi": [1,1]}},
           "faults": [0], "strategies": {"zero": {"kind": "stubborn", "value": [1, 1]}}})");
    bad(R"({"graph": {"generator": "complete", "n": 5}, "d": 2, "F": 1, "init": {"box": {"lo": [0,0], "hi": [1,1]}}, "grouping": [[1],[2]]})");
    bad(R"({"graph": {"generator": "complete", "n": 5}, "d": 2, "F": 1, "init": {"box": {"lo": [0,0], "hi": [1,1]}}, "algorithm": "grouped"})");
    bad(R"({"graph": {"generator": "complete", "n": 5}, "d": 2, "F": 1, "init": {"box": {"lo": [0,0], "hi": [1,1]}}, "attack": "some"})");
    bad(R"({"graph": {"growth": {"base": {"generator": "complete", "n": 5}, "r": 3, "s": 2, "degree": 4, "n": 9, "rate": 1}}, "d": 2, "F": 1, "init": {"box": {"lo": [0,0], "hi": [1,1]}}})");
    bad("{ not json");
}

TEST_CASE("invalid configurations") {
    auto config_of = [](const std::string& text) { return to_sim_config(parse_experiment(text)); };
    // Two faults under F-total with F = 1.
    CHECK_THROWS_AS(config_of(R"({"graph": {"generator": "complete", "n": 6}, "d": 2, "F": 1, "faults": [0, 1],
        "strategies": {"0": {"kind": "scripted", "script": "sine"}, "1": {"kind": "scripted", "script": "sine"}},
        "init": {"box": {"lo": [0,0], "hi": [1,1]}}})"), ConfigError);
    // Box of the wrong dimension.
    CHECK_THROWS_AS(config_of(R"({"graph": {"generator": "complete", "n": 6}, "d": 2, "F": 1,
        "init": {"box": {"lo": [0], "hi": [1]}}})"), ConfigError);
    // Explicit states of the wrong count.
    CHECK_THROWS_AS(config_of(R"({"graph": {"generator": "complete", "n": 3}, "d": 1, "F": 0,
        "init": {"states": [[0], [1]]}})"), ConfigError);
    // Missing graph file.
    CHECK_THROWS_AS(config_of(R"({"graph": {"file": "/nonexistent/g.txt"}, "d": 1, "F": 0,
        "init": {"box": {"lo": [0], "hi": [1]}}})"), ConfigError);
}

TEST_CASE("run command") {
    TempDir tmp;
    std::string text;
    REQUIRE(run_into(tmp.path / "a", kScenario, &text) == cli::kOk);
    CHECK(text.find("converged: true") != std::string::npos);
    CHECK(text.find("validity_always: true") != std::string::npos);
    CHECK(text.find("rate_bound_ok: true") != std::string::npos);
    REQUIRE(run_into(tmp.path / "b", kScenario) == cli::kOk);
    for (const char* f : {"trace.csv", "metrics.csv", "byzantine.csv"}) {
        CHECK(fs::exists(tmp.path / "a" / f));
        CHECK(slurp(tmp.path / "a" / f) == slurp(tmp.path / "b" / f));
    }
    std::istringstream metrics(slurp(tmp.path / "a" / "metrics.csv"));
    std::string header;
    std::getline(metrics, header);
    CHECK(header == "round,m_1,m_2,M_1,M_2,delta_1,delta_2,validity,max_pairwise_distance");

    SUBCASE("faults outside the declared model") {
        spit(tmp.path / "bad.json", R"({"graph": {"generator": "complete", "n": 6}, "d": 2, "F": 1, "faults": [0, 1],
            "strategies": {"0": {"kind": "scripted", "script": "sine"}, "1": {"kind": "scripted", "script": "sine"}},
            "init": {"box": {"lo": [0,0], "hi": [1,1]}}})");
        CHECK(run_into(tmp.path / "c", tmp.path / "bad.json") == cli::kBadInput);
    }
    SUBCASE("degree assumption") {
        spit(tmp.path / "ring.json", R"({"graph": {"generator": "cycle", "n": 8}, "d": 2, "F": 1,
            "init": {"box": {"lo": [0,0], "hi": [1,1]}}})");
        CHECK(run_into(tmp.path / "c", tmp.path / "ring.json") == cli::kAssumptionViolated);
    }
    SUBCASE("missing file") {
        CHECK(run_into(tmp.path / "c", tmp.path / "nope.json") == cli::kBadInput);
    }
    SUBCASE("wmsr and grouped") {
        std::string e = kSmall;
        spit(tmp.path / "wmsr.json", e.substr(0, e.size() - 1) + R"(, "algorithm": "wmsr"})");
        CHECK(run_into(tmp.path / "w", tmp.path / "wmsr.json") == cli::kOk);
        spit(tmp.path / "grouped.json", e.substr(0, e.size() - 1) + R"(, "algorithm": "grouped", "grouping": [[2], [1]]})");
        CHECK(run_into(tmp.path / "g", tmp.path / "grouped.json") == cli::kOk);
    }
}

TEST_CASE("sweep command") {
    TempDir tmp;
    spit(tmp.path / "small.json", kSmall);
    setenv("RVC_OUTPUT_DIR", tmp.path.c_str(), 1);
    std::ostringstream out, err;
    CHECK(cli::sweep((tmp.path / "small.json").string(), 0, std::nullopt, out, err) == cli::kOk);
    CHECK(slurp(tmp.path / "sweep.csv") ==
          "seed,converged,rounds_used,final_max_diameter,validity_always,rate_bound_ok,wall_clock_s\n");
    std::ostringstream out2;
    CHECK(cli::sweep((tmp.path / "small.json").string(), 4, 10, out2, err) == cli::kOk);
    CHECK(out2.str().find("convergence_fraction: 1\n") != std::string::npos);
    CHECK(out2.str().find("\n13,1,") != std::string::npos);
    unsetenv("RVC_OUTPUT_DIR");
}

TEST_CASE("check-graph and gen-graph commands") {
    TempDir tmp;
    std::ostringstream out, err;
    cli::GenGraphArgs gen;
    gen.kind = "complete";
    gen.n = 6;
    gen.output = (tmp.path / "k6.txt").string();
    REQUIRE(cli::gen_graph(gen, out, err) == cli::kOk);
    gen.kind = "cycle";
    gen.output = (tmp.path / "c6.txt").string();
    REQUIRE(cli::gen_graph(gen, out, err) == cli::kOk);
    gen.kind = "growth";
    gen.base = 5;
    gen.r = 3;
    gen.s = 2;
    gen.degree = 4;
    gen.n = 9;
    gen.output = (tmp.path / "grown.txt").string();
    REQUIRE(cli::gen_graph(gen, out, err) == cli::kOk);
    gen.kind = "star";
    CHECK(cli::gen_graph(gen, out, err) == cli::kBadInput);

    cli::CheckGraphArgs check;
    check.path = (tmp.path / "k6.txt").string();
    check.r = 3;
    CHECK(cli::check_graph(check, out, err) == cli::kOk);
    check.d = 2;
    check.faults = 1;
    CHECK(cli::check_graph(check, out, err) == cli::kOk);

    check = {};
    check.path = (tmp.path / "c6.txt").string();
    check.r = 2;
    std::ostringstream c6;
    CHECK(cli::check_graph(check, c6, err) == cli::kCheckFailed);
    CHECK(c6.str().find("witness") != std::string::npos);

    check.path = (tmp.path / "grown.txt").string();
    check.r = 3;
    check.s = 2;
    CHECK(cli::check_graph(check, out, err) == cli::kOk);
    check.cap = 8;
    CHECK(cli::check_graph(check, out, err) == cli::kCapExceeded);

    spit(tmp.path / "bad.txt", "3\n0 1\n1 x\n");
    check = {};
    check.path = (tmp.path / "bad.txt").string();
    CHECK(cli::check_graph(check, out, err) == cli::kBadInput);
    check.path = (tmp.path / "missing.txt").string();
    CHECK(cli::check_graph(check, out, err) == cli::kBadInput);
}

TEST_CASE("output directory override") {
    Experiment e = parse_experiment(kSmall);
    CHECK(output_directory(e) == fs::path("rvc_out"));
    setenv("RVC_OUTPUT_DIR", "/tmp/elsewhere", 1);
    CHECK(output_directory(e) == fs::path("/tmp/elsewhere"));
    unsetenv("RVC_OUTPUT_DIR");
}
