// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "../unit/oracles.hpp"
#include "rvc/baselines.hpp"
#include "rvc/experiment.hpp"
#include "rvc/geometry.hpp"
#include "rvc/graph.hpp"
#include "rvc/kernel.hpp"
#include "rvc/sim.hpp"

using namespace rvc;
namespace fs = std::filesystem;

namespace {

const fs::path kRoot = RVC_SOURCE_DIR;

struct Result {
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// Order-statistic tally over every simulation in the suite.
struct OrderTally {
    std::size_t runs = 0;
    std::size_t rounds = 0;
    std::size_t violations = 0;
    void add(const Trace& t) {
        ++runs;
        rounds += t.rounds.size() - 1;
        violations += t.order_bound_violations();
    }
} g_order;

// Largest per-round growth of a benign max or shrink of a benign min.
double extrema_excess(const Trace& t) {
    double worst = 0.0;
    for (std::size_t k = 1; k < t.rounds.size(); ++k) {
        const auto& a = t.rounds[k - 1].metrics;
        const auto& b = t.rounds[k].metrics;
        for (std::size_t q = 0; q < t.d; ++q)
            worst = std::max({worst, b.max[q] - a.max[q], a.min[q] - b.min[q]});
    }
    return worst;
}

PointSet uniform_set(std::size_t m, std::size_t d, double lo, double hi, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<Point> pts(m, Point(d));
    for (auto& p : pts)
        for (double& v : p) v = u(rng);
    return PointSet(d, std::move(pts));
}

// 1. Nonempty safe intersection once m = n(d+1)+1.
Result helly() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(1);
    std::size_t total = 0, empty = 0, outside = 0;
    for (std::size_t d = 1; d <= 3; ++d)
        for (std::size_t n = 1; n <= 2; ++n)
            for (int t = 0; t < 500; ++t) {
                const PointSet a = uniform_set(n * (d + 1) + 1, d, -1.0, 1.0, rng);
                ++total;
                const auto q = psi_point_oracle(a, n);
                if (!q) {
                    ++empty;
                    continue;
                }
                if (!psi_contains(*q, a, n, 1e-7)) ++outside;
            }
    const double secs = since(t0);
    return {empty == 0 && outside == 0 && secs < 30.0,
            fmt("%zu instances, %zu empty, %zu failed membership", total, empty, outside), secs};
}

// 2. Middle points of random neighbourhoods are safe.
Result middle_point_safety() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(2);
    const std::size_t d = 2, F = 1;
    std::size_t bad_psi = 0, bad_hull = 0;
    for (int t = 0; t < 500; ++t) {
        const std::size_t m = 4 + static_cast<std::size_t>(t % 5);
        PointSet benign = uniform_set(m - 1, d, -1.0, 1.0, rng);
        std::uniform_real_distribution<double> wild(-10.0, 10.0);
        const Point faulty{wild(rng), wild(rng)};
        const std::size_t fault_at = std::uniform_int_distribution<std::size_t>(0, m - 1)(rng);

        std::vector<ReceivedValue> received;
        PointSet all;
        all.dim = d;
        for (std::size_t i = 0, b = 0; i < m; ++i) {
            const Point& v = i == fault_at ? faulty : benign[b++];
            received.push_back({i, v});
            all.points.push_back(v);
        }
        const std::size_t round = std::uniform_int_distribution<std::size_t>(0, 9)(rng);
        const auto ext = select_extreme_subsets(received, active_dimension(round, d), d, F);
        for (const PointSet* s : {&ext.low, &ext.high}) {
            const Point y = middle_point(MiddlePointProblem(*s, d, F));
            if (!psi_contains(y, all, F, 1e-7)) ++bad_psi;
            if (!hull_contains(y, benign, 1e-7)) ++bad_hull;
        }
    }
    const double secs = since(t0);
    return {bad_psi == 0 && bad_hull == 0 && secs < 60.0,
            fmt("1000 middle points, %zu outside the safe set, %zu outside the benign hull", bad_psi, bad_hull),
            secs};
}

// 4. Validity and monotone extrema under three adversaries.
Result validity() {
    const auto t0 = Clock::now();
    std::size_t invalid = 0, non_monotone = 0;
    double worst_excess = 0.0;
    for (std::uint64_t i = 0; i < 100; ++i) {
        const std::uint64_t seed = 4000 + i;
        std::mt19937_64 rng(seed);
        const std::size_t n = 8 + i % 5;
        SimConfig c;
        c.graph = grow_robust_graph_to(complete_graph(5), 3, 2, 4, n, seed);
        c.d = 2;
        c.attack = {AttackKind::FTotal, 1};
        const NodeId f = std::uniform_int_distribution<NodeId>(0, n - 1)(rng);
        c.faults = {f};
        std::uniform_real_distribution<double> wild(-10.0, 10.0);
        switch (i % 3) {
            case 0: c.strategies[f] = Stubborn{{wild(rng), wild(rng)}}; break;
            case 1: c.strategies[f] = RandomBounded{{-10, -10}, {10, 10}, seed}; break;
            default: c.strategies[f] = HullEscape{{wild(rng), wild(rng)}, 2.0}; break;
        }
        c.initial_states = draw_initial_states(n, {-3, 0}, {3, 5}, seed);
        c.seed = seed;
        const Trace t = run(c);
        g_order.add(t);
        invalid += !t.validity_always();
        const double excess = extrema_excess(t);
        worst_excess = std::max(worst_excess, excess);
        non_monotone += excess > 1e-12;
    }
    const double secs = since(t0);
    return {invalid == 0 && non_monotone == 0,
            fmt("100 runs, %zu left the initial hull, %zu broke monotone extrema (worst excess %.2g)", invalid,
                non_monotone, worst_excess),
            secs};
}

// 5 and 6. The bundled scenario over 20 seeds.
std::vector<Trace> g_scenario_traces;
std::size_t g_scenario_benign = 0;

Result bundled_scenario() {
    const auto t0 = Clock::now();
    const Experiment e = load_experiment(kRoot / "scenarios" / "paper_sec7.json");
    std::size_t converged = 0, decaying = 0, max_rounds = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const SimConfig c = to_sim_config(e, kRoot / "scenarios", seed);
        g_scenario_benign = c.benign_count();
        Trace t = run(c);
        g_order.add(t);
        const bool ok = t.termination == Termination::Converged && t.rounds.size() - 1 <= 1000 &&
                        t.final_round().metrics.max_diameter() < 1e-6 && t.validity_always();
        converged += ok;
        const auto slope = log_spread_slope(t, 0);
        decaying += slope && *slope < 0.0;
        max_rounds = std::max(max_rounds, t.rounds.size() - 1);
        g_scenario_traces.push_back(std::move(t));
    }
    const double secs = since(t0);
    return {converged == 20 && decaying == 20 && secs < 60.0,
            fmt("%zu/20 converged below 1e-6 inside the hull (max %zu rounds), %zu/20 negative log-spread slope",
                converged, max_rounds, decaying),
            secs};
}

Result rate_bound() {
    const auto t0 = Clock::now();
    std::size_t ok = 0;
    for (const auto& t : g_scenario_traces) ok += rate_bound_check(t, 2, g_scenario_benign);
    return {ok == 20 && g_scenario_traces.size() == 20, fmt("%zu/%zu traces satisfy the bound", ok, g_scenario_traces.size()),
            since(t0)};
}

// 7. Archived instance separating box validity from hull validity.
Result baseline_contrast() {
    const auto t0 = Clock::now();
    const fs::path file = kRoot / "tests" / "fixtures" / "wmsr_contrast.json";
    const Experiment e = load_experiment(file);
    const SimConfig c = to_sim_config(e, file.parent_path());
    const Trace w = wmsr_vector_run(c);
    const Trace m = run(c);
    g_order.add(m);

    PointSet initial;
    initial.dim = c.d;
    for (NodeId i = 0; i < c.graph.size(); ++i)
        if (!w.faulty[i]) initial.points.push_back(c.initial_states[i]);
    std::size_t first_exit = w.rounds.size();
    for (std::size_t k = 0; k < w.rounds.size() && first_exit == w.rounds.size(); ++k)
        if (!w.rounds[k].metrics.validity) first_exit = k;
    // Outside by more than round-off: count rounds with a benign state off the hull at 1e-6.
    std::size_t far_rounds = 0;
    for (const auto& rec : w.rounds) {
        bool off = false;
        for (NodeId i = 0; i < c.graph.size() && !off; ++i)
            off = !w.faulty[i] && !hull_contains(rec.states[i], initial, 1e-6);
        far_rounds += off;
    }
    const bool pass = first_exit < w.rounds.size() && far_rounds > 0 && m.validity_always();
    return {pass,
            fmt("W-MSR leaves the hull at round %zu (%zu of %zu rounds outside at tol 1e-6); middle points %s",
                first_exit, far_rounds, w.rounds.size(), m.validity_always() ? "stay inside" : "LEAVE the hull"),
            since(t0)};
}

// 3. Reported after the simulations above have run.
Result order_bounds() {
    return {g_order.violations == 0 && g_order.runs > 0,
            fmt("%zu simulations, %zu rounds, %zu violations", g_order.runs, g_order.rounds, g_order.violations), 0.0};
}

// 8. Checker ground truth.
Result checker() {
    const auto t0 = Clock::now();
    std::size_t wrong = 0, implications = 0, broken = 0;
    for (std::size_t n = 3; n <= 8; ++n) {
        const int half = static_cast<int>((n + 1) / 2);
        wrong += !is_r_robust(complete_graph(n), half).holds;
        wrong += is_r_robust(complete_graph(n), half + 1).holds;
    }
    for (std::size_t n = 4; n <= 10; ++n) {
        wrong += !is_r_robust(cycle_graph(n), 1).holds;
        wrong += is_r_robust(cycle_graph(n), 2).holds;
    }

    const std::vector<std::pair<int, int>> dfs = {{1, 1}, {2, 1}, {1, 2}};
    auto check_implication = [&](const Graph& g) {
        for (auto [d, f] : dfs) {
            if (!is_r_robust(g, (d + 1) * f + 1).holds) continue;
            ++implications;
            broken += !is_rs_robust(g, d * f + 1, f + 1).holds;
        }
    };
    // Every labelled graph on 6 nodes.
    std::vector<Graph::Edge> all;
    for (NodeId u = 0; u < 6; ++u)
        for (NodeId v = u + 1; v < 6; ++v) all.push_back({u, v});
    for (std::uint32_t mask = 0; mask < (1u << all.size()); ++mask) {
        std::vector<Graph::Edge> edges;
        for (std::size_t k = 0; k < all.size(); ++k)
            if (mask & (1u << k)) edges.push_back(all[k]);
        check_implication(Graph(6, edges));
    }
    std::mt19937_64 rng(8);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 8 + static_cast<std::size_t>(t % 3);
        const double p = std::uniform_real_distribution<double>(0.5, 0.95)(rng);
        std::bernoulli_distribution coin(p);
        std::vector<Graph::Edge> edges;
        for (NodeId u = 0; u < n; ++u)
            for (NodeId v = u + 1; v < n; ++v)
                if (coin(rng)) edges.push_back({u, v});
        check_implication(Graph(n, edges));
    }
    const double secs = since(t0);
    return {wrong == 0 && broken == 0 && secs < 120.0,
            fmt("%zu wrong complete/cycle verdicts; %zu premises held, %zu implications broken", wrong, implications,
                broken),
            secs};
}

// 9. Simplex optimum against vertex enumeration.
Result lp_oracle() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    std::size_t disagreements = 0;
    for (int t = 0; t < 200; ++t) {
        std::vector<Point> pts = {{u(rng)}, {u(rng)}, {u(rng)}};
        if (t % 10 == 0) pts[2] = pts[0];  // rank-deficient case
        const MiddlePointProblem prob(PointSet(1, pts), 1, 1);
        const auto sys = assemble_lemma1_system(prob);
        const auto got = lp::solve_max_min_slack(sys);
        const auto want = oracle::max_min_slack_by_vertices(sys.a_eq, sys.b_eq, sys.alpha_cap);
        if (got.status != lp::Status::Optimal || !want.feasible) {
            ++disagreements;
            continue;
        }
        worst = std::max(worst, std::abs(got.alpha - want.alpha));
        if (std::abs(got.alpha - want.alpha) > 1e-7) ++disagreements;
    }
    return {disagreements == 0, fmt("200 systems of %d variables, %zu disagreements, max |delta alpha| %.2g", 6,
                                    disagreements, worst),
            since(t0)};
}

}  // namespace

int main() {
    std::vector<std::pair<const char*, Result>> results(9);
    const std::vector<std::pair<int, std::function<Result()>>> order = {
        {1, helly},      {2, middle_point_safety}, {4, validity}, {5, bundled_scenario}, {6, rate_bound},
        {7, baseline_contrast}, {3, order_bounds}, {8, checker},  {9, lp_oracle},
    };
    const char* names[] = {"safe intersection nonempty", "middle-point safety",  "order-statistic bounds",
                           "validity",                   "agreement (20 seeds)", "rate bound",
                           "W-MSR contrast",             "robustness checker",   "LP vertex oracle"};
    for (const auto& [id, fn] : order) {
        Result r;
        try {
            r = fn();
        } catch (const std::exception& e) {
            r = {false, std::string("threw: ") + e.what(), 0.0};
        }
        results[static_cast<std::size_t>(id - 1)] = {names[id - 1], r};
    }
    bool all = true;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& [name, r] = results[i];
        all = all && r.pass;
        std::printf("criterion %zu %-28s %s  %s (%.2f s)\n", i + 1, name, r.pass ? "PASS" : "FAIL", r.detail.c_str(),
                    r.seconds);
    }
    return all ? 0 : 1;
}
