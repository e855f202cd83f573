#include "rvc/sim.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <random>
#include <set>

#include "rvc/geometry.hpp"

namespace rvc {

std::vector<bool> SimConfig::faulty_mask() const {
    std::vector<bool> mask(graph.size(), false);
    for (NodeId f : faults)
        if (f < mask.size()) mask[f] = true;
    return mask;
}

std::size_t SimConfig::benign_count() const {
    auto mask = faulty_mask();
    return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), false));
}

namespace {

Grouping full_block(std::size_t d) {
    std::vector<std::size_t> all(d);
    for (std::size_t q = 0; q < d; ++q) all[q] = q + 1;
    return {all};
}

Point project(const Point& x, const std::vector<std::size_t>& block) {
    Point out(block.size());
    for (std::size_t j = 0; j < block.size(); ++j) out[j] = x[block[j] - 1];
    return out;
}

PointSet benign_set(const std::vector<Point>& states, const std::vector<bool>& faulty, std::size_t d,
                    const std::vector<std::size_t>* block) {
    std::vector<Point> pts;
    for (NodeId i = 0; i < states.size(); ++i) {
        if (faulty[i]) continue;
        pts.push_back(block ? project(states[i], *block) : states[i]);
    }
    return PointSet(block ? block->size() : d, std::move(pts));
}

}  // namespace

void validate_config(const SimConfig& config) {
    const std::size_t n = config.graph.size();
    const std::size_t d = config.d;
    if (d == 0) throw ConfigError("d must be positive");
    if (!(config.convergence_tol > 0.0)) throw ConfigError("convergence_tol must be positive");

    std::set<NodeId> fault_set;
    for (NodeId f : config.faults) {
        if (f >= n) throw ConfigError("fault id " + std::to_string(f) + " out of range");
        if (!fault_set.insert(f).second) throw ConfigError("fault id " + std::to_string(f) + " repeated");
    }
    if (!validate_fault_set(config.graph, config.faults, config.attack))
        throw ConfigError("fault set violates the declared attack model");

    for (NodeId f : config.faults)
        if (!config.strategies.count(f))
            throw ConfigError("faulty node " + std::to_string(f) + " has no strategy");
    for (const auto& [id, strategy] : config.strategies) {
        if (!fault_set.count(id))
            throw ConfigError("strategy given for non-faulty node " + std::to_string(id));
        try {
            validate_strategy(strategy, d);
        } catch (const Error& e) {
            throw ConfigError(std::string("strategy of node ") + std::to_string(id) + ": " + e.what());
        }
    }

    if (config.initial_states.size() != n)
        throw ConfigError("need " + std::to_string(n) + " initial states, got " +
                          std::to_string(config.initial_states.size()));
    for (NodeId i = 0; i < n; ++i) {
        if (fault_set.count(i)) continue;
        const Point& x = config.initial_states[i];
        if (x.size() != d)
            throw ConfigError("initial state of node " + std::to_string(i) + " has length " +
                              std::to_string(x.size()));
        for (double v : x)
            if (!std::isfinite(v)) throw ConfigError("initial state of node " + std::to_string(i) + " is not finite");
    }
    if (fault_set.size() == n) throw ConfigError("no benign agents");

    if (config.grouping) {
        std::vector<int> seen(d + 1, 0);
        for (const auto& block : *config.grouping) {
            if (block.empty()) throw ConfigError("empty grouping block");
            for (std::size_t q : block) {
                if (q == 0 || q > d) throw ConfigError("grouping index " + std::to_string(q) + " out of range");
                ++seen[q];
            }
        }
        for (std::size_t q = 1; q <= d; ++q)
            if (seen[q] != 1) throw ConfigError("grouping is not a partition of the coordinates");
    }
}

void require_degree_assumption(const SimConfig& config, const Grouping& blocks) {
    auto faulty = config.faulty_mask();
    const std::size_t F = config.fault_bound();
    for (const auto& block : blocks) {
        const std::size_t need = (block.size() + 1) * F + 1;
        for (NodeId i = 0; i < config.graph.size(); ++i) {
            if (faulty[i]) continue;
            if (config.graph.degree(i) < need)
                throw AssumptionViolation("node " + std::to_string(i) + " has degree " +
                                          std::to_string(config.graph.degree(i)) + " < " +
                                          std::to_string(need) + " required for d=" +
                                          std::to_string(block.size()) + ", F=" + std::to_string(F));
        }
    }
}

std::vector<Point> draw_initial_states(std::size_t n, const Point& lo, const Point& hi,
                                       std::uint64_t seed) {
    if (lo.size() != hi.size()) throw DimensionMismatch("box corners differ in length");
    for (std::size_t q = 0; q < lo.size(); ++q)
        if (lo[q] > hi[q]) throw InvalidArgument("initial box is inverted");
    std::mt19937_64 rng(seed);
    std::vector<Point> out(n, Point(lo.size()));
    for (auto& x : out)
        for (std::size_t q = 0; q < lo.size(); ++q)
            x[q] = std::uniform_real_distribution<double>(lo[q], hi[q])(rng);
    return out;
}

double MetricsRecord::max_diameter() const {
    double m = 0.0;
    for (double v : diameter) m = std::max(m, v);
    return m;
}

bool Trace::validity_always() const {
    return std::all_of(rounds.begin(), rounds.end(), [](const RoundRecord& r) { return r.metrics.validity; });
}

std::size_t Trace::order_bound_violations() const {
    std::size_t total = 0;
    for (const auto& r : rounds) total += r.metrics.order_bound_violations;
    return total;
}

std::vector<Broadcast> faulty_messages(const SimConfig& config, const std::vector<Point>& snapshot,
                                       std::size_t round) {
    auto faulty = config.faulty_mask();
    Observation obs{config.graph, snapshot, faulty};
    std::vector<Broadcast> out;
    std::vector<NodeId> sorted_faults(config.faults);
    std::sort(sorted_faults.begin(), sorted_faults.end());
    for (NodeId f : sorted_faults) {
        const auto& strategy = config.strategies.at(f);
        for (NodeId j : config.graph.neighbors(f))
            out.push_back({f, j, adversary_value(strategy, round, f, j, obs, config.d)});
    }
    return out;
}

std::vector<ReceivedValue> inbox(const SimConfig& config, const std::vector<Point>& snapshot,
                                 const std::vector<Broadcast>& byzantine, NodeId agent) {
    auto faulty = config.faulty_mask();
    std::vector<ReceivedValue> received;
    for (NodeId j : config.graph.neighbors(agent)) {
        if (!faulty[j]) {
            received.push_back({j, snapshot[j]});
            continue;
        }
        auto it = std::find_if(byzantine.begin(), byzantine.end(),
                               [&](const Broadcast& b) { return b.sender == j && b.receiver == agent; });
        if (it == byzantine.end()) throw InvalidArgument("missing faulty message to " + std::to_string(agent));
        received.push_back({j, it->value});
    }
    return received;
}

namespace {

BenignRule middle_point_rule(const SimConfig& config, const Grouping& blocks) {
    const std::size_t F = config.fault_bound();
    return [F, blocks](NodeId, const RoundInputs& in, std::size_t& violations) {
        Point next = in.own_state;
        for (const auto& block : blocks) {
            RoundInputs sub;
            sub.round = in.round;
            sub.own_state = project(in.own_state, block);
            sub.received.reserve(in.received.size());
            for (const auto& r : in.received) sub.received.push_back({r.sender, project(r.value, block)});
            RoundOutcome out = benign_round(sub, block.size(), F);
            if (!out.order_bounds_hold(kOrderBoundTol)) ++violations;
            for (std::size_t j = 0; j < block.size(); ++j) next[block[j] - 1] = out.next[j];
        }
        return next;
    };
}

StepResult advance(const SimConfig& config, const BenignRule& rule, const std::vector<Point>& snapshot,
                   std::vector<Broadcast> byzantine, std::size_t round) {
    auto faulty = config.faulty_mask();
    StepResult result;
    result.next = snapshot;
    for (NodeId i = 0; i < config.graph.size(); ++i) {
        if (faulty[i]) continue;
        RoundInputs in{snapshot[i], inbox(config, snapshot, byzantine, i), round};
        result.next[i] = rule(i, in, result.order_bound_violations);
    }
    result.byzantine = std::move(byzantine);
    return result;
}

std::vector<Point> placeholder_snapshot(const SimConfig& config) {
    auto states = config.initial_states;
    auto faulty = config.faulty_mask();
    for (NodeId i = 0; i < states.size(); ++i)
        if (faulty[i]) states[i] = Point(config.d, 0.0);
    return states;
}

}  // namespace

StepResult step_grouped(const SimConfig& config, const Grouping& blocks, const std::vector<Point>& snapshot,
                        std::size_t round) {
    if (snapshot.size() != config.graph.size()) throw DimensionMismatch("snapshot size differs from graph");
    if (round == 0) require_degree_assumption(config, blocks);
    return advance(config, middle_point_rule(config, blocks), snapshot,
                   faulty_messages(config, snapshot, round), round);
}

StepResult step(const SimConfig& config, const std::vector<Point>& snapshot, std::size_t round) {
    return step_grouped(config, full_block(config.d), snapshot, round);
}

Trace run_with_rule(const SimConfig& config, const BenignRule& rule) {
    validate_config(config);
    const std::size_t d = config.d;
    auto faulty = config.faulty_mask();

    const PointSet initial = benign_set(config.initial_states, faulty, d, nullptr);
    std::vector<PointSet> initial_groups;
    if (config.grouping)
        for (const auto& block : *config.grouping)
            initial_groups.push_back(benign_set(config.initial_states, faulty, d, &block));

    auto metrics_of = [&](const std::vector<Point>& states) {
        MetricsRecord m;
        m.min.assign(d, INFINITY);
        m.max.assign(d, -INFINITY);
        m.diameter.assign(d, 0.0);
        std::vector<NodeId> benign;
        for (NodeId i = 0; i < states.size(); ++i)
            if (!faulty[i]) benign.push_back(i);
        for (NodeId i : benign)
            for (std::size_t q = 0; q < d; ++q) {
                m.min[q] = std::min(m.min[q], states[i][q]);
                m.max[q] = std::max(m.max[q], states[i][q]);
            }
        for (std::size_t q = 0; q < d; ++q) m.diameter[q] = m.max[q] - m.min[q];
        for (std::size_t a = 0; a < benign.size(); ++a)
            for (std::size_t b = a + 1; b < benign.size(); ++b) {
                double s = 0.0;
                for (std::size_t q = 0; q < d; ++q) {
                    double t = states[benign[a]][q] - states[benign[b]][q];
                    s += t * t;
                }
                m.max_pairwise_distance = std::max(m.max_pairwise_distance, std::sqrt(s));
            }
        for (NodeId i : benign)
            if (!hull_contains(states[i], initial, kValidityTol)) {
                m.validity = false;
                break;
            }
        if (config.grouping) {
            for (std::size_t g = 0; g < config.grouping->size(); ++g) {
                const auto& block = (*config.grouping)[g];
                bool ok = true;
                for (NodeId i : benign)
                    if (!hull_contains(project(states[i], block), initial_groups[g], kValidityTol)) {
                        ok = false;
                        break;
                    }
                m.group_validity.push_back(ok);
            }
        }
        return m;
    };

    Trace trace;
    trace.d = d;
    trace.faulty = faulty;

    std::vector<Point> snapshot = placeholder_snapshot(config);
    for (std::size_t k = 0;; ++k) {
        auto msgs = faulty_messages(config, snapshot, k);
        RoundRecord rec;
        rec.round = k;
        rec.states = snapshot;
        for (NodeId f = 0; f < faulty.size(); ++f) {
            if (!faulty[f]) continue;
            auto it = std::find_if(msgs.begin(), msgs.end(), [f](const Broadcast& b) { return b.sender == f; });
            if (it != msgs.end()) {
                rec.states[f] = it->value;
            } else {
                Observation obs{config.graph, snapshot, faulty};
                rec.states[f] = adversary_value(config.strategies.at(f), k, f, f, obs, d);
            }
        }
        rec.metrics = metrics_of(snapshot);

        const bool converged = rec.metrics.max_diameter() < config.convergence_tol;
        if (converged || k >= config.max_rounds) {
            rec.byzantine = std::move(msgs);
            trace.rounds.push_back(std::move(rec));
            trace.termination = converged ? Termination::Converged : Termination::RoundLimit;
            break;
        }
        StepResult res = advance(config, rule, snapshot, std::move(msgs), k);
        rec.byzantine = std::move(res.byzantine);
        rec.metrics.order_bound_violations = res.order_bound_violations;
        trace.rounds.push_back(std::move(rec));
        snapshot = std::move(res.next);
    }
    return trace;
}

Trace run(const SimConfig& config) {
    validate_config(config);
    Grouping blocks = full_block(config.d);
    require_degree_assumption(config, blocks);
    SimConfig plain = config;
    plain.grouping.reset();
    return run_with_rule(plain, middle_point_rule(plain, blocks));
}

Trace run_grouped(const SimConfig& config) {
    if (!config.grouping) throw ConfigError("run_grouped needs a grouping");
    validate_config(config);
    require_degree_assumption(config, *config.grouping);
    return run_with_rule(config, middle_point_rule(config, *config.grouping));
}

bool rate_bound_check(const Trace& trace, std::size_t d, std::size_t n_benign) {
    const std::size_t lag = d * n_benign;
    const double factor = 1.0 - 1.0 / (2.0 * std::pow(3.0, static_cast<double>(lag)));
    for (std::size_t k = 0; k + lag < trace.rounds.size(); ++k) {
        double now = trace.rounds[k].metrics.diameter.at(0);
        double later = trace.rounds[k + lag].metrics.diameter.at(0);
        if (later > factor * now + 1e-12) return false;
    }
    return true;
}

std::optional<double> log_spread_slope(const Trace& trace, std::size_t dim) {
    std::vector<double> xs, ys;
    for (const auto& r : trace.rounds) {
        double v = r.metrics.diameter.at(dim);
        if (v > 0.0) {
            xs.push_back(static_cast<double>(r.round));
            ys.push_back(std::log(v));
        }
    }
    if (xs.size() < 2) return std::nullopt;
    const double n = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    return sxy / sxx;
}

namespace {

// Shortest text that reads back to the same double.
std::string num(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

void write_trace_csv(std::ostream& out, const Trace& trace) {
    out << "round,agent_id,is_faulty";
    for (std::size_t q = 1; q <= trace.d; ++q) out << ",x_" << q;
    out << '\n';
    for (const auto& r : trace.rounds)
        for (NodeId i = 0; i < r.states.size(); ++i) {
            out << r.round << ',' << i << ',' << (trace.faulty[i] ? 1 : 0);
            for (double v : r.states[i]) out << ',' << num(v);
            out << '\n';
        }
}

void write_metrics_csv(std::ostream& out, const Trace& trace) {
    out << "round";
    for (std::size_t q = 1; q <= trace.d; ++q) out << ",m_" << q;
    for (std::size_t q = 1; q <= trace.d; ++q) out << ",M_" << q;
    for (std::size_t q = 1; q <= trace.d; ++q) out << ",delta_" << q;
    out << ",validity,max_pairwise_distance\n";
    for (const auto& r : trace.rounds) {
        const auto& m = r.metrics;
        out << r.round;
        for (double v : m.min) out << ',' << num(v);
        for (double v : m.max) out << ',' << num(v);
        for (double v : m.diameter) out << ',' << num(v);
        out << ',' << (m.validity ? 1 : 0) << ',' << num(m.max_pairwise_distance) << '\n';
    }
}

void write_byzantine_csv(std::ostream& out, const Trace& trace) {
    out << "round,sender,receiver";
    for (std::size_t q = 1; q <= trace.d; ++q) out << ",x_" << q;
    out << '\n';
    for (const auto& r : trace.rounds)
        for (const auto& b : r.byzantine) {
            out << r.round << ',' << b.sender << ',' << b.receiver;
            for (double v : b.value) out << ',' << num(v);
            out << '\n';
        }
}

}  // namespace rvc
