#include "rvc/adversary.hpp"

#include <cmath>
#include <random>

namespace rvc {

bool validate_fault_set(const Graph& g, const std::vector<NodeId>& faults, const AttackModel& model) {
    std::vector<bool> is_fault(g.size(), false);
    for (NodeId f : faults) {
        if (f >= g.size()) throw InvalidArgument("fault id " + std::to_string(f) + " out of range");
        is_fault[f] = true;
    }
    std::size_t distinct = 0;
    for (bool b : is_fault) distinct += b;
    if (model.kind == AttackKind::FTotal) return distinct <= model.faults;

    for (NodeId i = 0; i < g.size(); ++i) {
        std::size_t local = 0;
        for (NodeId j : g.neighbors(i)) local += is_fault[j];
        if (local > model.faults) return false;
    }
    return true;
}

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_len(const Point& p, std::size_t d, const char* what) {
    if (p.size() != d) {
        throw DimensionMismatch(std::string(what) + " has length " + std::to_string(p.size()) +
                                ", expected " + std::to_string(d));
    }
}

}  // namespace

void validate_strategy(const AdversaryStrategy& strategy, std::size_t d) {
    std::visit(Overloaded{
                   [d](const Scripted&) {
                       if (d != 2) throw DimensionMismatch("the sine script is two-dimensional");
                   },
                   [d](const Stubborn& s) { require_len(s.value, d, "stubborn value"); },
                   [d](const RandomBounded& s) {
                       require_len(s.lo, d, "random box lower corner");
                       require_len(s.hi, d, "random box upper corner");
                       for (std::size_t k = 0; k < d; ++k)
                           if (s.lo[k] > s.hi[k]) throw InvalidArgument("random box is inverted");
                   },
                   [d](const HullEscape& s) { require_len(s.target, d, "escape target"); },
               },
               strategy);
}

Point adversary_value(const AdversaryStrategy& strategy, std::size_t round, NodeId sender,
                      NodeId receiver, const Observation& obs, std::size_t d) {
    validate_strategy(strategy, d);
    return std::visit(
        Overloaded{
            [&](const Scripted&) -> Point {
                const double k = static_cast<double>(round);
                return {4.5 * std::sin(k / 5.0), k / 25.0 + 1.0};
            },
            [&](const Stubborn& s) -> Point { return s.value; },
            [&](const RandomBounded& s) -> Point {
                std::seed_seq seq{static_cast<std::uint32_t>(s.seed),
                                  static_cast<std::uint32_t>(s.seed >> 32),
                                  static_cast<std::uint32_t>(round),
                                  static_cast<std::uint32_t>(sender),
                                  static_cast<std::uint32_t>(receiver)};
                std::mt19937_64 rng(seq);
                Point out(d);
                for (std::size_t k = 0; k < d; ++k)
                    out[k] = std::uniform_real_distribution<double>(s.lo[k], s.hi[k])(rng);
                return out;
            },
            [&](const HullEscape& s) -> Point {
                Point centroid(d, 0.0);
                std::size_t count = 0;
                auto absorb = [&](NodeId j) {
                    for (std::size_t k = 0; k < d; ++k) centroid[k] += obs.states[j][k];
                    ++count;
                };
                for (NodeId j : obs.graph.neighbors(receiver))
                    if (!obs.faulty[j]) absorb(j);
                if (count == 0) {
                    for (NodeId j = 0; j < obs.states.size(); ++j)
                        if (!obs.faulty[j]) absorb(j);
                }
                Point out = s.target;
                if (count == 0) return out;
                for (std::size_t k = 0; k < d; ++k) {
                    centroid[k] /= static_cast<double>(count);
                    out[k] += s.gain * (s.target[k] - centroid[k]);
                }
                return out;
            },
        },
        strategy);
}

std::string strategy_name(const AdversaryStrategy& strategy) {
    return std::visit(Overloaded{
                          [](const Scripted&) { return std::string("scripted"); },
                          [](const Stubborn&) { return std::string("stubborn"); },
                          [](const RandomBounded&) { return std::string("random"); },
                          [](const HullEscape&) { return std::string("hull_escape"); },
                      },
                      strategy);
}

}  // namespace rvc
