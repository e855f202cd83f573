#include "rvc/baselines.hpp"

#include <algorithm>
#include <numeric>

namespace rvc {

double wmsr_scalar_round(double own, const std::vector<double>& received, std::size_t faults) {
    if (received.empty()) throw InvalidArgument("W-MSR needs at least one received value");
    std::vector<std::size_t> above, below;
    for (std::size_t j = 0; j < received.size(); ++j) {
        if (received[j] > own) above.push_back(j);
        if (received[j] < own) below.push_back(j);
    }
    std::stable_sort(above.begin(), above.end(),
                     [&](std::size_t a, std::size_t b) { return received[a] > received[b]; });
    std::stable_sort(below.begin(), below.end(),
                     [&](std::size_t a, std::size_t b) { return received[a] < received[b]; });

    std::vector<bool> dropped(received.size(), false);
    for (std::size_t t = 0; t < std::min(faults, above.size()); ++t) dropped[above[t]] = true;
    for (std::size_t t = 0; t < std::min(faults, below.size()); ++t) dropped[below[t]] = true;

    double sum = own;
    std::size_t count = 1;
    for (std::size_t j = 0; j < received.size(); ++j) {
        if (dropped[j]) continue;
        sum += received[j];
        ++count;
    }
    return sum / static_cast<double>(count);
}

Trace wmsr_vector_run(const SimConfig& config) {
    const std::size_t F = config.fault_bound();
    const std::size_t d = config.d;
    BenignRule rule = [F, d](NodeId, const RoundInputs& in, std::size_t&) {
        Point next(d);
        std::vector<double> column(in.received.size());
        for (std::size_t q = 0; q < d; ++q) {
            for (std::size_t j = 0; j < in.received.size(); ++j) column[j] = in.received[j].value[q];
            next[q] = wmsr_scalar_round(in.own_state[q], column, F);
        }
        return next;
    };
    return run_with_rule(config, rule);
}

}  // namespace rvc
