#pragma once

#include <vector>

#include "rvc/sim.hpp"

namespace rvc {

struct WmsrParams {
    /// Values trimmed per side.
    std::size_t faults = 0;
    /// Uniform weights over own value and the survivors (the only mode).
};

/// Drops up to F received values strictly above `own` (largest first) and up
/// to F strictly below (smallest first), then averages own with the rest.
/// `received` is in sender-id order; ties at the cut go to the lower id.
double wmsr_scalar_round(double own, const std::vector<double>& received, std::size_t faults);

/// The scalar rule applied to every coordinate independently, driven by the
/// same engine and producing the same trace schema as the middle-point run.
/// No degree assumption is enforced.
Trace wmsr_vector_run(const SimConfig& config);

}  // namespace rvc
