#pragma once

// Randomized comparison of the fast minimizers against the brute-force oracle.

#include <cstddef>
#include <cstdint>
#include <string>

#include "mlabstain/core.hpp"
#include "mlabstain/random.hpp"

namespace mlabstain {

/// Uniform marginals; about one in five entries is snapped to a multiple of
/// 0.1 so ties occur.
MarginalVector random_marginals(Rng& rng, std::size_t m);

/// Cost range sampled for each loss and penalty kind.
struct CostRange {
    double lo;
    double hi;
};
CostRange oracle_cost_range(LossKind loss, PenaltyKind penalty);

struct OracleCheckConfig {
    LossKind loss = LossKind::Hamming;
    std::size_t m = 5;
    std::size_t trials = 100;
    std::uint64_t seed = 0;
    double tol = 1e-9;
};

struct OracleCheckResult {
    std::size_t trials_run = 0;
    bool passed = true;
    double max_abs_diff = 0.0;
    /// Reproduction data for the first failing trial.
    std::string failure;
};

/// Throws CapacityError when m exceeds the brute-force bound for the loss.
OracleCheckResult run_oracle_check(const OracleCheckConfig& config);

}  // namespace mlabstain
