#pragma once

// Cross-validated cost sweeps comparing partial abstention against full
// prediction (MLC) and full abstention (ABS).

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mlabstain/br_trainer.hpp"
#include "mlabstain/core.hpp"
#include "mlabstain/data.hpp"

namespace mlabstain {

/// Cost values start, start + step, ..., up to stop inclusive.
struct CostGrid {
    double start = 0.0;
    double stop = 0.0;
    double step = 0.0;

    /// Parses "start:stop:step".
    static CostGrid parse(std::string_view text);
    /// Rounded to 12 decimals; throws InputError if empty or step <= 0.
    std::vector<double> values() const;
};

enum class Series { Partial, Mlc, Abs };
std::string_view to_string(Series s);

struct SweepConfig {
    LossKind loss = LossKind::Hamming;
    PenaltyKind penalty = PenaltyKind::Sep;
    CostGrid grid{0.05, 0.5, 0.05};
    std::size_t folds = 10;
    std::uint64_t seed = 0;
    /// Feed the dataset's stored true marginals instead of trained ones.
    bool use_true_marginals = false;
    TrainConfig train;
    std::size_t jobs = 1;
};

/// One series at one cost on one fold; fold 0 aggregates all test instances.
/// Losses are normalized: Hamming x100/m, rank /m, F as is (higher better).
struct SweepRow {
    LossKind loss = LossKind::Hamming;
    PenaltyKind penalty = PenaltyKind::Sep;
    Series series = Series::Partial;
    double c = 0.0;
    std::size_t fold = 0;
    double gen_loss = 0.0;
    double partial_loss = 0.0;
    double abstention_pct = 0.0;
    double expected = 0.0;
};

/// Rows ordered by cost, then series, then fold (1..k, then the aggregate).
std::vector<SweepRow> run_sweep(const Dataset& ds, const SweepConfig& config);

/// Aggregate rows (fold 0) of one series, in grid order.
std::vector<SweepRow> aggregate_series(const std::vector<SweepRow>& rows, Series series);

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path);
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace mlabstain
