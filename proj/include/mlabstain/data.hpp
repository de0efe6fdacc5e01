#pragma once

// Datasets as dense row-major matrices, CSV input/output, synthetic data drawn
// from independent logistic labels, and k-fold splits.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace mlabstain {

struct Dataset {
    std::size_t n = 0;
    std::size_t d = 0;
    std::size_t m = 0;
    std::vector<double> features;         // n x d
    std::vector<std::uint8_t> labels;     // n x m
    std::vector<double> true_marginals;   // n x m, synthetic data only
    std::vector<std::string> feature_names;
    std::vector<std::string> label_names;

    double feature(std::size_t row, std::size_t col) const { return features[row * d + col]; }
    std::uint8_t label(std::size_t row, std::size_t j) const { return labels[row * m + j]; }
    bool has_true_marginals() const noexcept { return !true_marginals.empty(); }

    std::vector<double> feature_row(std::size_t row) const;
    std::vector<std::uint8_t> label_row(std::size_t row) const;
    std::vector<double> marginal_row(std::size_t row) const;

    /// Rows in the given order.
    Dataset subset(const std::vector<std::size_t>& rows) const;
};

/// Header `f0,...,f{d-1},l0,...,l{m-1}`; LF or CRLF line endings. With
/// `require_labels` false a features-only file (m = 0) is accepted.
Dataset load_csv(const std::filesystem::path& path, bool require_labels = true);
void write_csv(const Dataset& ds, const std::filesystem::path& path);

/// Header `p0,...,p{m-1}`; one row of marginals per instance.
std::vector<std::vector<double>> load_marginals_csv(const std::filesystem::path& path);
void write_marginals_csv(const std::vector<double>& rows_flat, std::size_t m,
                         const std::filesystem::path& path);

/// Features ~ N(0,1); label j is 1 with probability sigmoid(w_j . x + b_j),
/// w_j ~ N(0, 4/d), b_j ~ N(0, 0.25). True marginals are stored.
Dataset synth(std::size_t m, std::size_t n, std::size_t d, std::uint64_t seed);

struct FoldPlan {
    std::uint64_t seed = 0;
    std::vector<std::vector<std::size_t>> folds;

    std::size_t size() const noexcept { return folds.size(); }
    /// Every index outside fold i, ascending.
    std::vector<std::size_t> train_indices(std::size_t i) const;
};

/// Shuffled partition of 0..n-1 into k folds of size floor(n/k) or ceil(n/k).
FoldPlan kfold(std::size_t n, std::size_t k, std::uint64_t seed);

}  // namespace mlabstain
