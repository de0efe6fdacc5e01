#pragma once

// Binary relevance: an independent L2-regularized logistic regression per
// label, trained on standardized features.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mlabstain/core.hpp"
#include "mlabstain/data.hpp"

namespace mlabstain {

struct TrainConfig {
    double c_reg = 1.0;
    std::size_t max_iter = 1000;
    double tol = 1e-6;
    std::uint64_t seed = 0;

    /// Throws InputError unless c_reg > 0, tol > 0, max_iter > 0.
    void validate() const;
};

/// (1/n) [ sum_i softplus(z_i) - y_i z_i + |w|^2 / (2 c_reg) ], z_i = w.x_i + b.
/// Parameters are packed as [w_0..w_{d-1}, b]; the bias is not penalized.
class LogisticObjective {
public:
    LogisticObjective(std::span<const double> x, std::size_t d, std::span<const std::uint8_t> y,
                      double c_reg);

    std::size_t dim() const noexcept { return d_ + 1; }
    double value(std::span<const double> theta) const;
    /// Returns the objective and writes the gradient into `grad`.
    double value_and_gradient(std::span<const double> theta, std::span<double> grad) const;

private:
    std::span<const double> x_;
    std::size_t d_;
    std::size_t n_;
    std::span<const std::uint8_t> y_;
    double c_reg_;
};

struct FitResult {
    std::vector<double> theta;
    std::size_t iterations = 0;
    double grad_norm = 0.0;
    bool converged = false;
    std::vector<double> objective_trace;
};

/// Gradient descent from zero with Barzilai-Borwein trial steps and Armijo
/// backtracking. The recorded objective never increases.
FitResult fit_logistic(const LogisticObjective& objective, std::size_t max_iter, double tol);

struct LabelSummary {
    std::size_t iterations = 0;
    double grad_norm = 0.0;
    bool converged = false;
    double objective = 0.0;
};

class BRModel {
public:
    static constexpr int kSchemaVersion = 1;

    BRModel() = default;
    BRModel(std::size_t d, std::size_t m, double c_reg, std::vector<double> mean, std::vector<double> scale,
            std::vector<double> weights, std::vector<double> biases);

    std::size_t feature_dim() const noexcept { return d_; }
    std::size_t label_count() const noexcept { return m_; }
    double c_reg() const noexcept { return c_reg_; }
    /// Weights act on standardized features.
    std::span<const double> weights(std::size_t label) const;
    double bias(std::size_t label) const { return biases_.at(label); }
    std::span<const double> mean() const noexcept { return mean_; }
    std::span<const double> scale() const noexcept { return scale_; }

    /// Entries clamped to [1e-12, 1 - 1e-12].
    MarginalVector predict(std::span<const double> features) const;
    /// n x m row-major marginals for every row of `ds`.
    std::vector<double> predict_all(const Dataset& ds) const;

    void save(const std::filesystem::path& path) const;
    static BRModel load(const std::filesystem::path& path);

private:
    std::size_t d_ = 0;
    std::size_t m_ = 0;
    double c_reg_ = 1.0;
    std::vector<double> mean_;
    std::vector<double> scale_;
    std::vector<double> weights_;  // m x d
    std::vector<double> biases_;
};

struct TrainResult {
    BRModel model;
    std::vector<LabelSummary> labels;
    std::vector<std::string> warnings;
};

TrainResult train(const Dataset& ds, const TrainConfig& config);

MarginalVector predict_marginals(const BRModel& model, std::span<const double> features);

inline constexpr double kProbabilityClamp = 1e-12;

}  // namespace mlabstain
