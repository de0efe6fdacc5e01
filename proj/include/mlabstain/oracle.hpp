#pragma once

// Brute-force ground truth for small label counts: exact expectations by
// enumerating all 2^m labelings and exhaustive optimization over every
// partial prediction. Nothing here relies on the structural results the
// fast minimizers exploit.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mlabstain/core.hpp"

namespace mlabstain {

inline constexpr std::size_t kMaxEnumerationLabels = 20;
inline constexpr std::size_t kMaxBruteHammingLabels = 8;
inline constexpr std::size_t kMaxBruteRankLabels = 7;
inline constexpr std::size_t kMaxBruteFLabels = 7;

/// The product distribution over all 2^m labelings; bit i of a labeling
/// index is y_i. Enumeration order is plain binary counting.
class EnumeratedDistribution {
public:
    /// Throws CapacityError above kMaxEnumerationLabels.
    explicit EnumeratedDistribution(const MarginalVector& p);

    std::size_t label_count() const noexcept { return m_; }
    std::size_t size() const noexcept { return probs_.size(); }
    double probability(std::uint32_t labeling) const { return probs_[labeling]; }
    std::span<const double> probabilities() const noexcept { return probs_; }

    GroundTruth labeling(std::uint32_t index) const;
    /// r(y): number of relevant labels.
    static std::size_t relevant_count(std::uint32_t labeling);
    /// c(y) = r(y) (m - r(y)): relevant/irrelevant pairs, an upper bound on rank loss.
    std::size_t pair_count(std::uint32_t labeling) const;

    /// P(y_i = 1), summed over the enumeration.
    double marginal(std::size_t i) const;
    /// P(y_u = a, y_v = b), summed over the enumeration.
    double pairwise(std::size_t u, std::size_t v, int a, int b) const;

private:
    std::size_t m_;
    std::vector<double> probs_;
};

/// Expected generalized loss of a partial labeling. Hamming: errors on the
/// decided part plus f(|A|). FMeasure: 1 - F on the decided part plus f(|A|)
/// (with 1 - F = 0 under full abstention). Rank needs a PartialRanking.
double exact_expected_loss(const MarginalVector& p, const PartialLabeling& yhat, LossKind kind,
                           const Penalty& f);

/// Expected rank loss restricted to the ranked labels plus f(#unranked).
double exact_expected_loss(const MarginalVector& p, const PartialRanking& ranking, const Penalty& f);

/// Expected generalized F-measure F_G (higher is better).
double exact_expected_f(const MarginalVector& p, const PartialLabeling& yhat, const Penalty& f);

struct BruteLabeling {
    PartialLabeling prediction;
    double value = 0.0;
};

struct BruteRanking {
    PartialRanking ranking;
    double value = 0.0;
};

/// Minimum over all 3^m partial labelings; m <= 8.
BruteLabeling brute_minimize_hamming(const MarginalVector& p, const Penalty& f);

/// Minimum over every subset of labels in every order; m <= 7.
BruteRanking brute_minimize_rank(const MarginalVector& p, const Penalty& f);

/// Maximum expected F_G over all 3^m partial labelings; m <= 7.
BruteLabeling brute_maximize_f(const MarginalVector& p, const Penalty& f);

}  // namespace mlabstain
