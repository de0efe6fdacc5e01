#pragma once

// Expected F-measure maximization under conditional label independence.
//
// With labels sorted by decreasing probability, the best prediction with k
// positives and abstention has decision set {1..k} U {l..m}: the top k are
// predicted relevant, positions l..m irrelevant, the middle abstained. Its
// expected value is
//
//     F(k, l) = 2 sum_{k1} k1 Q(k, k1) S(k, k1, l) - f(l - k - 1)
//
// where Q(k, .) is the Poisson-binomial distribution of the number of
// relevant labels among the top k and S(k, k1, l) = E[1 / (k + k1 + R_l)]
// with R_l the number of relevant labels among positions l..m.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mlabstain/core.hpp"

namespace mlabstain {

/// Q(k, k1) = P(exactly k1 of the first k labels are relevant), for
/// k = 0..m and k1 = -1..k+1 (the two boundary entries are zero).
class PrefixCountTable {
public:
    explicit PrefixCountTable(std::span<const double> p_sorted);

    std::size_t label_count() const noexcept { return rows_.size() - 1; }
    /// Zero outside -1 <= k1 <= k + 1 as well.
    double operator()(std::size_t k, std::ptrdiff_t k1) const;
    /// Q(k, 0), ..., Q(k, k).
    std::span<const double> row(std::size_t k) const;

private:
    // rows_[k][k1 + 1] holds Q(k, k1).
    std::vector<std::vector<double>> rows_;
};

PrefixCountTable build_prefix_counts(std::span<const double> p_sorted);

/// Rolling S(k, ., l) for one fixed k >= 1. Starts at l = m + 1 with
/// S(k, k1) = 1 / (k + k1) and moves the suffix start left one label at a
/// time, in O(m) per step.
class SuffixWeightTable {
public:
    SuffixWeightTable(std::size_t k, std::size_t m);

    /// Prepends position `l` (1-based) with probability `p_l`; l must be the
    /// current suffix start minus one.
    void extend(double p_l);

    std::size_t k() const noexcept { return k_; }
    /// Current suffix start; m + 1 means the suffix is empty.
    std::size_t suffix_start() const noexcept { return l_; }
    double operator[](std::size_t k1) const { return s_[k1]; }

private:
    std::size_t k_;
    std::size_t l_;
    std::vector<double> s_;
};

struct FGridEntry {
    std::size_t k = 0;
    std::size_t l = 0;
    double value = 0.0;
};

struct FMaxReport {
    PartialLabeling prediction;
    double expected_value = 0.0;
    /// Number of labels predicted relevant (top positions 1..k).
    std::size_t k_star = 0;
    /// First position predicted irrelevant; m + 1 when none is.
    std::size_t l_star = 0;
    std::size_t abstentions = 0;
    std::vector<std::size_t> sorted_labels;
    /// Every evaluated candidate, only filled when requested.
    std::vector<FGridEntry> per_kl_grid;
};

struct FAbstainOptions {
    /// Only evaluate the candidates k >= 1 plus full abstention. The default
    /// also evaluates k = 0 predictions that decide "irrelevant" on a
    /// suffix, which can be strictly better.
    bool strict = false;
    bool keep_grid = false;
};

/// Expected F of predicting the k most probable labels relevant and the rest
/// irrelevant. k = 0 gives P(no label relevant).
double expected_f_full(const MarginalVector& p, std::size_t k);

/// Best top-k full prediction over k = 0..m in O(m^2); ties go to smaller k.
FMaxReport maximize_f_full(const MarginalVector& p);

/// Best partial prediction for the generalized F-measure in O(m^3). Ties go
/// to fewer abstentions, then to smaller k.
FMaxReport maximize_f_abstain(const MarginalVector& p, const Penalty& f, FAbstainOptions options = {});

}  // namespace mlabstain
