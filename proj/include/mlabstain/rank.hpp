#pragma once

// Partial rankings minimizing expected rank loss plus an abstention penalty,
// assuming labels are conditionally independent given the instance.
//
// Positions below refer to the labels sorted by decreasing probability. An
// optimal decision set of every size d >= 2 is a "boundary" set
// {1..a} U {b..m}, and optimal sets of consecutive sizes are nested, so the
// optimum is found by growing <<1,m>> one position at a time.

#include <cstddef>
#include <span>
#include <vector>

#include "mlabstain/core.hpp"

namespace mlabstain {

/// Stable permutation ordering labels by decreasing probability; equal
/// probabilities keep ascending label order.
std::vector<std::size_t> sort_descending(const MarginalVector& p);

/// A decision set over sorted positions (1-based, as in {1..a} U {b..m}).
class BoundarySelection {
public:
    enum class Form { Empty, Single, TwoSided };

    static BoundarySelection empty(std::size_t m);
    /// Only the top position.
    static BoundarySelection single(std::size_t m);
    /// {1..a} U {b..m}; requires 1 <= a < b <= m.
    static BoundarySelection two_sided(std::size_t a, std::size_t b, std::size_t m);

    Form form() const noexcept { return form_; }
    std::size_t a() const noexcept { return a_; }
    std::size_t b() const noexcept { return b_; }
    std::size_t label_count() const noexcept { return m_; }
    std::size_t size() const noexcept;

    /// Selected positions, 0-based and ascending.
    std::vector<std::size_t> positions() const;

    friend bool operator==(const BoundarySelection&, const BoundarySelection&) = default;

private:
    Form form_ = Form::Empty;
    std::size_t a_ = 0;
    std::size_t b_ = 0;
    std::size_t m_ = 0;
};

/// Sum over selected position pairs i < j of p_(j) (1 - p_(i)).
/// `p_sorted` must be nonincreasing.
double expected_partial_rank_loss(std::span<const double> p_sorted, const BoundarySelection& k);

/// Same sum for arbitrary ascending positions; used to cross-check the
/// incremental updates.
double expected_partial_rank_loss(std::span<const double> p_sorted,
                                  std::span<const std::size_t> positions);

struct RankCurvePoint {
    std::size_t d = 0;
    BoundarySelection selection;
    double expected_rank_loss = 0.0;
    double penalty = 0.0;
    double total = 0.0;
};

struct RankRiskReport {
    PartialRanking ranking;
    BoundarySelection selection;
    double expected_loss = 0.0;
    std::vector<std::size_t> sorted_labels;
    std::vector<RankCurvePoint> per_d_curve;
};

struct RankOptions {
    /// Consider the one-label ranking (d = 1). Disabling it reproduces the
    /// candidate set d in {0, 2, ..., m} exactly.
    bool include_single = true;
};

/// O(m log m). Ties across d go to the larger d; ties between the two greedy
/// extensions go to <<a+1,b>>.
RankRiskReport minimize_rank(const MarginalVector& p, const Penalty& f, RankOptions options = {});

/// Expected rank loss of a (partial) ranking plus f(abstentions), using the
/// independent pairwise marginals P(y_u = 0) P(y_v = 1).
double expected_generalized_rank_loss(const MarginalVector& p, const PartialRanking& ranking,
                                      const Penalty& f);

}  // namespace mlabstain
