#pragma once

// Exact risk minimization for label-wise decomposable losses extended with a
// counting abstention penalty. Sorting labels by their best achievable
// expected loss s_i and choosing the best prefix size d is optimal, which
// gives O(m log m) minimizers.

#include <cstddef>
#include <vector>

#include "mlabstain/core.hpp"

namespace mlabstain {

/// Costs of the two kinds of mistakes on each label; correct predictions
/// cost nothing.
struct LabelwiseCosts {
    std::vector<double> miss;         // predicting 0 when the label is relevant
    std::vector<double> false_alarm;  // predicting 1 when the label is irrelevant

    static LabelwiseCosts unit(std::size_t m);
    void validate(std::size_t m) const;
};

struct RiskReport {
    PartialLabeling prediction;
    double expected_loss = 0.0;
    /// s_i = min(miss_i p_i, false_alarm_i (1 - p_i)) for every label.
    std::vector<double> per_label_scores;
    std::size_t chosen_d = 0;
};

/// Ties: equal s_i sort by label index; p = 1/2 style ties between deciding 0
/// and 1 choose 0; ties between prefix sizes choose the larger d.
RiskReport minimize_decomposable(const MarginalVector& p, const LabelwiseCosts& costs,
                                 const Penalty& f);

/// Hamming loss: unit costs, so labels are decided in order of uncertainty.
RiskReport minimize_hamming(const MarginalVector& p, const Penalty& f);

/// Closed form for the per-label constant penalty f(a) = a c: decide exactly
/// the labels with min(p_i, 1 - p_i) <= c. Requires c in [0, 1].
RiskReport minimize_hamming_const(const MarginalVector& p, double c);

/// Expected Hamming error on decided labels plus f(|A|) under the marginals.
double expected_generalized_hamming(const MarginalVector& p, const PartialLabeling& yhat,
                                    const Penalty& f);

}  // namespace mlabstain
