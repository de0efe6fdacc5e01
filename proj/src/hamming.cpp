#include "mlabstain/hamming.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mlabstain {

LabelwiseCosts LabelwiseCosts::unit(std::size_t m) {
    return LabelwiseCosts{std::vector<double>(m, 1.0), std::vector<double>(m, 1.0)};
}

void LabelwiseCosts::validate(std::size_t m) const {
    if (miss.size() != m || false_alarm.size() != m)
        throw InputError("label-wise cost vectors must have one entry per label");
    for (std::size_t i = 0; i < m; ++i) {
        if (!(miss[i] >= 0.0) || !(false_alarm[i] >= 0.0) || !std::isfinite(miss[i]) ||
            !std::isfinite(false_alarm[i]))
            throw InputError("label-wise costs must be finite and nonnegative");
    }
}

namespace {

void check_penalty(const MarginalVector& p, const Penalty& f) {
    if (f.label_count() != p.size())
        throw InputError("penalty is defined for " + std::to_string(f.label_count()) +
                         " labels but the marginal vector has " + std::to_string(p.size()));
}

}  // namespace

RiskReport minimize_decomposable(const MarginalVector& p, const LabelwiseCosts& costs,
                                 const Penalty& f) {
    const std::size_t m = p.size();
    costs.validate(m);
    check_penalty(p, f);

    RiskReport report;
    report.per_label_scores.resize(m);
    std::vector<Decision> side(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double if_zero = costs.miss[i] * p[i];
        const double if_one = costs.false_alarm[i] * (1.0 - p[i]);
        side[i] = if_zero <= if_one ? Decision::Zero : Decision::One;
        report.per_label_scores[i] = std::min(if_zero, if_one);
    }

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto& s = report.per_label_scores;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return s[a] < s[b]; });

    std::size_t best_d = 0;
    double best = f(m);
    double prefix = 0.0;
    for (std::size_t d = 1; d <= m; ++d) {
        prefix += s[order[d - 1]];
        const double total = prefix + f(m - d);
        if (total <= best + kTieTolerance) {
            best = total;
            best_d = d;
        }
    }

    std::vector<Decision> entries(m, Decision::Abstain);
    double decided_loss = 0.0;
    for (std::size_t k = 0; k < best_d; ++k) {
        entries[order[k]] = side[order[k]];
        decided_loss += s[order[k]];
    }
    report.prediction = PartialLabeling(std::move(entries));
    report.chosen_d = best_d;
    report.expected_loss = decided_loss + f(m - best_d);
    return report;
}

RiskReport minimize_hamming(const MarginalVector& p, const Penalty& f) {
    return minimize_decomposable(p, LabelwiseCosts::unit(p.size()), f);
}

RiskReport minimize_hamming_const(const MarginalVector& p, double c) {
    if (!(c >= 0.0 && c <= 1.0)) throw InputError("per-label abstention cost must lie in [0,1]");
    const std::size_t m = p.size();
    RiskReport report;
    report.per_label_scores.resize(m);
    std::vector<Decision> entries(m, Decision::Abstain);
    double loss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double s = labelwise_risk(p[i]);
        report.per_label_scores[i] = s;
        if (s <= c) {
            entries[i] = p[i] <= 0.5 ? Decision::Zero : Decision::One;
            loss += s;
            ++report.chosen_d;
        } else {
            loss += c;
        }
    }
    report.prediction = PartialLabeling(std::move(entries));
    report.expected_loss = loss;
    return report;
}

double expected_generalized_hamming(const MarginalVector& p, const PartialLabeling& yhat,
                                    const Penalty& f) {
    if (yhat.size() != p.size()) throw InputError("prediction and marginals have different sizes");
    double loss = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (yhat[i] == Decision::Zero) loss += p[i];
        if (yhat[i] == Decision::One) loss += 1.0 - p[i];
    }
    return loss + f(yhat.abstention_count());
}

}  // namespace mlabstain
