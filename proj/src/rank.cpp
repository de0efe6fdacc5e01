#include "mlabstain/rank.hpp"

#include <algorithm>
#include <numeric>

namespace mlabstain {

std::vector<std::size_t> sort_descending(const MarginalVector& p) {
    std::vector<std::size_t> order(p.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return p[a] > p[b]; });
    return order;
}

BoundarySelection BoundarySelection::empty(std::size_t m) {
    BoundarySelection s;
    s.form_ = Form::Empty;
    s.m_ = m;
    return s;
}

BoundarySelection BoundarySelection::single(std::size_t m) {
    if (m < 1) throw InputError("single-label selection needs m >= 1");
    BoundarySelection s;
    s.form_ = Form::Single;
    s.a_ = 1;
    s.m_ = m;
    return s;
}

BoundarySelection BoundarySelection::two_sided(std::size_t a, std::size_t b, std::size_t m) {
    if (!(a >= 1 && a < b && b <= m))
        throw InputError("boundary selection requires 1 <= a < b <= m");
    BoundarySelection s;
    s.form_ = Form::TwoSided;
    s.a_ = a;
    s.b_ = b;
    s.m_ = m;
    return s;
}

std::size_t BoundarySelection::size() const noexcept {
    switch (form_) {
        case Form::Empty: return 0;
        case Form::Single: return 1;
        case Form::TwoSided: return m_ + a_ - b_ + 1;
    }
    return 0;
}

std::vector<std::size_t> BoundarySelection::positions() const {
    std::vector<std::size_t> out;
    switch (form_) {
        case Form::Empty: break;
        case Form::Single: out.push_back(0); break;
        case Form::TwoSided:
            for (std::size_t i = 1; i <= a_; ++i) out.push_back(i - 1);
            for (std::size_t i = b_; i <= m_; ++i) out.push_back(i - 1);
            break;
    }
    return out;
}

double expected_partial_rank_loss(std::span<const double> p_sorted,
                                  std::span<const std::size_t> positions) {
    for (std::size_t i = 0; i < positions.size(); ++i) {
        if (positions[i] >= p_sorted.size()) throw InputError("selected position out of range");
        if (i && positions[i] <= positions[i - 1]) throw InputError("positions must be ascending");
    }
    // Each selected label pays p_(j) times the accumulated irrelevance mass of
    // the labels ranked above it.
    double irrelevant_above = 0.0;
    double loss = 0.0;
    for (std::size_t pos : positions) {
        loss += p_sorted[pos] * irrelevant_above;
        irrelevant_above += 1.0 - p_sorted[pos];
    }
    return loss;
}

double expected_partial_rank_loss(std::span<const double> p_sorted, const BoundarySelection& k) {
    if (k.label_count() != p_sorted.size()) throw InputError("selection and marginals differ in size");
    for (std::size_t i = 1; i < p_sorted.size(); ++i)
        if (p_sorted[i] > p_sorted[i - 1]) throw InputError("marginals must be sorted in decreasing order");
    const auto pos = k.positions();
    return expected_partial_rank_loss(p_sorted, pos);
}

RankRiskReport minimize_rank(const MarginalVector& p, const Penalty& f, RankOptions options) {
    const std::size_t m = p.size();
    if (f.label_count() != m) throw InputError("penalty and marginals differ in label count");

    RankRiskReport report;
    report.sorted_labels = sort_descending(p);
    std::vector<double> ps(m);
    for (std::size_t i = 0; i < m; ++i) ps[i] = p[report.sorted_labels[i]];

    auto& curve = report.per_d_curve;
    curve.push_back({0, BoundarySelection::empty(m), 0.0, f(m), f(m)});
    if (options.include_single) {
        curve.push_back({1, BoundarySelection::single(m), 0.0, f(m - 1), f(m - 1)});
    }

    if (m >= 2) {
        std::size_t a = 1;
        std::size_t b = m;
        // Irrelevance mass of the prefix {1..a} and relevance mass of the
        // suffix {b..m}. Inserting position x between them adds
        // p_x * prefix_mass + (1 - p_x) * suffix_mass.
        double prefix_mass = 1.0 - ps[0];
        double suffix_mass = ps[m - 1];
        double loss = ps[m - 1] * (1.0 - ps[0]);
        curve.push_back({2, BoundarySelection::two_sided(a, b, m), loss, f(m - 2), loss + f(m - 2)});
        for (std::size_t d = 3; d <= m; ++d) {
            const double grow_top = ps[a] * prefix_mass + (1.0 - ps[a]) * suffix_mass;
            const double pb = ps[b - 2];
            const double grow_bottom = pb * prefix_mass + (1.0 - pb) * suffix_mass;
            if (grow_top <= grow_bottom + kTieTolerance) {
                prefix_mass += 1.0 - ps[a];
                ++a;
                loss += grow_top;
            } else {
                suffix_mass += pb;
                --b;
                loss += grow_bottom;
            }
            const double pen = f(m - d);
            curve.push_back({d, BoundarySelection::two_sided(a, b, m), loss, pen, loss + pen});
        }
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < curve.size(); ++i)
        if (curve[i].total <= curve[best].total + kTieTolerance) best = i;

    report.selection = curve[best].selection;
    report.expected_loss = curve[best].total;
    std::vector<std::size_t> labels;
    for (std::size_t pos : report.selection.positions()) labels.push_back(report.sorted_labels[pos]);
    report.ranking = PartialRanking(std::move(labels), m);
    return report;
}

double expected_generalized_rank_loss(const MarginalVector& p, const PartialRanking& ranking,
                                      const Penalty& f) {
    if (ranking.label_count() != p.size()) throw InputError("ranking and marginals differ in size");
    double irrelevant_above = 0.0;
    double loss = 0.0;
    for (std::size_t label : ranking.order()) {
        loss += p[label] * irrelevant_above;
        irrelevant_above += 1.0 - p[label];
    }
    return loss + f(ranking.abstention_count());
}

}  // namespace mlabstain
