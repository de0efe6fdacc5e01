#include "mlabstain/fmeasure.hpp"

#include "mlabstain/rank.hpp"

namespace mlabstain {

PrefixCountTable::PrefixCountTable(std::span<const double> p_sorted) {
    const std::size_t m = p_sorted.size();
    rows_.resize(m + 1);
    rows_[0] = {0.0, 1.0, 0.0};
    for (std::size_t k = 1; k <= m; ++k) {
        const double pk = p_sorted[k - 1];
        const auto& prev = rows_[k - 1];
        auto& row = rows_[k];
        row.assign(k + 3, 0.0);
        for (std::size_t j = 0; j <= k; ++j) {
            // prev[j] is Q(k-1, j-1) and prev[j+1] is Q(k-1, j).
            const double with = prev[j];
            const double without = j + 1 < prev.size() ? prev[j + 1] : 0.0;
            row[j + 1] = pk * with + (1.0 - pk) * without;
        }
    }
}

double PrefixCountTable::operator()(std::size_t k, std::ptrdiff_t k1) const {
    if (k >= rows_.size()) throw InputError("prefix length out of range");
    if (k1 < -1 || k1 > static_cast<std::ptrdiff_t>(k) + 1) return 0.0;
    return rows_[k][static_cast<std::size_t>(k1 + 1)];
}

std::span<const double> PrefixCountTable::row(std::size_t k) const {
    if (k >= rows_.size()) throw InputError("prefix length out of range");
    return std::span<const double>(rows_[k]).subspan(1, k + 1);
}

PrefixCountTable build_prefix_counts(std::span<const double> p_sorted) {
    return PrefixCountTable(p_sorted);
}

SuffixWeightTable::SuffixWeightTable(std::size_t k, std::size_t m) : k_(k), l_(m + 1), s_(m + 1) {
    if (k == 0) throw InputError("suffix weights are defined for k >= 1");
    for (std::size_t i = 0; i <= m; ++i) s_[i] = 1.0 / static_cast<double>(k + i);
}

void SuffixWeightTable::extend(double p_l) {
    if (l_ <= 1) throw InputError("suffix already covers every label");
    --l_;
    // Ascending order reads S(i+1) before it is overwritten.
    for (std::size_t i = 0; i < l_; ++i) s_[i] = p_l * s_[i + 1] + (1.0 - p_l) * s_[i];
}

namespace {

std::vector<double> sorted_probs(const MarginalVector& p, const std::vector<std::size_t>& order) {
    std::vector<double> ps(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) ps[i] = p[order[i]];
    return ps;
}

// 2 sum_{k1} k1 Q(k, k1) S(k1), accumulated in extended precision.
double weighted_sum(std::span<const double> q_row, const SuffixWeightTable& s) {
    long double acc = 0.0L;
    for (std::size_t k1 = 1; k1 < q_row.size(); ++k1)
        acc += static_cast<long double>(k1) * q_row[k1] * s[k1];
    return static_cast<double>(2.0L * acc);
}

double all_irrelevant_probability(std::span<const double> ps) {
    long double prod = 1.0L;
    for (double p : ps) prod *= 1.0L - p;
    return static_cast<double>(prod);
}

PartialLabeling make_prediction(const std::vector<std::size_t>& order, std::size_t k, std::size_t l) {
    const std::size_t m = order.size();
    std::vector<Decision> entries(m, Decision::Abstain);
    for (std::size_t pos = 1; pos <= m; ++pos) {
        if (pos <= k) entries[order[pos - 1]] = Decision::One;
        else if (pos >= l) entries[order[pos - 1]] = Decision::Zero;
    }
    return PartialLabeling(std::move(entries));
}

struct Candidate {
    double value;
    std::size_t abstentions;
    std::size_t k;
    std::size_t l;
};

bool better(const Candidate& c, const Candidate& best) {
    if (c.value > best.value + kTieTolerance) return true;
    if (c.value < best.value - kTieTolerance) return false;
    if (c.abstentions != best.abstentions) return c.abstentions < best.abstentions;
    return c.k < best.k;
}

}  // namespace

double expected_f_full(const MarginalVector& p, std::size_t k) {
    const std::size_t m = p.size();
    if (k > m) throw InputError("k must lie in 0..m");
    const auto order = sort_descending(p);
    const auto ps = sorted_probs(p, order);
    if (k == 0) return all_irrelevant_probability(ps);

    const PrefixCountTable q(ps);
    SuffixWeightTable s(k, m);
    for (std::size_t l = m; l >= k + 1; --l) s.extend(ps[l - 1]);
    return weighted_sum(q.row(k), s);
}

FMaxReport maximize_f_full(const MarginalVector& p) {
    const std::size_t m = p.size();
    FMaxReport report;
    report.sorted_labels = sort_descending(p);
    const auto ps = sorted_probs(p, report.sorted_labels);
    const PrefixCountTable q(ps);

    // g[s] = E[1 / (s + R_l)] for the current suffix start l, so that
    // S(k, k1, l) = g[k + k1]. Walking l from m + 1 down to 2 yields the
    // value of every top-k prediction with k = l - 1 in O(m) each.
    std::vector<double> g(2 * m + 2, 0.0);
    for (std::size_t s = 1; s < g.size(); ++s) g[s] = 1.0 / static_cast<double>(s);
    std::vector<double> value(m + 1, 0.0);
    value[0] = all_irrelevant_probability(ps);
    for (std::size_t l = m + 1; l >= 2; --l) {
        if (l <= m) {
            const double pl = ps[l - 1];
            for (std::size_t s = 1; s + 1 < g.size(); ++s) g[s] = pl * g[s + 1] + (1.0 - pl) * g[s];
        }
        const std::size_t k = l - 1;
        const auto row = q.row(k);
        long double acc = 0.0L;
        for (std::size_t k1 = 1; k1 <= k; ++k1) acc += static_cast<long double>(k1) * row[k1] * g[k + k1];
        value[k] = static_cast<double>(2.0L * acc);
    }

    std::size_t best = 0;
    for (std::size_t k = 1; k <= m; ++k)
        if (value[k] > value[best] + kTieTolerance) best = k;

    report.k_star = best;
    report.l_star = best + 1;
    report.abstentions = 0;
    report.expected_value = value[best];
    report.prediction = make_prediction(report.sorted_labels, best, best + 1);
    return report;
}

FMaxReport maximize_f_abstain(const MarginalVector& p, const Penalty& f, FAbstainOptions options) {
    const std::size_t m = p.size();
    if (f.label_count() != m) throw InputError("penalty and marginals differ in label count");

    FMaxReport report;
    report.sorted_labels = sort_descending(p);
    const auto ps = sorted_probs(p, report.sorted_labels);
    const PrefixCountTable q(ps);

    Candidate best{1.0 - f(m), m, 0, m + 1};
    auto consider = [&](const Candidate& c) {
        if (options.keep_grid) report.per_kl_grid.push_back({c.k, c.l, c.value});
        if (better(c, best)) best = c;
    };
    if (options.keep_grid) report.per_kl_grid.push_back({0, m + 1, best.value});

    if (!options.strict) {
        // Nothing predicted relevant, positions l..m predicted irrelevant:
        // F is 1 exactly when that suffix holds no relevant label.
        long double none_relevant = 1.0L;
        for (std::size_t l = m; l >= 1; --l) {
            none_relevant *= 1.0L - ps[l - 1];
            consider({static_cast<double>(none_relevant) - f(l - 1), l - 1, 0, l});
        }
    }

    for (std::size_t k = 1; k <= m; ++k) {
        const auto row = q.row(k);
        SuffixWeightTable s(k, m);
        consider({weighted_sum(row, s) - f(m - k), m - k, k, m + 1});
        for (std::size_t l = m; l >= k + 1; --l) {
            s.extend(ps[l - 1]);
            const std::size_t a = l - k - 1;
            consider({weighted_sum(row, s) - f(a), a, k, l});
        }
    }

    report.k_star = best.k;
    report.l_star = best.l;
    report.abstentions = best.abstentions;
    report.expected_value = best.value;
    report.prediction = make_prediction(report.sorted_labels, best.k, best.l);
    return report;
}

}  // namespace mlabstain
