#include "mlabstain/oracle.hpp"

#include <bit>
#include <functional>

namespace mlabstain {

EnumeratedDistribution::EnumeratedDistribution(const MarginalVector& p) : m_(p.size()) {
    if (m_ > kMaxEnumerationLabels)
        throw CapacityError("enumeration supports at most " + std::to_string(kMaxEnumerationLabels) +
                            " labels, got " + std::to_string(m_));
    probs_.assign(std::size_t{1} << m_, 1.0);
    for (std::uint32_t y = 0; y < probs_.size(); ++y) {
        double prob = 1.0;
        for (std::size_t i = 0; i < m_; ++i) prob *= ((y >> i) & 1U) ? p[i] : 1.0 - p[i];
        probs_[y] = prob;
    }
}

GroundTruth EnumeratedDistribution::labeling(std::uint32_t index) const {
    std::vector<std::uint8_t> labels(m_);
    for (std::size_t i = 0; i < m_; ++i) labels[i] = static_cast<std::uint8_t>((index >> i) & 1U);
    return GroundTruth(std::move(labels));
}

std::size_t EnumeratedDistribution::relevant_count(std::uint32_t labeling) {
    return static_cast<std::size_t>(std::popcount(labeling));
}

std::size_t EnumeratedDistribution::pair_count(std::uint32_t labeling) const {
    const std::size_t r = relevant_count(labeling);
    return r * (m_ - r);
}

double EnumeratedDistribution::marginal(std::size_t i) const {
    double total = 0.0;
    for (std::uint32_t y = 0; y < probs_.size(); ++y)
        if ((y >> i) & 1U) total += probs_[y];
    return total;
}

double EnumeratedDistribution::pairwise(std::size_t u, std::size_t v, int a, int b) const {
    double total = 0.0;
    for (std::uint32_t y = 0; y < probs_.size(); ++y) {
        if (static_cast<int>((y >> u) & 1U) == a && static_cast<int>((y >> v) & 1U) == b) total += probs_[y];
    }
    return total;
}

namespace {

// A partial labeling as two bit masks over labels.
struct Masks {
    std::uint32_t decided = 0;
    std::uint32_t ones = 0;
    std::size_t abstained = 0;
};

Masks to_masks(const PartialLabeling& yhat) {
    Masks mk;
    for (std::size_t i = 0; i < yhat.size(); ++i) {
        if (yhat[i] == Decision::Abstain) {
            ++mk.abstained;
            continue;
        }
        mk.decided |= 1U << i;
        if (yhat[i] == Decision::One) mk.ones |= 1U << i;
    }
    return mk;
}

double expected_hamming_errors(const EnumeratedDistribution& dist, const Masks& mk) {
    double total = 0.0;
    for (std::uint32_t y = 0; y < dist.size(); ++y)
        total += dist.probability(y) * std::popcount((y ^ mk.ones) & mk.decided);
    return total;
}

// E[F(y_D, yhat_D)] with F = 1 when both restricted vectors are all zero.
double expected_f_decided(const EnumeratedDistribution& dist, const Masks& mk) {
    const int predicted = std::popcount(mk.ones);
    double total = 0.0;
    for (std::uint32_t y = 0; y < dist.size(); ++y) {
        const int tp = std::popcount(y & mk.ones);
        const int denom = std::popcount(y & mk.decided) + predicted;
        const double f = denom == 0 ? 1.0 : 2.0 * tp / denom;
        total += dist.probability(y) * f;
    }
    return total;
}

void require_size(const MarginalVector& p, const Penalty& f, std::size_t limit, const char* what) {
    if (p.size() > limit)
        throw CapacityError(std::string(what) + " supports at most " + std::to_string(limit) +
                            " labels, got " + std::to_string(p.size()));
    if (f.label_count() != p.size()) throw InputError("penalty and marginals differ in label count");
}

// Decodes the base-3 counter (digit 0 -> 0, 1 -> 1, 2 -> abstain).
PartialLabeling decode_ternary(std::uint32_t code, std::size_t m) {
    std::vector<Decision> entries(m);
    for (std::size_t i = 0; i < m; ++i) {
        entries[i] = static_cast<Decision>(code % 3);
        code /= 3;
    }
    return PartialLabeling(std::move(entries));
}

std::uint32_t ternary_count(std::size_t m) {
    std::uint32_t n = 1;
    for (std::size_t i = 0; i < m; ++i) n *= 3;
    return n;
}

}  // namespace

double exact_expected_loss(const MarginalVector& p, const PartialLabeling& yhat, LossKind kind,
                           const Penalty& f) {
    if (yhat.size() != p.size()) throw InputError("prediction and marginals differ in size");
    const EnumeratedDistribution dist(p);
    const Masks mk = to_masks(yhat);
    switch (kind) {
        case LossKind::Hamming: return expected_hamming_errors(dist, mk) + f(mk.abstained);
        case LossKind::FMeasure: {
            const double fd = mk.abstained == p.size() ? 1.0 : expected_f_decided(dist, mk);
            return 1.0 - fd + f(mk.abstained);
        }
        case LossKind::Rank: break;
    }
    throw InputError("rank loss is defined on rankings, not labelings");
}

double exact_expected_loss(const MarginalVector& p, const PartialRanking& ranking, const Penalty& f) {
    if (ranking.label_count() != p.size()) throw InputError("ranking and marginals differ in size");
    const EnumeratedDistribution dist(p);
    double total = 0.0;
    for (std::uint32_t y = 0; y < dist.size(); ++y) {
        if (dist.probability(y) == 0.0) continue;
        total += dist.probability(y) * rank_loss(dist.labeling(y), ranking);
    }
    return total + f(ranking.abstention_count());
}

double exact_expected_f(const MarginalVector& p, const PartialLabeling& yhat, const Penalty& f) {
    return 1.0 - exact_expected_loss(p, yhat, LossKind::FMeasure, f);
}

BruteLabeling brute_minimize_hamming(const MarginalVector& p, const Penalty& f) {
    require_size(p, f, kMaxBruteHammingLabels, "brute_minimize_hamming");
    const std::size_t m = p.size();
    const EnumeratedDistribution dist(p);
    BruteLabeling best;
    bool have = false;
    const std::uint32_t count = ternary_count(m);
    for (std::uint32_t code = 0; code < count; ++code) {
        PartialLabeling yhat = decode_ternary(code, m);
        const Masks mk = to_masks(yhat);
        const double value = expected_hamming_errors(dist, mk) + f(mk.abstained);
        if (!have || value < best.value) {
            best = {std::move(yhat), value};
            have = true;
        }
    }
    return best;
}

BruteRanking brute_minimize_rank(const MarginalVector& p, const Penalty& f) {
    require_size(p, f, kMaxBruteRankLabels, "brute_minimize_rank");
    const std::size_t m = p.size();
    const EnumeratedDistribution dist(p);
    // inversion[u][v]: probability that u (ranked above v) is irrelevant
    // while v is relevant.
    std::vector<std::vector<double>> inversion(m, std::vector<double>(m, 0.0));
    for (std::size_t u = 0; u < m; ++u)
        for (std::size_t v = 0; v < m; ++v)
            if (u != v) inversion[u][v] = dist.pairwise(u, v, 0, 1);

    BruteRanking best{PartialRanking({}, m), f(m)};
    std::vector<std::size_t> prefix;
    std::vector<bool> used(m, false);
    std::function<void(double)> extend = [&](double loss) {
        for (std::size_t v = 0; v < m; ++v) {
            if (used[v]) continue;
            double added = 0.0;
            for (std::size_t u : prefix) added += inversion[u][v];
            prefix.push_back(v);
            used[v] = true;
            const double next = loss + added;
            const double value = next + f(m - prefix.size());
            if (value < best.value) best = {PartialRanking(prefix, m), value};
            extend(next);
            used[v] = false;
            prefix.pop_back();
        }
    };
    extend(0.0);
    return best;
}

BruteLabeling brute_maximize_f(const MarginalVector& p, const Penalty& f) {
    require_size(p, f, kMaxBruteFLabels, "brute_maximize_f");
    const std::size_t m = p.size();
    const EnumeratedDistribution dist(p);
    BruteLabeling best;
    bool have = false;
    const std::uint32_t count = ternary_count(m);
    for (std::uint32_t code = 0; code < count; ++code) {
        PartialLabeling yhat = decode_ternary(code, m);
        const Masks mk = to_masks(yhat);
        const double fd = mk.abstained == m ? 1.0 : expected_f_decided(dist, mk);
        const double value = fd - f(mk.abstained);
        if (!have || value > best.value) {
            best = {std::move(yhat), value};
            have = true;
        }
    }
    return best;
}

}  // namespace mlabstain
