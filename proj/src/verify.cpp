#include "mlabstain/verify.hpp"

#include <cmath>
#include <sstream>

#include "mlabstain/fmeasure.hpp"
#include "mlabstain/hamming.hpp"
#include "mlabstain/oracle.hpp"
#include "mlabstain/rank.hpp"

namespace mlabstain {

MarginalVector random_marginals(Rng& rng, std::size_t m) {
    std::vector<double> p(m);
    for (auto& v : p) {
        v = rng.uniform();
        if (rng.below(5) == 0) v = static_cast<double>(rng.below(11)) / 10.0;
    }
    return MarginalVector(std::move(p));
}

CostRange oracle_cost_range(LossKind loss, PenaltyKind penalty) {
    const bool sep = penalty == PenaltyKind::Sep;
    switch (loss) {
        case LossKind::Hamming: return sep ? CostRange{0.05, 0.5} : CostRange{0.1, 1.0};
        case LossKind::Rank: return sep ? CostRange{0.1, 1.0} : CostRange{0.2, 2.0};
        case LossKind::FMeasure: return sep ? CostRange{0.01, 0.2} : CostRange{0.02, 0.4};
    }
    return {0.0, 1.0};
}

namespace {

std::size_t capacity(LossKind loss) {
    switch (loss) {
        case LossKind::Hamming: return kMaxBruteHammingLabels;
        case LossKind::Rank: return kMaxBruteRankLabels;
        case LossKind::FMeasure: return kMaxBruteFLabels;
    }
    return 0;
}

std::string describe(const MarginalVector& p) {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < p.size(); ++i) os << (i ? "," : "") << p[i];
    return os.str();
}

}  // namespace

OracleCheckResult run_oracle_check(const OracleCheckConfig& config) {
    const std::size_t limit = capacity(config.loss);
    if (config.m == 0 || config.m > limit)
        throw CapacityError("oracle check for " + std::string(to_string(config.loss)) + " supports 1 <= m <= " +
                            std::to_string(limit) + ", got " + std::to_string(config.m));
    if (!(config.tol >= 0.0)) throw InputError("tolerance must be >= 0");

    Rng rng(config.seed);
    OracleCheckResult result;
    for (std::size_t t = 0; t < config.trials; ++t) {
        const MarginalVector p = random_marginals(rng, config.m);
        const PenaltyKind kind = rng.below(2) == 0 ? PenaltyKind::Sep : PenaltyKind::Par;
        const CostRange range = oracle_cost_range(config.loss, kind);
        const double c = rng.uniform(range.lo, range.hi);
        const Penalty f = Penalty::make(kind, c, config.m);

        double fast = 0.0;
        double exact = 0.0;
        double brute = 0.0;
        std::string fast_pred;
        std::string brute_pred;
        switch (config.loss) {
            case LossKind::Hamming: {
                const auto r = minimize_hamming(p, f);
                const auto b = brute_minimize_hamming(p, f);
                fast = r.expected_loss;
                exact = exact_expected_loss(p, r.prediction, LossKind::Hamming, f);
                brute = b.value;
                fast_pred = r.prediction.to_string();
                brute_pred = b.prediction.to_string();
                break;
            }
            case LossKind::Rank: {
                const auto r = minimize_rank(p, f);
                const auto b = brute_minimize_rank(p, f);
                fast = r.expected_loss;
                exact = exact_expected_loss(p, r.ranking, f);
                brute = b.value;
                fast_pred = r.ranking.to_string();
                brute_pred = b.ranking.to_string();
                break;
            }
            case LossKind::FMeasure: {
                const auto r = maximize_f_abstain(p, f);
                const auto b = brute_maximize_f(p, f);
                fast = r.expected_value;
                exact = exact_expected_f(p, r.prediction, f);
                brute = b.value;
                fast_pred = r.prediction.to_string();
                brute_pred = b.prediction.to_string();
                break;
            }
        }
        ++result.trials_run;
        const double diff = std::max(std::abs(fast - brute), std::abs(exact - brute));
        result.max_abs_diff = std::max(result.max_abs_diff, diff);
        if (diff > config.tol) {
            std::ostringstream os;
            os.precision(17);
            os << "trial " << t << ": p=(" << describe(p) << ") penalty=" << to_string(kind) << " c=" << c
               << " minimizer=" << fast_pred << " value=" << fast << " (exact " << exact << ") oracle=" << brute_pred
               << " value=" << brute;
            result.failure = os.str();
            result.passed = false;
            break;
        }
    }
    return result;
}

}  // namespace mlabstain
