#include <doctest.h>

#include <cmath>
#include <numeric>

#include "mlabstain/oracle.hpp"
#include "mlabstain/verify.hpp"

using namespace mlabstain;

namespace {

const MarginalVector kExample({0.9, 0.8, 0.7, 0.3});

}  // namespace

TEST_CASE("enumerated distribution normalizes") {
    Rng rng(1);
    for (int t = 0; t < 50; ++t) {
        const std::size_t m = 1 + rng.below(14);
        const EnumeratedDistribution dist(random_marginals(rng, m));
        const auto probs = dist.probabilities();
        CHECK(std::abs(std::accumulate(probs.begin(), probs.end(), 0.0) - 1.0) <= 1e-12);
    }
}

TEST_CASE("enumerated marginals and pair counts") {
    const EnumeratedDistribution dist(kExample);
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(dist.marginal(i) - kExample[i]) <= 1e-12);
    CHECK(std::abs(dist.pairwise(0, 3, 0, 1) - 0.1 * 0.3) <= 1e-12);
    CHECK(dist.pair_count(0b0101) == 4);
    CHECK(dist.labeling(0b0101).relevant_count() == 2);
}

TEST_CASE("enumeration capacity") {
    CHECK_THROWS_AS(EnumeratedDistribution(MarginalVector(std::vector<double>(21, 0.5))), CapacityError);
    CHECK_THROWS_AS(brute_minimize_hamming(MarginalVector(std::vector<double>(9, 0.5)), Penalty::sep(0.1, 9)),
                    CapacityError);
    CHECK_THROWS_AS(brute_minimize_rank(MarginalVector(std::vector<double>(8, 0.5)), Penalty::sep(0.1, 8)),
                    CapacityError);
    CHECK_THROWS_AS(brute_maximize_f(MarginalVector(std::vector<double>(8, 0.5)), Penalty::sep(0.1, 8)),
                    CapacityError);
}

TEST_CASE("exact expected losses") {
    CHECK(std::abs(exact_expected_loss(kExample, PartialRanking({0, 3}, 4), Penalty::sep(0.03, 4)) - 0.09) <= 1e-12);
    CHECK(std::abs(exact_expected_loss(kExample, PartialLabeling::parse("1,1,?,?"), LossKind::Hamming,
                                       Penalty::sep(0.25, 4)) -
                   0.8) <= 1e-12);
    Rng rng(2);
    for (int t = 0; t < 20; ++t) {
        const std::size_t m = 1 + rng.below(8);
        const Penalty f = Penalty::par(rng.uniform(0.0, 1.0), m);
        CHECK(std::abs(exact_expected_loss(random_marginals(rng, m), PartialLabeling::abstain_all(m),
                                           LossKind::Hamming, f) -
                       f(m)) <= 1e-12);
    }
    CHECK_THROWS_AS(exact_expected_loss(kExample, PartialLabeling::parse("1,1,?,?"), LossKind::Rank,
                                        Penalty::sep(0.1, 4)),
                    InputError);
}

TEST_CASE("full predictions without penalty give the classical Hamming risk") {
    Rng rng(3);
    for (int t = 0; t < 100; ++t) {
        const std::size_t m = 1 + rng.below(10);
        const MarginalVector p = random_marginals(rng, m);
        std::vector<Decision> e(m);
        double closed = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            e[i] = rng.below(2) ? Decision::One : Decision::Zero;
            closed += e[i] == Decision::One ? 1.0 - p[i] : p[i];
        }
        CHECK(std::abs(exact_expected_loss(p, PartialLabeling(e), LossKind::Hamming, Penalty::sep(0.0, m)) - closed) <=
              1e-9);
    }
}

TEST_CASE("a full ranking and its reverse add to the expected pair count") {
    Rng rng(4);
    for (int t = 0; t < 100; ++t) {
        const std::size_t m = 1 + rng.below(9);
        const MarginalVector p = random_marginals(rng, m);
        const EnumeratedDistribution dist(p);
        std::vector<std::size_t> order(m);
        std::iota(order.begin(), order.end(), 0);
        rng.shuffle(order);
        const std::vector<std::size_t> reversed(order.rbegin(), order.rend());
        double pairs = 0.0;
        for (std::uint32_t y = 0; y < dist.size(); ++y) pairs += dist.probability(y) * dist.pair_count(y);
        const Penalty none = Penalty::sep(0.0, m);
        const double sum =
            exact_expected_loss(p, PartialRanking(order, m), none) + exact_expected_loss(p, PartialRanking(reversed, m), none);
        CHECK(std::abs(sum - pairs) <= 1e-9);
    }
}

TEST_CASE("brute-force hamming") {
    auto r = brute_minimize_hamming(kExample, Penalty::sep(0.25, 4));
    CHECK(r.prediction.to_string() == "1,1,?,?");
    CHECK(std::abs(r.value - 0.8) <= 1e-12);

    r = brute_minimize_hamming(MarginalVector({0.5}), Penalty::sep(0.4, 1));
    CHECK(r.prediction.to_string() == "?");
    CHECK(std::abs(r.value - 0.4) <= 1e-12);

    r = brute_minimize_hamming(MarginalVector({1.0, 0.0}), Penalty::sep(0.3, 2));
    CHECK(r.prediction.to_string() == "1,0");
    CHECK(r.value == 0.0);

    // Reference value recorded from the exhaustive search itself.
    r = brute_minimize_hamming(MarginalVector({0.15, 0.62, 0.48, 0.97, 0.33, 0.71}), Penalty::par(0.4, 6));
    CHECK(r.prediction.to_string() == "?,?,?,1,?,?");
    CHECK(std::abs(r.value - 1.1209090909090909) <= 1e-12);
}

TEST_CASE("brute-force rank") {
    auto r = brute_minimize_rank(kExample, Penalty::sep(0.03, 4));
    CHECK(std::abs(r.value - 0.09) <= 1e-12);

    r = brute_minimize_rank(MarginalVector({0.5, 0.5}), Penalty::sep(0.0, 2));
    CHECK(r.value == 0.0);

    r = brute_minimize_rank(MarginalVector({1.0, 0.0}), Penalty::sep(0.2, 2));
    CHECK(r.ranking.to_string() == "1>2");
    CHECK(r.value == 0.0);

    r = brute_minimize_rank(MarginalVector({0.15, 0.62, 0.48, 0.97, 0.33, 0.71}), Penalty::sep(0.2, 6));
    CHECK(r.ranking.to_string() == "4>6>1");
    CHECK(std::abs(r.value - 0.6693) <= 1e-12);
}

TEST_CASE("brute-force F") {
    // Full abstention is worth 1 - f(2) = 0.9.
    auto r = brute_maximize_f(MarginalVector({0.9, 0.3}), Penalty::sep(0.05, 2));
    CHECK(r.prediction.to_string() == "?,?");
    CHECK(std::abs(r.value - 0.9) <= 1e-12);

    r = brute_maximize_f(MarginalVector({1.0}), Penalty::sep(0.5, 1));
    CHECK(r.prediction.to_string() == "1");
    CHECK(r.value == 1.0);

    r = brute_maximize_f(MarginalVector({0.1, 0.1}), Penalty::table({0, 2, 2}));
    CHECK(r.prediction.to_string() == "0,0");
    CHECK(std::abs(r.value - 0.81) <= 1e-12);

    r = brute_maximize_f(MarginalVector({0.15, 0.62, 0.48, 0.97, 0.33, 0.71}), Penalty::par(0.1, 6));
    CHECK(r.prediction.to_string() == "0,1,1,1,0,1");
    CHECK(std::abs(r.value - 0.7524238278841906) <= 1e-12);
}

TEST_CASE("oracle check harness") {
    for (LossKind loss : {LossKind::Hamming, LossKind::Rank, LossKind::FMeasure}) {
        const auto r = run_oracle_check({loss, 5, 100, 42, 1e-9});
        CHECK(r.passed);
        CHECK(r.trials_run == 100);
    }
    CHECK_THROWS_AS(run_oracle_check({LossKind::Rank, 25, 1, 0, 1e-9}), CapacityError);
}
