#include <doctest.h>

#include <cmath>

#include "mlabstain/fmeasure.hpp"
#include "mlabstain/oracle.hpp"
#include "mlabstain/rank.hpp"
#include "mlabstain/verify.hpp"

using namespace mlabstain;

namespace {

Penalty random_penalty(Rng& rng, std::size_t m) {
    switch (rng.below(3)) {
        case 0: return Penalty::sep(rng.uniform(0.0, 0.2), m);
        case 1: return Penalty::par(rng.uniform(0.0, 0.4), m);
        default: {
            std::vector<double> t(m + 1, 0.0);
            for (std::size_t a = 1; a <= m; ++a) t[a] = t[a - 1] + rng.uniform(0.0, 0.15);
            return Penalty::table(std::move(t));
        }
    }
}

std::vector<std::size_t> positions_of(const FMaxReport& r, Decision which) {
    std::vector<std::size_t> out;
    for (std::size_t pos = 0; pos < r.sorted_labels.size(); ++pos)
        if (r.prediction[r.sorted_labels[pos]] == which) out.push_back(pos + 1);
    return out;
}

}  // namespace

TEST_CASE("prefix count table") {
    const std::vector<double> one{1.0};
    const auto q1 = build_prefix_counts(one);
    CHECK(q1(1, 1) == 1.0);
    CHECK(q1(1, 0) == 0.0);

    const std::vector<double> half{0.5, 0.5};
    const auto q2 = build_prefix_counts(half);
    CHECK(q2(2, 0) == doctest::Approx(0.25));
    CHECK(q2(2, 1) == doctest::Approx(0.5));
    CHECK(q2(2, 2) == doctest::Approx(0.25));
    CHECK(q2(2, -1) == 0.0);
    CHECK(q2(2, 3) == 0.0);

    const std::vector<double> mixed{0.9, 0.3};
    const auto q3 = build_prefix_counts(mixed);
    CHECK(q3(2, 0) == doctest::Approx(0.07).epsilon(1e-12));
    CHECK(q3(2, 1) == doctest::Approx(0.66).epsilon(1e-12));
    CHECK(q3(2, 2) == doctest::Approx(0.27).epsilon(1e-12));
}

TEST_CASE("prefix count rows are distributions") {
    Rng rng(51);
    for (int t = 0; t < 100; ++t) {
        const std::size_t m = 1 + rng.below(40);
        const MarginalVector p = random_marginals(rng, m);
        const auto q = build_prefix_counts(p.values());
        for (std::size_t k = 0; k <= m; ++k) {
            double s = 0.0;
            for (double v : q.row(k)) {
                CHECK(v >= 0.0);
                CHECK(v <= 1.0 + 1e-15);
                s += v;
            }
            CHECK(std::abs(s - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("suffix weights start at 1/(k+k1) and stay positive") {
    SuffixWeightTable s(3, 5);
    CHECK(s.suffix_start() == 6);
    CHECK(s[0] == doctest::Approx(1.0 / 3.0));
    CHECK(s[2] == doctest::Approx(1.0 / 5.0));
    s.extend(0.4);
    CHECK(s.suffix_start() == 5);
    CHECK(s[0] == doctest::Approx(0.4 / 4.0 + 0.6 / 3.0));
    CHECK(s[0] > 0.0);
    CHECK_THROWS_AS(SuffixWeightTable(0, 4), InputError);
}

TEST_CASE("expected F of top-k predictions") {
    const MarginalVector p({0.9, 0.3});
    CHECK(expected_f_full(p, 1) == doctest::Approx(0.81).epsilon(1e-12));
    CHECK(expected_f_full(p, 2) == doctest::Approx(0.71).epsilon(1e-12));
    CHECK(expected_f_full(MarginalVector({1.0, 1.0}), 2) == doctest::Approx(1.0));
    CHECK(expected_f_full(MarginalVector({0.1, 0.1}), 0) == doctest::Approx(0.81));
}

TEST_CASE("expected F of top-k agrees with enumeration") {
    Rng rng(53);
    for (int t = 0; t < 100; ++t) {
        const std::size_t m = 1 + rng.below(10);
        const MarginalVector p = random_marginals(rng, m);
        const auto order = sort_descending(p);
        for (std::size_t k = 0; k <= m; ++k) {
            std::vector<Decision> e(m, Decision::Zero);
            for (std::size_t i = 0; i < k; ++i) e[order[i]] = Decision::One;
            const double exact = exact_expected_f(p, PartialLabeling(e), Penalty::sep(0.0, m));
            CHECK(std::abs(expected_f_full(p, k) - exact) <= 1e-9);
        }
    }
}

TEST_CASE("full F maximizer") {
    auto r = maximize_f_full(MarginalVector({0.9, 0.3}));
    CHECK(r.k_star == 1);
    CHECK(r.prediction.to_string() == "1,0");
    CHECK(r.expected_value == doctest::Approx(0.81));

    r = maximize_f_full(MarginalVector({0.1, 0.1}));
    CHECK(r.k_star == 0);
    CHECK(r.expected_value == doctest::Approx(0.81));

    r = maximize_f_full(MarginalVector({1.0, 0.0}));
    CHECK(r.k_star == 1);
    CHECK(r.expected_value == doctest::Approx(1.0));

    // Reference values from enumeration over all 2^6 labelings.
    r = maximize_f_full(MarginalVector({0.15, 0.62, 0.48, 0.97, 0.33, 0.71}));
    CHECK(r.k_star == 4);
    CHECK(r.prediction.to_string() == "0,1,1,1,0,1");
    CHECK(std::abs(r.expected_value - 0.7524238278841906) <= 1e-9);
}

TEST_CASE("full F maximizer is the best of all 2^m predictions") {
    Rng rng(57);
    for (int t = 0; t < 150; ++t) {
        const std::size_t m = 1 + rng.below(7);
        const MarginalVector p = random_marginals(rng, m);
        const Penalty none = Penalty::sep(0.0, m);
        double best = -1.0;
        for (std::uint32_t mask = 0; mask < (1U << m); ++mask) {
            std::vector<Decision> e(m);
            for (std::size_t i = 0; i < m; ++i) e[i] = (mask >> i & 1U) ? Decision::One : Decision::Zero;
            best = std::max(best, exact_expected_f(p, PartialLabeling(e), none));
        }
        const auto r = maximize_f_full(p);
        CHECK(std::abs(r.expected_value - best) <= 1e-9);
        CHECK(positions_of(r, Decision::One).size() == r.k_star);
        const auto ones = positions_of(r, Decision::One);
        for (std::size_t i = 0; i < ones.size(); ++i) CHECK(ones[i] == i + 1);
    }
}

TEST_CASE("abstaining F maximizer examples") {
    const MarginalVector p({0.9, 0.3});
    // Full abstention scores 1 - f(2) = 0.9 here, above (1,?) at 0.85.
    auto r = maximize_f_abstain(p, Penalty::sep(0.05, 2));
    CHECK(r.prediction.to_string() == "?,?");
    CHECK(std::abs(r.expected_value - 0.9) <= 1e-12);
    CHECK(std::abs(exact_expected_f(p, PartialLabeling::parse("1,?"), Penalty::sep(0.05, 2)) - 0.85) <= 1e-12);

    r = maximize_f_abstain(p, Penalty::sep(2.0, 2));
    CHECK(r.prediction.to_string() == "1,0");
    CHECK(std::abs(r.expected_value - 0.81) <= 1e-12);

    r = maximize_f_abstain(MarginalVector({0.5, 0.5, 0.5}), Penalty::table({0, 0, 0, 0}));
    CHECK(r.prediction.to_string() == "?,?,?");
    CHECK(r.expected_value == 1.0);

    r = maximize_f_abstain(MarginalVector({0.1, 0.1}), Penalty::table({0, 2, 2}));
    CHECK(r.prediction.to_string() == "0,0");
    CHECK(std::abs(r.expected_value - 0.81) <= 1e-12);

    r = maximize_f_abstain(MarginalVector({1.0}), Penalty::sep(0.5, 1));
    CHECK(r.prediction.to_string() == "1");
    CHECK(r.expected_value == 1.0);
}

TEST_CASE("strict mode skips the all-irrelevant suffix candidates") {
    const MarginalVector p({0.1, 0.1});
    const auto r = maximize_f_abstain(p, Penalty::table({0, 2, 2}), {true, false});
    CHECK(r.k_star >= 1);
    CHECK(r.expected_value < 0.81);
}

TEST_CASE("abstaining F maximizer matches the oracle") {
    Rng rng(59);
    for (int t = 0; t < 400; ++t) {
        const std::size_t m = 1 + rng.below(kMaxBruteFLabels);
        const MarginalVector p = random_marginals(rng, m);
        const Penalty f = random_penalty(rng, m);
        const auto fast = maximize_f_abstain(p, f);
        const auto brute = brute_maximize_f(p, f);
        CHECK(std::abs(fast.expected_value - brute.value) <= 1e-9);
        CHECK(std::abs(exact_expected_f(p, fast.prediction, f) - brute.value) <= 1e-9);
    }
}

TEST_CASE("decision sets have the top-k / bottom form") {
    Rng rng(61);
    for (int t = 0; t < 200; ++t) {
        const std::size_t m = 1 + rng.below(25);
        const MarginalVector p = random_marginals(rng, m);
        const auto r = maximize_f_abstain(p, random_penalty(rng, m));
        const auto ones = positions_of(r, Decision::One);
        const auto zeros = positions_of(r, Decision::Zero);
        for (std::size_t i = 0; i < ones.size(); ++i) CHECK(ones[i] == i + 1);
        for (std::size_t i = 0; i < zeros.size(); ++i) CHECK(zeros[i] == m - zeros.size() + i + 1);
        CHECK(ones.size() == r.k_star);
        CHECK(r.abstentions == m - ones.size() - zeros.size());
    }
}

TEST_CASE("expected F moves with the marginal of a decided label") {
    Rng rng(67);
    for (int t = 0; t < 200; ++t) {
        const std::size_t m = 2 + rng.below(5);
        std::vector<double> pv(m);
        for (auto& v : pv) v = rng.uniform(0.05, 0.94);
        std::vector<Decision> e(m);
        for (auto& d : e) d = static_cast<Decision>(rng.below(3));
        const std::size_t j = rng.below(m);
        if (e[j] == Decision::Abstain) e[j] = Decision::One;
        const PartialLabeling yhat(e);
        const Penalty f = Penalty::sep(0.0, m);
        const double before = exact_expected_f(MarginalVector(pv), yhat, f);
        pv[j] += 0.01;
        const double after = exact_expected_f(MarginalVector(pv), yhat, f);
        if (e[j] == Decision::One) CHECK(after >= before - 1e-12);
        else CHECK(after <= before + 1e-12);
    }
}

TEST_CASE("a penalty beyond the F range reduces to full prediction") {
    Rng rng(71);
    for (int t = 0; t < 100; ++t) {
        const std::size_t m = 1 + rng.below(15);
        const MarginalVector p = random_marginals(rng, m);
        std::vector<double> table(m + 1);
        for (std::size_t a = 0; a <= m; ++a) table[a] = 2.0 * static_cast<double>(a);
        const auto partial = maximize_f_abstain(p, Penalty::table(table));
        const auto full = maximize_f_full(p);
        CHECK(partial.prediction == full.prediction);
        CHECK(std::abs(partial.expected_value - full.expected_value) <= 1e-9);
    }
}

TEST_CASE("grid retention") {
    const auto r = maximize_f_abstain(MarginalVector({0.7, 0.4, 0.2}), Penalty::sep(0.05, 3), {false, true});
    CHECK_FALSE(r.per_kl_grid.empty());
    double best = -1e300;
    for (const auto& g : r.per_kl_grid) best = std::max(best, g.value);
    CHECK(best == doctest::Approx(r.expected_value));
}
