#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "mlabstain/data.hpp"
#include "mlabstain/errors.hpp"
#include "mlabstain/hamming.hpp"

using namespace mlabstain;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "mlabstain_data_test";
    fs::create_directories(dir);
    return dir / name;
}

fs::path write_file(const std::string& name, const std::string& text) {
    const fs::path p = scratch(name);
    std::ofstream(p, std::ios::binary) << text;
    return p;
}

}  // namespace

TEST_CASE("load a small csv") {
    const auto p = write_file("small.csv", "f0,f1,l0,l1\n0.5,1,0,1\n-2,3e-2,1,1\r\n4,5,0,0\n");
    const Dataset ds = load_csv(p);
    CHECK(ds.n == 3);
    CHECK(ds.d == 2);
    CHECK(ds.m == 2);
    CHECK(ds.feature(1, 1) == doctest::Approx(0.03));
    CHECK(ds.label(1, 0) == 1);
    CHECK(ds.label(2, 1) == 0);
}

TEST_CASE("csv errors") {
    CHECK_THROWS_AS(load_csv(write_file("empty.csv", "")), ParseError);
    CHECK_THROWS_AS(load_csv(write_file("header_only.csv", "f0,l0\n")), ParseError);
    CHECK_THROWS_AS(load_csv(write_file("bad_header.csv", "x,l0\n1,0\n")), ParseError);
    CHECK_THROWS_AS(load_csv(write_file("short_row.csv", "f0,l0\n1,0\n2\n")), ParseError);
    CHECK_THROWS_AS(load_csv(fs::path("/nonexistent/file.csv")), ParseError);
    try {
        load_csv(write_file("bad_label.csv", "f0,l0,l1\n1,0,1\n2,1,2\n"));
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("row 2") != std::string::npos);
        CHECK(msg.find("l1") != std::string::npos);
    }
    try {
        load_csv(write_file("bad_number.csv", "f0,l0\n1,0\nabc,1\n"));
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find(":3:") != std::string::npos);
    }
}

TEST_CASE("csv round trip is exact") {
    const Dataset ds = synth(3, 50, 4, 5);
    const auto p = scratch("roundtrip.csv");
    write_csv(ds, p);
    const Dataset back = load_csv(p);
    CHECK(back.n == ds.n);
    CHECK(back.features == ds.features);
    CHECK(back.labels == ds.labels);
}

TEST_CASE("marginals csv round trip") {
    const Dataset ds = synth(3, 20, 2, 9);
    const auto p = scratch("marg.csv");
    write_marginals_csv(ds.true_marginals, ds.m, p);
    const auto rows = load_marginals_csv(p);
    REQUIRE(rows.size() == 20);
    for (std::size_t r = 0; r < 20; ++r)
        for (std::size_t j = 0; j < 3; ++j) CHECK(rows[r][j] == ds.true_marginals[r * 3 + j]);
    CHECK_THROWS_AS(load_marginals_csv(write_file("bad_marg.csv", "p0,p1\n0.2,1.3\n")), ValidationError);
}

TEST_CASE("synthetic data is deterministic") {
    const Dataset a = synth(2, 4, 3, 7);
    const Dataset b = synth(2, 4, 3, 7);
    CHECK(a.features == b.features);
    CHECK(a.labels == b.labels);
    CHECK(a.true_marginals == b.true_marginals);
    CHECK(a.n == 4);
    CHECK(a.m == 2);
    CHECK(synth(2, 4, 3, 8).features != a.features);
    CHECK_THROWS_AS(synth(2, 4, 0, 1), InputError);
    CHECK_THROWS_AS(synth(0, 4, 3, 1), InputError);
}

TEST_CASE("synthetic label frequencies match the true marginals") {
    const Dataset ds = synth(4, 100000, 5, 123);
    for (std::size_t j = 0; j < ds.m; ++j) {
        double freq = 0.0, mean = 0.0, var = 0.0;
        for (std::size_t r = 0; r < ds.n; ++r) {
            const double p = ds.true_marginals[r * ds.m + j];
            freq += ds.label(r, j);
            mean += p;
            var += p * (1.0 - p);
        }
        const double se = std::sqrt(var) / static_cast<double>(ds.n);
        CHECK(std::abs(freq / ds.n - mean / ds.n) <= 3.0 * se);
    }
}

TEST_CASE("calibrated marginals predict their own Hamming error") {
    const Dataset ds = synth(5, 100000, 4, 321);
    double realized = 0.0, expected = 0.0;
    for (std::size_t r = 0; r < ds.n; ++r) {
        for (std::size_t j = 0; j < ds.m; ++j) {
            const double p = ds.true_marginals[r * ds.m + j];
            const int yhat = p > 0.5 ? 1 : 0;
            realized += yhat != ds.label(r, j);
            expected += labelwise_risk(p);
        }
    }
    const double norm = static_cast<double>(ds.n * ds.m);
    CHECK(std::abs(realized / norm - expected / norm) <= 0.01);
}

TEST_CASE("k-fold plans") {
    auto plan = kfold(10, 10, 1);
    CHECK(plan.size() == 10);
    for (const auto& f : plan.folds) CHECK(f.size() == 1);

    plan = kfold(11, 10, 1);
    std::size_t ones = 0, twos = 0;
    std::set<std::size_t> all;
    for (const auto& f : plan.folds) {
        ones += f.size() == 1;
        twos += f.size() == 2;
        all.insert(f.begin(), f.end());
    }
    CHECK(ones == 9);
    CHECK(twos == 1);
    CHECK(all.size() == 11);

    CHECK(kfold(100, 7, 3).folds == kfold(100, 7, 3).folds);
    CHECK(plan.train_indices(0).size() + plan.folds[0].size() == 11);
    CHECK_THROWS_AS(kfold(5, 1, 0), InputError);
    CHECK_THROWS_AS(kfold(5, 6, 0), InputError);
}

TEST_CASE("subset keeps rows in order") {
    const Dataset ds = synth(2, 10, 3, 4);
    const Dataset sub = ds.subset({7, 2});
    CHECK(sub.n == 2);
    CHECK(sub.feature_row(0) == ds.feature_row(7));
    CHECK(sub.label_row(1) == ds.label_row(2));
    CHECK(sub.marginal_row(0) == ds.marginal_row(7));
}
