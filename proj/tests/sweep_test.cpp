#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mlabstain/svg_plot.hpp"
#include "mlabstain/sweep.hpp"

using namespace mlabstain;

TEST_CASE("cost grid") {
    const auto g = CostGrid::parse("0.05:0.5:0.05");
    const auto v = g.values();
    CHECK(v.size() == 10);
    CHECK(v.front() == 0.05);
    CHECK(v.back() == 0.5);
    CHECK(CostGrid::parse("0.2:2:0.2").values().size() == 10);
    CHECK(CostGrid::parse("1:1:1").values() == std::vector<double>{1.0});
    CHECK_THROWS_AS(CostGrid::parse("0.1:0.5"), InputError);
    CHECK_THROWS_AS(CostGrid::parse("0.1:0.5:0"), InputError);
    CHECK_THROWS_AS(CostGrid::parse("0.5:0.1:0.1"), InputError);
    CHECK_THROWS_AS(CostGrid::parse("a:1:0.1"), InputError);
}

TEST_CASE("calibrated sweep: partial abstention never loses in expectation") {
    const Dataset ds = synth(5, 10000, 4, 77);
    for (LossKind loss : {LossKind::Hamming, LossKind::Rank}) {
        for (PenaltyKind pen : {PenaltyKind::Sep, PenaltyKind::Par}) {
            SweepConfig cfg;
            cfg.loss = loss;
            cfg.penalty = pen;
            cfg.grid = loss == LossKind::Hamming ? CostGrid{0.05, 0.5, 0.05} : CostGrid{0.1, 1.0, 0.1};
            cfg.folds = 2;
            cfg.use_true_marginals = true;
            const auto rows = run_sweep(ds, cfg);
            const auto part = aggregate_series(rows, Series::Partial);
            const auto mlc = aggregate_series(rows, Series::Mlc);
            const auto abs = aggregate_series(rows, Series::Abs);
            REQUIRE(part.size() == cfg.grid.values().size());
            for (std::size_t i = 0; i < part.size(); ++i) {
                CHECK(part[i].expected <= std::min(mlc[i].expected, abs[i].expected) + 1e-9);
                CHECK(part[i].abstention_pct >= 0.0);
                CHECK(part[i].abstention_pct <= 100.0);
                CHECK(mlc[i].abstention_pct == 0.0);
                CHECK(abs[i].abstention_pct == 100.0);
            }
        }
    }
}

TEST_CASE("F sweeps report values where higher is better") {
    const Dataset ds = synth(4, 2000, 3, 5);
    SweepConfig cfg;
    cfg.loss = LossKind::FMeasure;
    cfg.grid = {0.02, 0.2, 0.06};
    cfg.folds = 2;
    cfg.use_true_marginals = true;
    const auto rows = run_sweep(ds, cfg);
    const auto part = aggregate_series(rows, Series::Partial);
    const auto mlc = aggregate_series(rows, Series::Mlc);
    const auto abs = aggregate_series(rows, Series::Abs);
    for (std::size_t i = 0; i < part.size(); ++i)
        CHECK(part[i].expected >= std::max(mlc[i].expected, abs[i].expected) - 1e-9);
}

TEST_CASE("SEP hamming sweeps converge to full prediction at c = 0.5") {
    const Dataset ds = synth(6, 1000, 5, 9);
    SweepConfig cfg;
    cfg.folds = 5;
    const auto rows = run_sweep(ds, cfg);
    const auto part = aggregate_series(rows, Series::Partial);
    const auto mlc = aggregate_series(rows, Series::Mlc);
    CHECK(part.back().c == 0.5);
    CHECK(part.back().abstention_pct == 0.0);
    CHECK(part.back().gen_loss == mlc.back().gen_loss);
    for (std::size_t i = 1; i < part.size(); ++i) CHECK(part[i].abstention_pct <= part[i - 1].abstention_pct);
}

TEST_CASE("PAR hamming sweeps converge to full prediction at c = 1") {
    const Dataset ds = synth(6, 1000, 5, 10);
    SweepConfig cfg;
    cfg.penalty = PenaltyKind::Par;
    cfg.grid = {0.1, 1.0, 0.1};
    cfg.folds = 5;
    const auto rows = run_sweep(ds, cfg);
    const auto part = aggregate_series(rows, Series::Partial);
    const auto mlc = aggregate_series(rows, Series::Mlc);
    CHECK(part.back().abstention_pct == 0.0);
    CHECK(part.back().gen_loss == mlc.back().gen_loss);
}

TEST_CASE("sweeps are deterministic and independent of the worker count") {
    const Dataset ds = synth(4, 400, 3, 12);
    SweepConfig cfg;
    cfg.folds = 4;
    cfg.seed = 5;
    const std::string one = sweep_csv(run_sweep(ds, cfg));
    cfg.jobs = 3;
    CHECK(sweep_csv(run_sweep(ds, cfg)) == one);
}

TEST_CASE("sweep csv layout") {
    const Dataset ds = synth(3, 60, 2, 1);
    SweepConfig cfg;
    cfg.folds = 3;
    cfg.grid = {0.1, 0.2, 0.1};
    const auto rows = run_sweep(ds, cfg);
    CHECK(rows.size() == 2 * 3 * 4);
    const std::string csv = sweep_csv(rows);
    CHECK(csv.rfind("loss,penalty,series,c,fold,gen_loss,partial_loss,abstention_pct,expected\n", 0) == 0);
    CHECK(csv.find("hamming,SEP,PARTIAL,0.1,1,") != std::string::npos);
    CHECK(csv.find("hamming,SEP,ABS,0.2,all,") != std::string::npos);
}

TEST_CASE("sweep rejects bad configurations") {
    const Dataset ds = synth(3, 60, 2, 1);
    SweepConfig cfg;
    cfg.folds = 100;
    CHECK_THROWS_AS(run_sweep(ds, cfg), InputError);
    cfg = {};
    cfg.penalty = PenaltyKind::Table;
    CHECK_THROWS_AS(run_sweep(ds, cfg), InputError);
    Dataset plain = ds;
    plain.true_marginals.clear();
    cfg = {};
    cfg.use_true_marginals = true;
    CHECK_THROWS_AS(run_sweep(plain, cfg), InputError);
}

TEST_CASE("svg output") {
    const Dataset ds = synth(3, 200, 2, 1);
    SweepConfig cfg;
    cfg.folds = 2;
    const std::string svg = render_sweep_svg(run_sweep(ds, cfg));
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("version=\"1.1\"") != std::string::npos);
    CHECK(std::count(svg.begin(), svg.end(), '\n') > 10);
    std::size_t polylines = 0;
    for (std::size_t pos = svg.find("<polyline"); pos != std::string::npos; pos = svg.find("<polyline", pos + 1))
        ++polylines;
    CHECK(polylines == 6);
    CHECK_THROWS_AS(render_sweep_svg({}), InputError);
}
