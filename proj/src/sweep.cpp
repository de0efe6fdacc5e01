#include "mlabstain/sweep.hpp"

#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include "mlabstain/fmeasure.hpp"
#include "mlabstain/hamming.hpp"
#include "mlabstain/rank.hpp"

namespace mlabstain {

CostGrid CostGrid::parse(std::string_view text) {
    CostGrid g;
    double* fields[3] = {&g.start, &g.stop, &g.step};
    std::size_t pos = 0;
    for (int i = 0; i < 3; ++i) {
        const std::size_t end = i < 2 ? text.find(':', pos) : text.size();
        if (end == std::string_view::npos) throw InputError("cost grid must look like start:stop:step");
        const std::string_view tok = text.substr(pos, end - pos);
        const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), *fields[i]);
        if (res.ec != std::errc() || res.ptr != tok.data() + tok.size() || tok.empty())
            throw InputError("bad number '" + std::string(tok) + "' in cost grid");
        pos = end + 1;
    }
    g.values();
    return g;
}

std::vector<double> CostGrid::values() const {
    if (!(step > 0.0)) throw InputError("cost grid step must be > 0");
    if (!(start >= 0.0) || !(stop >= start)) throw InputError("cost grid needs 0 <= start <= stop");
    std::vector<double> out;
    for (std::size_t i = 0;; ++i) {
        const double c = start + static_cast<double>(i) * step;
        if (c > stop + 1e-9 * step) break;
        out.push_back(std::round(c * 1e12) / 1e12);
    }
    return out;
}

std::string_view to_string(Series s) {
    switch (s) {
        case Series::Partial: return "PARTIAL";
        case Series::Mlc: return "MLC";
        case Series::Abs: return "ABS";
    }
    return "?";
}

namespace {

constexpr std::size_t kSeriesCount = 3;

// Unnormalized per-instance sums for one (cost, series, fold) cell.
struct Accumulator {
    double gen = 0.0;
    double partial = 0.0;
    double abstained = 0.0;
    double expected = 0.0;
    std::size_t count = 0;

    void add(double g, double p, std::size_t a, double e) {
        gen += g;
        partial += p;
        abstained += static_cast<double>(a);
        expected += e;
        ++count;
    }
    void merge(const Accumulator& o) {
        gen += o.gen;
        partial += o.partial;
        abstained += o.abstained;
        expected += o.expected;
        count += o.count;
    }
};

struct Outcome {
    double gen;
    double partial;
    std::size_t abstained;
    double expected;
};

PartialRanking full_ranking(const MarginalVector& p) { return PartialRanking(sort_descending(p), p.size()); }

// Evaluates one series on one test instance.
Outcome evaluate(LossKind loss, Series series, const MarginalVector& p, const GroundTruth& y, const Penalty& f) {
    const std::size_t m = p.size();
    const Penalty none = Penalty::sep(0.0, m);
    switch (loss) {
        case LossKind::Hamming: {
            PartialLabeling yhat;
            double expected = 0.0;
            if (series == Series::Partial) {
                auto r = minimize_hamming(p, f);
                yhat = std::move(r.prediction);
                expected = r.expected_loss;
            } else if (series == Series::Mlc) {
                auto r = minimize_hamming(p, Penalty::sep(1.0, m));
                yhat = std::move(r.prediction);
                expected = r.expected_loss;
            } else {
                yhat = PartialLabeling::abstain_all(m);
                expected = f(m);
            }
            return {generalized_hamming(y, yhat, f), generalized_hamming(y, yhat, none), yhat.abstention_count(),
                    expected};
        }
        case LossKind::Rank: {
            PartialRanking ranking;
            double expected = 0.0;
            if (series == Series::Partial) {
                auto r = minimize_rank(p, f);
                ranking = std::move(r.ranking);
                expected = r.expected_loss;
            } else if (series == Series::Mlc) {
                ranking = full_ranking(p);
                expected = expected_generalized_rank_loss(p, ranking, f);
            } else {
                ranking = PartialRanking({}, m);
                expected = f(m);
            }
            const double raw = rank_loss(y, ranking);
            return {raw + f(ranking.abstention_count()), raw, ranking.abstention_count(), expected};
        }
        case LossKind::FMeasure: {
            PartialLabeling yhat;
            double expected = 0.0;
            if (series == Series::Partial) {
                auto r = maximize_f_abstain(p, f);
                yhat = std::move(r.prediction);
                expected = r.expected_value;
            } else if (series == Series::Mlc) {
                auto r = maximize_f_full(p);
                yhat = std::move(r.prediction);
                expected = r.expected_value;
            } else {
                yhat = PartialLabeling::abstain_all(m);
                expected = 1.0 - f(m);
            }
            return {generalized_f_measure(y, yhat, f), generalized_f_measure(y, yhat, none), yhat.abstention_count(),
                    expected};
        }
    }
    return {};
}

double normalize(LossKind loss, double value, std::size_t m) {
    switch (loss) {
        case LossKind::Hamming: return value * 100.0 / static_cast<double>(m);
        case LossKind::Rank: return value / static_cast<double>(m);
        case LossKind::FMeasure: return value;
    }
    return value;
}

SweepRow make_row(const SweepConfig& cfg, Series s, double c, std::size_t fold, const Accumulator& acc,
                  std::size_t m) {
    const double n = static_cast<double>(acc.count);
    SweepRow row;
    row.loss = cfg.loss;
    row.penalty = cfg.penalty;
    row.series = s;
    row.c = c;
    row.fold = fold;
    row.gen_loss = normalize(cfg.loss, acc.gen / n, m);
    row.partial_loss = normalize(cfg.loss, acc.partial / n, m);
    row.abstention_pct = 100.0 * acc.abstained / (n * static_cast<double>(m));
    row.expected = normalize(cfg.loss, acc.expected / n, m);
    return row;
}

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 10);
    return std::string(buf, res.ptr);
}

}  // namespace

std::vector<SweepRow> run_sweep(const Dataset& ds, const SweepConfig& config) {
    if (config.penalty == PenaltyKind::Table) throw InputError("sweeps support SEP and PAR penalties only");
    if (config.use_true_marginals && !ds.has_true_marginals())
        throw InputError("dataset has no true marginals to sweep on");
    config.train.validate();
    const auto costs = config.grid.values();
    const FoldPlan plan = kfold(ds.n, config.folds, config.seed);
    const std::size_t m = ds.m;
    const std::size_t k = plan.size();

    // cells[fold][cost][series]
    std::vector<std::vector<std::array<Accumulator, kSeriesCount>>> cells(
        k, std::vector<std::array<Accumulator, kSeriesCount>>(costs.size()));

    auto run_fold = [&](std::size_t fold) {
        const auto& test_rows = plan.folds[fold];
        std::vector<double> marginals;
        if (config.use_true_marginals) {
            for (std::size_t r : test_rows) {
                const auto row = ds.marginal_row(r);
                marginals.insert(marginals.end(), row.begin(), row.end());
            }
        } else {
            const Dataset train_set = ds.subset(plan.train_indices(fold));
            const TrainResult trained = train(train_set, config.train);
            marginals = trained.model.predict_all(ds.subset(test_rows));
        }
        for (std::size_t t = 0; t < test_rows.size(); ++t) {
            const MarginalVector p(std::vector<double>(marginals.begin() + static_cast<std::ptrdiff_t>(t * m),
                                                       marginals.begin() + static_cast<std::ptrdiff_t>((t + 1) * m)));
            const GroundTruth y(ds.label_row(test_rows[t]));
            for (std::size_t ci = 0; ci < costs.size(); ++ci) {
                const Penalty f = Penalty::make(config.penalty, costs[ci], m);
                for (std::size_t s = 0; s < kSeriesCount; ++s) {
                    const Outcome o = evaluate(config.loss, static_cast<Series>(s), p, y, f);
                    cells[fold][ci][s].add(o.gen, o.partial, o.abstained, o.expected);
                }
            }
        }
    };

    const std::size_t workers = std::max<std::size_t>(1, std::min(config.jobs, k));
    if (workers == 1) {
        for (std::size_t fold = 0; fold < k; ++fold) run_fold(fold);
    } else {
        std::vector<std::thread> pool;
        std::mutex error_mutex;
        std::exception_ptr error;
        std::atomic<std::size_t> next{0};
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t fold = next++; fold < k; fold = next++) {
                    try {
                        run_fold(fold);
                    } catch (...) {
                        std::lock_guard lock(error_mutex);
                        if (!error) error = std::current_exception();
                    }
                }
            });
        }
        for (auto& t : pool) t.join();
        if (error) std::rethrow_exception(error);
    }

    std::vector<SweepRow> rows;
    rows.reserve(costs.size() * kSeriesCount * (k + 1));
    for (std::size_t ci = 0; ci < costs.size(); ++ci) {
        for (std::size_t s = 0; s < kSeriesCount; ++s) {
            Accumulator total;
            for (std::size_t fold = 0; fold < k; ++fold) {
                rows.push_back(make_row(config, static_cast<Series>(s), costs[ci], fold + 1, cells[fold][ci][s], m));
                total.merge(cells[fold][ci][s]);
            }
            rows.push_back(make_row(config, static_cast<Series>(s), costs[ci], 0, total, m));
        }
    }
    return rows;
}

std::vector<SweepRow> aggregate_series(const std::vector<SweepRow>& rows, Series series) {
    std::vector<SweepRow> out;
    for (const auto& r : rows)
        if (r.fold == 0 && r.series == series) out.push_back(r);
    return out;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "loss,penalty,series,c,fold,gen_loss,partial_loss,abstention_pct,expected\n";
    for (const auto& r : rows) {
        out += std::string(to_string(r.loss)) + "," + std::string(to_string(r.penalty)) + "," +
               std::string(to_string(r.series)) + "," + format_number(r.c) + "," +
               (r.fold == 0 ? std::string("all") : std::to_string(r.fold)) + "," + format_number(r.gen_loss) +
               "," + format_number(r.partial_loss) + "," + format_number(r.abstention_pct) + "," +
               format_number(r.expected) + "\n";
    }
    return out;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path.string() + "'");
    out << sweep_csv(rows);
}

}  // namespace mlabstain
