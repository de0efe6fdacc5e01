#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "mlabstain/br_trainer.hpp"
#include "mlabstain/data.hpp"
#include "mlabstain/errors.hpp"
#include "mlabstain/fmeasure.hpp"
#include "mlabstain/hamming.hpp"
#include "mlabstain/rank.hpp"
#include "mlabstain/svg_plot.hpp"
#include "mlabstain/sweep.hpp"
#include "mlabstain/verify.hpp"

namespace fs = std::filesystem;
using namespace mlabstain;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

struct TrainArgs {
    std::string input;
    std::string out;
    TrainConfig config;
};

struct PredictArgs {
    std::string model;
    std::string marginals;
    std::string input;
    std::string loss = "hamming";
    std::string penalty = "sep";
    double cost = 0.0;
    std::string out;
};

struct SweepArgs {
    std::string input;
    std::string loss = "hamming";
    std::string penalty = "sep";
    std::string grid = "0.05:0.5:0.05";
    std::size_t folds = 10;
    std::uint64_t seed = 0;
    bool true_marginals = false;
    std::size_t jobs = 1;
    std::string out;
    std::string plot;
    TrainConfig train;
};

struct SynthArgs {
    std::size_t m = 0;
    std::size_t n = 0;
    std::size_t d = 0;
    std::uint64_t seed = 0;
    std::string out;
    std::string marginals_out;
};

std::string format_value(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

// Writes to `path`, or to stdout when it is empty.
void emit(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << text;
}

int cmd_train(const TrainArgs& a) {
    a.config.validate();
    const Dataset ds = load_csv(a.input);
    const TrainResult result = train(ds, a.config);
    result.model.save(a.out);
    std::cout << "trained " << ds.m << " label model(s) on n=" << ds.n << ", d=" << ds.d << "\n";
    for (std::size_t j = 0; j < result.labels.size(); ++j) {
        const auto& s = result.labels[j];
        std::cout << "  label " << j << ": iterations=" << s.iterations << " grad_norm=" << format_value(s.grad_norm)
                  << " objective=" << format_value(s.objective) << (s.converged ? " converged" : " not-converged")
                  << "\n";
    }
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
    return kExitOk;
}

std::string predict_line(LossKind loss, const MarginalVector& p, const Penalty& f) {
    switch (loss) {
        case LossKind::Hamming: {
            const auto r = minimize_hamming(p, f);
            return r.prediction.to_string() + "\t" + format_value(r.expected_loss);
        }
        case LossKind::Rank: {
            const auto r = minimize_rank(p, f);
            return r.ranking.to_string() + "\t" + format_value(r.expected_loss);
        }
        case LossKind::FMeasure: {
            const auto r = maximize_f_abstain(p, f);
            return r.prediction.to_string() + "\t" + format_value(r.expected_value);
        }
    }
    return {};
}

int cmd_predict(const PredictArgs& a) {
    const LossKind loss = parse_loss_kind(a.loss);
    const PenaltyKind kind = parse_penalty_kind(a.penalty);
    if (kind == PenaltyKind::Table) throw InputError("--penalty must be sep or par");

    std::vector<MarginalVector> rows;
    if (!a.marginals.empty()) {
        for (auto& r : load_marginals_csv(a.marginals)) rows.emplace_back(std::move(r));
    } else {
        if (a.input.empty()) throw InputError("--model needs --input with feature rows");
        const BRModel model = BRModel::load(a.model);
        const Dataset ds = load_csv(a.input, false);
        for (std::size_t r = 0; r < ds.n; ++r) rows.push_back(model.predict(ds.feature_row(r)));
    }

    std::string text;
    for (const auto& p : rows) {
        const Penalty f = Penalty::make(kind, a.cost, p.size());
        text += predict_line(loss, p, f) + "\n";
    }
    emit(a.out, text);
    return kExitOk;
}

int cmd_sweep(const SweepArgs& a) {
    SweepConfig cfg;
    cfg.loss = parse_loss_kind(a.loss);
    cfg.penalty = parse_penalty_kind(a.penalty);
    cfg.grid = CostGrid::parse(a.grid);
    cfg.folds = a.folds;
    cfg.seed = a.seed;
    cfg.use_true_marginals = a.true_marginals;
    cfg.jobs = a.jobs;
    cfg.train = a.train;

    Dataset ds = load_csv(a.input);
    if (a.true_marginals) {
        const fs::path companion = fs::path(a.input).replace_extension().string() + "_marginals.csv";
        const auto rows = load_marginals_csv(companion);
        if (rows.size() != ds.n || rows.front().size() != ds.m)
            throw ValidationError("'" + companion.string() + "' does not match the dataset shape");
        for (const auto& r : rows) ds.true_marginals.insert(ds.true_marginals.end(), r.begin(), r.end());
    }

    const auto rows = run_sweep(ds, cfg);
    emit(a.out, sweep_csv(rows));
    if (!a.plot.empty()) write_sweep_svg(rows, a.plot);
    return kExitOk;
}

int cmd_oracle_check(const OracleCheckConfig& cfg) {
    const OracleCheckResult r = run_oracle_check(cfg);
    if (!r.passed) {
        std::cerr << "FAIL " << r.failure << "\n";
        return kExitCheckFailed;
    }
    std::cout << "ok: " << r.trials_run << " trials, loss=" << to_string(cfg.loss) << ", m=" << cfg.m
              << ", max |minimizer - oracle| = " << format_value(r.max_abs_diff) << "\n";
    return kExitOk;
}

int cmd_synth(const SynthArgs& a) {
    const Dataset ds = synth(a.m, a.n, a.d, a.seed);
    write_csv(ds, a.out);
    const std::string companion =
        a.marginals_out.empty() ? fs::path(a.out).replace_extension().string() + "_marginals.csv" : a.marginals_out;
    write_marginals_csv(ds.true_marginals, ds.m, companion);
    std::cout << "wrote " << a.out << " and " << companion << "\n";
    return kExitOk;
}

void add_train_flags(CLI::App* cmd, TrainConfig& cfg) {
    cmd->add_option("--reg", cfg.c_reg, "inverse L2 strength c_reg (> 0)")->capture_default_str();
    cmd->add_option("--max-iter", cfg.max_iter, "gradient descent iterations per label")->capture_default_str();
    cmd->add_option("--tol", cfg.tol, "gradient norm tolerance")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-label prediction with partial abstention"};
    app.require_subcommand(1);

    TrainArgs train_args;
    auto* train_cmd = app.add_subcommand("train", "fit binary relevance logistic models");
    train_cmd->add_option("--input", train_args.input, "training CSV")->required();
    train_cmd->add_option("--out", train_args.out, "model file")->required();
    add_train_flags(train_cmd, train_args.config);
    train_cmd->add_option("--seed", train_args.config.seed)->capture_default_str();

    PredictArgs predict_args;
    auto* predict_cmd = app.add_subcommand("predict", "risk-minimizing partial predictions per instance");
    auto* model_opt = predict_cmd->add_option("--model", predict_args.model, "model file from train");
    auto* marg_opt = predict_cmd->add_option("--marginals", predict_args.marginals, "CSV with columns p0..");
    model_opt->excludes(marg_opt);
    predict_cmd->add_option("--input", predict_args.input, "feature CSV (with --model)");
    predict_cmd->add_option("--loss", predict_args.loss, "hamming, rank or f1")->capture_default_str();
    predict_cmd->add_option("--penalty", predict_args.penalty, "sep or par")->capture_default_str();
    predict_cmd->add_option("--cost", predict_args.cost, "abstention cost c")->required();
    predict_cmd->add_option("--out", predict_args.out, "output file (default stdout)");

    SweepArgs sweep_args;
    auto* sweep_cmd = app.add_subcommand("sweep", "cross-validated cost sweep");
    sweep_cmd->add_option("--input", sweep_args.input, "dataset CSV")->required();
    sweep_cmd->add_option("--loss", sweep_args.loss, "hamming, rank or f1")->capture_default_str();
    sweep_cmd->add_option("--penalty", sweep_args.penalty, "sep or par")->capture_default_str();
    sweep_cmd->add_option("--grid", sweep_args.grid, "start:stop:step")->capture_default_str();
    sweep_cmd->add_option("--folds", sweep_args.folds)->capture_default_str();
    sweep_cmd->add_option("--seed", sweep_args.seed)->capture_default_str();
    sweep_cmd->add_option("--jobs", sweep_args.jobs, "worker threads over folds")->capture_default_str();
    sweep_cmd->add_flag("--true-marginals", sweep_args.true_marginals,
                        "use <input>_marginals.csv instead of trained models");
    sweep_cmd->add_option("--out", sweep_args.out, "results CSV (default stdout)");
    sweep_cmd->add_option("--plot", sweep_args.plot, "SVG output");
    add_train_flags(sweep_cmd, sweep_args.train);

    OracleCheckConfig oracle_cfg;
    std::string oracle_loss = "hamming";
    auto* oracle_cmd = app.add_subcommand("oracle-check", "compare minimizers with brute force");
    oracle_cmd->add_option("--loss", oracle_loss, "hamming, rank or f1")->capture_default_str();
    oracle_cmd->add_option("--m", oracle_cfg.m)->capture_default_str();
    oracle_cmd->add_option("--trials", oracle_cfg.trials)->capture_default_str();
    oracle_cmd->add_option("--seed", oracle_cfg.seed)->capture_default_str();
    oracle_cmd->add_option("--tol", oracle_cfg.tol)->capture_default_str();

    SynthArgs synth_args;
    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic dataset");
    synth_cmd->add_option("--m", synth_args.m, "labels")->required();
    synth_cmd->add_option("--n", synth_args.n, "instances")->required();
    synth_cmd->add_option("--d", synth_args.d, "features")->required();
    synth_cmd->add_option("--seed", synth_args.seed)->capture_default_str();
    synth_cmd->add_option("--out", synth_args.out, "dataset CSV")->required();
    synth_cmd->add_option("--marginals-out", synth_args.marginals_out,
                          "true marginals CSV (default <out>_marginals.csv)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*train_cmd) return cmd_train(train_args);
        if (*predict_cmd) {
            if (predict_args.model.empty() && predict_args.marginals.empty())
                throw InputError("predict needs --model or --marginals");
            return cmd_predict(predict_args);
        }
        if (*sweep_cmd) return cmd_sweep(sweep_args);
        if (*oracle_cmd) {
            oracle_cfg.loss = parse_loss_kind(oracle_loss);
            return cmd_oracle_check(oracle_cfg);
        }
        if (*synth_cmd) return cmd_synth(synth_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
