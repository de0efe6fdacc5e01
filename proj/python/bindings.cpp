#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mlabstain/br_trainer.hpp"
#include "mlabstain/data.hpp"
#include "mlabstain/fmeasure.hpp"
#include "mlabstain/hamming.hpp"
#include "mlabstain/oracle.hpp"
#include "mlabstain/rank.hpp"

namespace py = pybind11;
using namespace mlabstain;

namespace {

MarginalVector marginals(const std::vector<double>& p) { return MarginalVector(p); }

Penalty make_penalty(const std::string& kind, double cost, std::size_t m) {
    return Penalty::make(parse_penalty_kind(kind), cost, m);
}

py::dict labeling_result(const PartialLabeling& pred, double value) {
    py::dict d;
    d["prediction"] = pred.to_string();
    d["value"] = value;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Risk minimizers for multi-label prediction with partial abstention";

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<CapacityError>(m, "CapacityError", PyExc_ValueError);

    py::class_<Penalty>(m, "Penalty")
        .def_static("sep", &Penalty::sep, py::arg("cost"), py::arg("m"))
        .def_static("par", &Penalty::par, py::arg("cost"), py::arg("m"))
        .def_static("table", &Penalty::table, py::arg("values"))
        .def("__call__", &Penalty::operator(), py::arg("abstentions"))
        .def_property_readonly("label_count", &Penalty::label_count)
        .def_property_readonly("cost", &Penalty::cost);

    m.def(
        "minimize_hamming",
        [](const std::vector<double>& p, const Penalty& f) {
            const auto r = minimize_hamming(marginals(p), f);
            py::dict d = labeling_result(r.prediction, r.expected_loss);
            d["chosen_d"] = r.chosen_d;
            return d;
        },
        py::arg("p"), py::arg("penalty"));

    m.def(
        "minimize_rank",
        [](const std::vector<double>& p, const Penalty& f) {
            const auto r = minimize_rank(marginals(p), f);
            py::dict d;
            std::vector<std::size_t> order(r.ranking.order().begin(), r.ranking.order().end());
            d["ranking"] = order;
            d["value"] = r.expected_loss;
            py::list curve;
            for (const auto& pt : r.per_d_curve) {
                py::dict row;
                row["d"] = pt.d;
                row["expected_rank_loss"] = pt.expected_rank_loss;
                row["total"] = pt.total;
                curve.append(row);
            }
            d["curve"] = curve;
            return d;
        },
        py::arg("p"), py::arg("penalty"));

    m.def(
        "maximize_f_abstain",
        [](const std::vector<double>& p, const Penalty& f, bool strict) {
            const auto r = maximize_f_abstain(marginals(p), f, {strict, false});
            py::dict d = labeling_result(r.prediction, r.expected_value);
            d["k"] = r.k_star;
            d["l"] = r.l_star;
            return d;
        },
        py::arg("p"), py::arg("penalty"), py::arg("strict") = false);

    m.def(
        "maximize_f_full",
        [](const std::vector<double>& p) {
            const auto r = maximize_f_full(marginals(p));
            py::dict d = labeling_result(r.prediction, r.expected_value);
            d["k"] = r.k_star;
            return d;
        },
        py::arg("p"));

    m.def(
        "expected_f_full", [](const std::vector<double>& p, std::size_t k) { return expected_f_full(marginals(p), k); },
        py::arg("p"), py::arg("k"));

    m.def(
        "brute_minimize_hamming",
        [](const std::vector<double>& p, const Penalty& f) {
            const auto r = brute_minimize_hamming(marginals(p), f);
            return labeling_result(r.prediction, r.value);
        },
        py::arg("p"), py::arg("penalty"));

    m.def(
        "brute_minimize_rank",
        [](const std::vector<double>& p, const Penalty& f) {
            const auto r = brute_minimize_rank(marginals(p), f);
            py::dict d;
            d["ranking"] = std::vector<std::size_t>(r.ranking.order().begin(), r.ranking.order().end());
            d["value"] = r.value;
            return d;
        },
        py::arg("p"), py::arg("penalty"));

    m.def(
        "brute_maximize_f",
        [](const std::vector<double>& p, const Penalty& f) {
            const auto r = brute_maximize_f(marginals(p), f);
            return labeling_result(r.prediction, r.value);
        },
        py::arg("p"), py::arg("penalty"));

    m.def(
        "synth",
        [](std::size_t labels, std::size_t n, std::size_t d, std::uint64_t seed) {
            const Dataset ds = synth(labels, n, d, seed);
            py::dict out;
            out["n"] = ds.n;
            out["d"] = ds.d;
            out["m"] = ds.m;
            out["features"] = ds.features;
            out["labels"] = std::vector<int>(ds.labels.begin(), ds.labels.end());
            out["true_marginals"] = ds.true_marginals;
            return out;
        },
        py::arg("m"), py::arg("n"), py::arg("d"), py::arg("seed") = 0);

    m.def(
        "kfold", [](std::size_t n, std::size_t k, std::uint64_t seed) { return kfold(n, k, seed).folds; },
        py::arg("n"), py::arg("k"), py::arg("seed") = 0);

    py::class_<BRModel>(m, "BRModel")
        .def_property_readonly("feature_dim", &BRModel::feature_dim)
        .def_property_readonly("label_count", &BRModel::label_count)
        .def("predict", [](const BRModel& model, const std::vector<double>& x) {
            const auto p = model.predict(x);
            return std::vector<double>(p.begin(), p.end());
        })
        .def("save", [](const BRModel& model, const std::string& path) { model.save(path); })
        .def_static("load", [](const std::string& path) { return BRModel::load(path); });

    m.def(
        "train",
        [](const std::vector<std::vector<double>>& x, const std::vector<std::vector<int>>& y, double c_reg,
           std::size_t max_iter, double tol) {
            if (x.size() != y.size() || x.empty()) throw InputError("x and y need the same nonzero row count");
            Dataset ds;
            ds.n = x.size();
            ds.d = x.front().size();
            ds.m = y.front().size();
            for (std::size_t r = 0; r < ds.n; ++r) {
                if (x[r].size() != ds.d || y[r].size() != ds.m) throw InputError("ragged input rows");
                ds.features.insert(ds.features.end(), x[r].begin(), x[r].end());
                for (int v : y[r]) {
                    if (v != 0 && v != 1) throw InputError("labels must be 0 or 1");
                    ds.labels.push_back(static_cast<std::uint8_t>(v));
                }
            }
            TrainConfig cfg;
            cfg.c_reg = c_reg;
            cfg.max_iter = max_iter;
            cfg.tol = tol;
            return train(ds, cfg).model;
        },
        py::arg("x"), py::arg("y"), py::arg("c_reg") = 1.0, py::arg("max_iter") = 1000, py::arg("tol") = 1e-6);
}
