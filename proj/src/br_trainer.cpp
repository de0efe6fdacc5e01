#include "mlabstain/br_trainer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <json.hpp>

namespace mlabstain {

namespace {

double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double sigmoid(double z) {
    return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

void TrainConfig::validate() const {
    if (!(c_reg > 0.0) || !std::isfinite(c_reg)) throw InputError("regularization c_reg must be > 0");
    if (!(tol > 0.0)) throw InputError("tolerance must be > 0");
    if (max_iter == 0) throw InputError("max_iter must be > 0");
}

LogisticObjective::LogisticObjective(std::span<const double> x, std::size_t d, std::span<const std::uint8_t> y,
                                     double c_reg)
    : x_(x), d_(d), n_(y.size()), y_(y), c_reg_(c_reg) {
    if (n_ == 0) throw InputError("logistic objective needs at least one row");
    if (x.size() != n_ * d) throw InputError("feature matrix is not n x d");
    if (!(c_reg > 0.0)) throw InputError("c_reg must be > 0");
}

double LogisticObjective::value(std::span<const double> theta) const {
    if (theta.size() != dim()) throw InputError("parameter length mismatch");
    const double b = theta[d_];
    double loss = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        double z = b;
        for (std::size_t k = 0; k < d_; ++k) z += theta[k] * x_[i * d_ + k];
        loss += softplus(z) - (y_[i] ? z : 0.0);
    }
    double reg = 0.0;
    for (std::size_t k = 0; k < d_; ++k) reg += theta[k] * theta[k];
    return (loss + reg / (2.0 * c_reg_)) / static_cast<double>(n_);
}

double LogisticObjective::value_and_gradient(std::span<const double> theta, std::span<double> grad) const {
    if (theta.size() != dim() || grad.size() != dim()) throw InputError("parameter length mismatch");
    std::fill(grad.begin(), grad.end(), 0.0);
    const double b = theta[d_];
    double loss = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        const double* row = x_.data() + i * d_;
        double z = b;
        for (std::size_t k = 0; k < d_; ++k) z += theta[k] * row[k];
        loss += softplus(z) - (y_[i] ? z : 0.0);
        const double r = sigmoid(z) - (y_[i] ? 1.0 : 0.0);
        for (std::size_t k = 0; k < d_; ++k) grad[k] += r * row[k];
        grad[d_] += r;
    }
    double reg = 0.0;
    for (std::size_t k = 0; k < d_; ++k) {
        reg += theta[k] * theta[k];
        grad[k] += theta[k] / c_reg_;
    }
    const double inv_n = 1.0 / static_cast<double>(n_);
    for (double& g : grad) g *= inv_n;
    return (loss + reg / (2.0 * c_reg_)) * inv_n;
}

FitResult fit_logistic(const LogisticObjective& objective, std::size_t max_iter, double tol) {
    constexpr double kArmijo = 1e-4;
    constexpr int kMaxBacktracks = 60;
    const std::size_t dim = objective.dim();

    FitResult out;
    out.theta.assign(dim, 0.0);
    std::vector<double> grad(dim), trial(dim), trial_grad(dim);
    double value = objective.value_and_gradient(out.theta, grad);
    out.objective_trace.push_back(value);
    double step = 1.0;

    for (std::size_t it = 0; it < max_iter; ++it) {
        const double gnorm = norm2(grad);
        out.grad_norm = gnorm;
        if (gnorm <= tol) {
            out.converged = true;
            break;
        }
        const double g2 = gnorm * gnorm;
        double alpha = step;
        double next = 0.0;
        int tries = 0;
        for (;; ++tries) {
            for (std::size_t k = 0; k < dim; ++k) trial[k] = out.theta[k] - alpha * grad[k];
            next = objective.value_and_gradient(trial, trial_grad);
            if (next <= value - kArmijo * alpha * g2) break;
            if (tries == kMaxBacktracks) break;
            alpha *= 0.5;
        }
        if (next > value) break;  // no descent possible at machine precision

        // Barzilai-Borwein step for the next iteration: s.s / s.r.
        double ss = 0.0;
        double sr = 0.0;
        for (std::size_t k = 0; k < dim; ++k) {
            const double s = trial[k] - out.theta[k];
            const double r = trial_grad[k] - grad[k];
            ss += s * s;
            sr += s * r;
        }
        step = sr > 0.0 ? ss / sr : alpha * 2.0;

        out.theta.swap(trial);
        grad.swap(trial_grad);
        value = next;
        out.objective_trace.push_back(value);
        out.iterations = it + 1;
    }
    out.grad_norm = norm2(grad);
    out.converged = out.converged || out.grad_norm <= tol;
    return out;
}

BRModel::BRModel(std::size_t d, std::size_t m, double c_reg, std::vector<double> mean, std::vector<double> scale,
                 std::vector<double> weights, std::vector<double> biases)
    : d_(d), m_(m), c_reg_(c_reg), mean_(std::move(mean)), scale_(std::move(scale)),
      weights_(std::move(weights)), biases_(std::move(biases)) {
    if (mean_.size() != d_ || scale_.size() != d_ || weights_.size() != d_ * m_ || biases_.size() != m_)
        throw ValidationError("model arrays do not match d = " + std::to_string(d_) +
                              ", m = " + std::to_string(m_));
    for (double s : scale_)
        if (!(s > 0.0)) throw ValidationError("model scale entries must be positive");
}

std::span<const double> BRModel::weights(std::size_t label) const {
    if (label >= m_) throw InputError("label index out of range");
    return std::span<const double>(weights_).subspan(label * d_, d_);
}

MarginalVector BRModel::predict(std::span<const double> features) const {
    if (features.size() != d_)
        throw InputError("feature dimension " + std::to_string(features.size()) + " does not match model dimension " +
                         std::to_string(d_));
    std::vector<double> z(d_);
    for (std::size_t k = 0; k < d_; ++k) z[k] = (features[k] - mean_[k]) / scale_[k];
    std::vector<double> p(m_);
    for (std::size_t j = 0; j < m_; ++j) {
        double s = biases_[j];
        for (std::size_t k = 0; k < d_; ++k) s += weights_[j * d_ + k] * z[k];
        p[j] = std::clamp(sigmoid(s), kProbabilityClamp, 1.0 - kProbabilityClamp);
    }
    return MarginalVector(std::move(p));
}

std::vector<double> BRModel::predict_all(const Dataset& ds) const {
    std::vector<double> out;
    out.reserve(ds.n * m_);
    for (std::size_t r = 0; r < ds.n; ++r) {
        const auto p = predict(std::span<const double>(ds.features).subspan(r * ds.d, ds.d));
        out.insert(out.end(), p.begin(), p.end());
    }
    return out;
}

void BRModel::save(const std::filesystem::path& path) const {
    nlohmann::json j;
    j["format"] = "mlabstain-br-model";
    j["version"] = kSchemaVersion;
    j["feature_dim"] = d_;
    j["label_count"] = m_;
    j["c_reg"] = c_reg_;
    j["mean"] = mean_;
    j["scale"] = scale_;
    j["weights"] = nlohmann::json::array();
    for (std::size_t l = 0; l < m_; ++l) {
        const auto w = weights(l);
        j["weights"].push_back(std::vector<double>(w.begin(), w.end()));
    }
    j["biases"] = biases_;
    std::ofstream out(path);
    if (!out) throw InputError("cannot write model '" + path.string() + "'");
    out << j.dump(1) << '\n';
}

BRModel BRModel::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open model '" + path.string() + "'");
    nlohmann::json j;
    try {
        in >> j;
        if (j.at("format").get<std::string>() != "mlabstain-br-model")
            throw ValidationError("'" + path.string() + "' is not a model file");
        const int version = j.at("version").get<int>();
        if (version != kSchemaVersion)
            throw ValidationError("unsupported model version " + std::to_string(version));
        const auto d = j.at("feature_dim").get<std::size_t>();
        const auto m = j.at("label_count").get<std::size_t>();
        std::vector<double> weights;
        const auto& rows = j.at("weights");
        if (!rows.is_array() || rows.size() != m) throw ValidationError("weights must hold one row per label");
        for (const auto& row : rows) {
            const auto w = row.get<std::vector<double>>();
            if (w.size() != d) throw ValidationError("weight row length differs from feature_dim");
            weights.insert(weights.end(), w.begin(), w.end());
        }
        return BRModel(d, m, j.at("c_reg").get<double>(), j.at("mean").get<std::vector<double>>(),
                       j.at("scale").get<std::vector<double>>(), std::move(weights),
                       j.at("biases").get<std::vector<double>>());
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("model '" + path.string() + "': " + e.what());
    }
}

TrainResult train(const Dataset& ds, const TrainConfig& config) {
    config.validate();
    if (ds.n == 0 || ds.m == 0) throw InputError("cannot train on an empty dataset");
    const std::size_t n = ds.n;
    const std::size_t d = ds.d;

    TrainResult result;
    std::vector<double> mean(d, 0.0), scale(d, 1.0);
    std::size_t constant_columns = 0;
    for (std::size_t k = 0; k < d; ++k) {
        double s = 0.0;
        for (std::size_t r = 0; r < n; ++r) s += ds.feature(r, k);
        mean[k] = s / static_cast<double>(n);
        double v = 0.0;
        for (std::size_t r = 0; r < n; ++r) v += (ds.feature(r, k) - mean[k]) * (ds.feature(r, k) - mean[k]);
        const double sd = std::sqrt(v / static_cast<double>(n));
        if (sd > 0.0) {
            scale[k] = sd;
        } else {
            ++constant_columns;
        }
    }
    if (d == 0 || constant_columns == d)
        result.warnings.push_back("every feature column is constant; labels get intercept-only models");
    else if (constant_columns > 0)
        result.warnings.push_back(std::to_string(constant_columns) + " constant feature column(s) ignored");

    std::vector<double> x(n * d);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t k = 0; k < d; ++k) x[r * d + k] = (ds.feature(r, k) - mean[k]) / scale[k];

    std::vector<double> weights(ds.m * d);
    std::vector<double> biases(ds.m);
    std::vector<std::uint8_t> y(n);
    for (std::size_t j = 0; j < ds.m; ++j) {
        for (std::size_t r = 0; r < n; ++r) y[r] = ds.label(r, j);
        const LogisticObjective objective(x, d, y, config.c_reg);
        const FitResult fit = fit_logistic(objective, config.max_iter, config.tol);
        std::copy(fit.theta.begin(), fit.theta.begin() + static_cast<std::ptrdiff_t>(d),
                  weights.begin() + static_cast<std::ptrdiff_t>(j * d));
        biases[j] = fit.theta[d];
        result.labels.push_back({fit.iterations, fit.grad_norm, fit.converged, fit.objective_trace.back()});
        if (!fit.converged)
            result.warnings.push_back("label " + std::to_string(j) + " stopped after " +
                                      std::to_string(fit.iterations) + " iterations with gradient norm " +
                                      std::to_string(fit.grad_norm));
    }
    result.model = BRModel(d, ds.m, config.c_reg, std::move(mean), std::move(scale), std::move(weights),
                           std::move(biases));
    return result;
}

MarginalVector predict_marginals(const BRModel& model, std::span<const double> features) {
    return model.predict(features);
}

}  // namespace mlabstain
