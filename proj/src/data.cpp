#include "mlabstain/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>

#include "mlabstain/errors.hpp"
#include "mlabstain/random.hpp"

namespace mlabstain {

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t end = line.find(',', start);
        if (end == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, end - start));
        start = end + 1;
    }
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

bool parse_double(std::string_view tok, double& out) {
    tok = trim(tok);
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    return res.ec == std::errc() && res.ptr == tok.data() + tok.size() && !tok.empty();
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path.string() + "'");
    return out;
}

std::string where(const std::filesystem::path& path, std::size_t line) {
    return path.string() + ":" + std::to_string(line) + ": ";
}

bool prefixed_index(std::string_view name, char prefix, std::size_t expected) {
    if (name.size() < 2 || name.front() != prefix) return false;
    std::size_t idx = 0;
    const auto res = std::from_chars(name.data() + 1, name.data() + name.size(), idx);
    return res.ec == std::errc() && res.ptr == name.data() + name.size() && idx == expected;
}

double sigmoid(double z) {
    return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

}  // namespace

std::vector<double> Dataset::feature_row(std::size_t row) const {
    return {features.begin() + static_cast<std::ptrdiff_t>(row * d),
            features.begin() + static_cast<std::ptrdiff_t>((row + 1) * d)};
}

std::vector<std::uint8_t> Dataset::label_row(std::size_t row) const {
    return {labels.begin() + static_cast<std::ptrdiff_t>(row * m),
            labels.begin() + static_cast<std::ptrdiff_t>((row + 1) * m)};
}

std::vector<double> Dataset::marginal_row(std::size_t row) const {
    if (!has_true_marginals()) throw InputError("dataset carries no true marginals");
    return {true_marginals.begin() + static_cast<std::ptrdiff_t>(row * m),
            true_marginals.begin() + static_cast<std::ptrdiff_t>((row + 1) * m)};
}

Dataset Dataset::subset(const std::vector<std::size_t>& rows) const {
    Dataset out;
    out.n = rows.size();
    out.d = d;
    out.m = m;
    out.feature_names = feature_names;
    out.label_names = label_names;
    out.features.reserve(out.n * d);
    out.labels.reserve(out.n * m);
    if (has_true_marginals()) out.true_marginals.reserve(out.n * m);
    for (std::size_t r : rows) {
        if (r >= n) throw InputError("subset row " + std::to_string(r) + " out of range");
        out.features.insert(out.features.end(), features.begin() + static_cast<std::ptrdiff_t>(r * d),
                            features.begin() + static_cast<std::ptrdiff_t>((r + 1) * d));
        out.labels.insert(out.labels.end(), labels.begin() + static_cast<std::ptrdiff_t>(r * m),
                          labels.begin() + static_cast<std::ptrdiff_t>((r + 1) * m));
        if (has_true_marginals())
            out.true_marginals.insert(out.true_marginals.end(),
                                      true_marginals.begin() + static_cast<std::ptrdiff_t>(r * m),
                                      true_marginals.begin() + static_cast<std::ptrdiff_t>((r + 1) * m));
    }
    return out;
}

Dataset load_csv(const std::filesystem::path& path, bool require_labels) {
    auto in = open_input(path);
    std::string line;
    std::size_t lineno = 1;
    if (!std::getline(in, line) || trim(line).empty()) throw ParseError(where(path, 1) + "missing header");

    Dataset ds;
    const auto header = split_commas(trim(line));
    std::size_t col = 0;
    while (col < header.size() && prefixed_index(trim(header[col]), 'f', ds.d)) {
        ds.feature_names.emplace_back(trim(header[col]));
        ++ds.d;
        ++col;
    }
    while (col < header.size() && prefixed_index(trim(header[col]), 'l', ds.m)) {
        ds.label_names.emplace_back(trim(header[col]));
        ++ds.m;
        ++col;
    }
    if (col != header.size() || (require_labels && ds.m == 0))
        throw ParseError(where(path, 1) + "header must be f0..f{d-1},l0..l{m-1}");

    const std::size_t width = ds.d + ds.m;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view row = trim(line);
        if (row.empty()) continue;
        const auto cells = split_commas(row);
        if (cells.size() != width)
            throw ParseError(where(path, lineno) + "expected " + std::to_string(width) + " fields, got " +
                             std::to_string(cells.size()));
        for (std::size_t j = 0; j < ds.d; ++j) {
            double v = 0.0;
            if (!parse_double(cells[j], v) || !std::isfinite(v))
                throw ParseError(where(path, lineno) + "bad number in column " + ds.feature_names[j]);
            ds.features.push_back(v);
        }
        for (std::size_t j = 0; j < ds.m; ++j) {
            const std::string_view cell = trim(cells[ds.d + j]);
            if (cell == "0" || cell == "1") {
                ds.labels.push_back(static_cast<std::uint8_t>(cell[0] - '0'));
                continue;
            }
            throw ValidationError(where(path, lineno) + "label in row " + std::to_string(ds.n + 1) +
                                  ", column " + ds.label_names[j] + " is '" + std::string(cell) +
                                  "', expected 0 or 1");
        }
        ++ds.n;
    }
    if (ds.n == 0) throw ParseError(where(path, lineno) + "no data rows");
    return ds;
}

void write_csv(const Dataset& ds, const std::filesystem::path& path) {
    auto out = open_output(path);
    std::string buf;
    for (std::size_t j = 0; j < ds.d; ++j) buf += "f" + std::to_string(j) + ",";
    for (std::size_t j = 0; j < ds.m; ++j) buf += "l" + std::to_string(j) + (j + 1 < ds.m ? "," : "\n");
    for (std::size_t r = 0; r < ds.n; ++r) {
        for (std::size_t j = 0; j < ds.d; ++j) buf += format_double(ds.feature(r, j)) + ",";
        for (std::size_t j = 0; j < ds.m; ++j) {
            buf.push_back(static_cast<char>('0' + ds.label(r, j)));
            buf.push_back(j + 1 < ds.m ? ',' : '\n');
        }
    }
    out << buf;
}

std::vector<std::vector<double>> load_marginals_csv(const std::filesystem::path& path) {
    auto in = open_input(path);
    std::string line;
    std::size_t lineno = 1;
    if (!std::getline(in, line) || trim(line).empty()) throw ParseError(where(path, 1) + "missing header");
    const auto header = split_commas(trim(line));
    for (std::size_t j = 0; j < header.size(); ++j)
        if (!prefixed_index(trim(header[j]), 'p', j))
            throw ParseError(where(path, 1) + "header must be p0..p{m-1}");
    const std::size_t m = header.size();

    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view row = trim(line);
        if (row.empty()) continue;
        const auto cells = split_commas(row);
        if (cells.size() != m)
            throw ParseError(where(path, lineno) + "expected " + std::to_string(m) + " fields, got " +
                             std::to_string(cells.size()));
        std::vector<double> values(m);
        for (std::size_t j = 0; j < m; ++j) {
            if (!parse_double(cells[j], values[j]))
                throw ParseError(where(path, lineno) + "bad number in column p" + std::to_string(j));
            if (!(values[j] >= 0.0 && values[j] <= 1.0))
                throw ValidationError(where(path, lineno) + "probability in column p" + std::to_string(j) +
                                      " is outside [0,1]");
        }
        rows.push_back(std::move(values));
    }
    if (rows.empty()) throw ParseError(where(path, lineno) + "no data rows");
    return rows;
}

void write_marginals_csv(const std::vector<double>& rows_flat, std::size_t m,
                         const std::filesystem::path& path) {
    if (m == 0 || rows_flat.size() % m != 0) throw InputError("marginal matrix is not n x m");
    auto out = open_output(path);
    std::string buf;
    for (std::size_t j = 0; j < m; ++j) buf += "p" + std::to_string(j) + (j + 1 < m ? "," : "\n");
    for (std::size_t i = 0; i < rows_flat.size(); ++i) {
        buf += format_double(rows_flat[i]);
        buf.push_back((i + 1) % m == 0 ? '\n' : ',');
    }
    out << buf;
}

Dataset synth(std::size_t m, std::size_t n, std::size_t d, std::uint64_t seed) {
    if (m == 0 || n == 0 || d == 0) throw InputError("synth needs positive m, n and d");
    Rng rng(seed);
    const double w_scale = 2.0 / std::sqrt(static_cast<double>(d));
    std::vector<double> w(m * d);
    std::vector<double> b(m);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = 0; k < d; ++k) w[j * d + k] = w_scale * rng.normal();
        b[j] = 0.5 * rng.normal();
    }

    Dataset ds;
    ds.n = n;
    ds.d = d;
    ds.m = m;
    for (std::size_t k = 0; k < d; ++k) ds.feature_names.push_back("f" + std::to_string(k));
    for (std::size_t j = 0; j < m; ++j) ds.label_names.push_back("l" + std::to_string(j));
    ds.features.resize(n * d);
    ds.labels.resize(n * m);
    ds.true_marginals.resize(n * m);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t k = 0; k < d; ++k) ds.features[r * d + k] = rng.normal();
        for (std::size_t j = 0; j < m; ++j) {
            double z = b[j];
            for (std::size_t k = 0; k < d; ++k) z += w[j * d + k] * ds.features[r * d + k];
            const double p = sigmoid(z);
            ds.true_marginals[r * m + j] = p;
            ds.labels[r * m + j] = rng.uniform() < p ? 1 : 0;
        }
    }
    return ds;
}

std::vector<std::size_t> FoldPlan::train_indices(std::size_t i) const {
    if (i >= folds.size()) throw InputError("fold index out of range");
    std::vector<std::size_t> out;
    for (std::size_t f = 0; f < folds.size(); ++f)
        if (f != i) out.insert(out.end(), folds[f].begin(), folds[f].end());
    std::sort(out.begin(), out.end());
    return out;
}

FoldPlan kfold(std::size_t n, std::size_t k, std::uint64_t seed) {
    if (k < 2 || k > n)
        throw InputError("fold count must lie in [2, n]; got k=" + std::to_string(k) + ", n=" + std::to_string(n));
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    Rng rng(seed);
    rng.shuffle(idx);

    FoldPlan plan;
    plan.seed = seed;
    plan.folds.resize(k);
    const std::size_t base = n / k;
    const std::size_t extra = n % k;
    std::size_t pos = 0;
    // The last `extra` folds take one more index.
    for (std::size_t f = 0; f < k; ++f) {
        const std::size_t len = base + (f >= k - extra ? 1 : 0);
        plan.folds[f].assign(idx.begin() + static_cast<std::ptrdiff_t>(pos),
                             idx.begin() + static_cast<std::ptrdiff_t>(pos + len));
        pos += len;
    }
    return plan;
}

}  // namespace mlabstain
