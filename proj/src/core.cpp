#include "mlabstain/core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace mlabstain {

MarginalVector::MarginalVector(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) throw InputError("marginal vector must have at least one label");
    for (std::size_t i = 0; i < probs_.size(); ++i) {
        const double p = probs_[i];
        if (!(p >= 0.0 && p <= 1.0)) {
            throw InputError("marginal probability at label " + std::to_string(i) +
                             " is outside [0,1]");
        }
    }
}

PartialLabeling::PartialLabeling(std::vector<Decision> entries) : entries_(std::move(entries)) {}

PartialLabeling PartialLabeling::abstain_all(std::size_t m) {
    return PartialLabeling(std::vector<Decision>(m, Decision::Abstain));
}

PartialLabeling PartialLabeling::parse(std::string_view text) {
    std::vector<Decision> entries;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find(',', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view tok = text.substr(start, end - start);
        while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.front()))) tok.remove_prefix(1);
        while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.back()))) tok.remove_suffix(1);
        if (tok == "0") {
            entries.push_back(Decision::Zero);
        } else if (tok == "1") {
            entries.push_back(Decision::One);
        } else if (tok == "?") {
            entries.push_back(Decision::Abstain);
        } else {
            throw InputError("invalid partial labeling symbol '" + std::string(tok) + "'");
        }
        start = end + 1;
    }
    return PartialLabeling(std::move(entries));
}

std::vector<std::size_t> PartialLabeling::decided_set() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < entries_.size(); ++i)
        if (entries_[i] != Decision::Abstain) out.push_back(i);
    return out;
}

std::vector<std::size_t> PartialLabeling::abstained_set() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < entries_.size(); ++i)
        if (entries_[i] == Decision::Abstain) out.push_back(i);
    return out;
}

std::size_t PartialLabeling::abstention_count() const noexcept {
    return static_cast<std::size_t>(std::count(entries_.begin(), entries_.end(), Decision::Abstain));
}

std::string PartialLabeling::to_string() const {
    std::string out;
    out.reserve(entries_.size() * 2);
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (i) out.push_back(',');
        switch (entries_[i]) {
            case Decision::Zero: out.push_back('0'); break;
            case Decision::One: out.push_back('1'); break;
            case Decision::Abstain: out.push_back('?'); break;
        }
    }
    return out;
}

PartialRanking::PartialRanking(std::vector<std::size_t> order, std::size_t label_count)
    : order_(std::move(order)), label_count_(label_count) {
    std::vector<bool> seen(label_count_, false);
    for (std::size_t idx : order_) {
        if (idx >= label_count_)
            throw InputError("ranking index " + std::to_string(idx) + " out of range");
        if (seen[idx]) throw InputError("duplicate label " + std::to_string(idx) + " in ranking");
        seen[idx] = true;
    }
}

bool PartialRanking::contains(std::size_t label) const {
    return std::find(order_.begin(), order_.end(), label) != order_.end();
}

std::string PartialRanking::to_string() const {
    if (order_.empty()) return "-";
    std::string out;
    for (std::size_t i = 0; i < order_.size(); ++i) {
        if (i) out.push_back('>');
        out += std::to_string(order_[i] + 1);
    }
    return out;
}

std::string_view to_string(PenaltyKind kind) {
    switch (kind) {
        case PenaltyKind::Sep: return "SEP";
        case PenaltyKind::Par: return "PAR";
        case PenaltyKind::Table: return "TABLE";
    }
    return "?";
}

PenaltyKind parse_penalty_kind(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "sep") return PenaltyKind::Sep;
    if (lower == "par") return PenaltyKind::Par;
    if (lower == "table") return PenaltyKind::Table;
    throw InputError("unknown penalty '" + std::string(name) + "' (expected sep or par)");
}

std::string_view to_string(LossKind kind) {
    switch (kind) {
        case LossKind::Hamming: return "hamming";
        case LossKind::Rank: return "rank";
        case LossKind::FMeasure: return "f1";
    }
    return "?";
}

LossKind parse_loss_kind(std::string_view name) {
    if (name == "hamming") return LossKind::Hamming;
    if (name == "rank") return LossKind::Rank;
    if (name == "f1" || name == "f") return LossKind::FMeasure;
    throw InputError("unknown loss '" + std::string(name) + "' (expected hamming, rank or f1)");
}

Penalty::Penalty(PenaltyKind kind, double cost, std::size_t m, std::vector<double> table)
    : kind_(kind), cost_(cost), m_(m), table_(std::move(table)) {}

Penalty Penalty::sep(double cost, std::size_t label_count) {
    if (!(cost >= 0.0) || !std::isfinite(cost)) throw InputError("penalty cost must be >= 0");
    return Penalty(PenaltyKind::Sep, cost, label_count, {});
}

Penalty Penalty::par(double cost, std::size_t label_count) {
    if (!(cost >= 0.0) || !std::isfinite(cost)) throw InputError("penalty cost must be >= 0");
    return Penalty(PenaltyKind::Par, cost, label_count, {});
}

Penalty Penalty::table(std::vector<double> values) {
    if (values.empty()) throw InputError("penalty table needs at least f(0)");
    if (values.front() != 0.0) throw InputError("penalty table must satisfy f(0) = 0");
    for (std::size_t a = 1; a < values.size(); ++a) {
        if (!std::isfinite(values[a]) || values[a] < values[a - 1])
            throw InputError("penalty table must be finite and nondecreasing");
    }
    const std::size_t m = values.size() - 1;
    return Penalty(PenaltyKind::Table, 0.0, m, std::move(values));
}

Penalty Penalty::make(PenaltyKind kind, double cost, std::size_t label_count) {
    switch (kind) {
        case PenaltyKind::Sep: return sep(cost, label_count);
        case PenaltyKind::Par: return par(cost, label_count);
        case PenaltyKind::Table: break;
    }
    throw InputError("table penalties need explicit values");
}

double Penalty::operator()(std::size_t a) const {
    if (a > m_) {
        throw InputError("abstention count " + std::to_string(a) + " exceeds label count " +
                         std::to_string(m_));
    }
    switch (kind_) {
        case PenaltyKind::Sep: return static_cast<double>(a) * cost_;
        case PenaltyKind::Par: {
            if (a == 0) return 0.0;
            const double ad = static_cast<double>(a);
            const double md = static_cast<double>(m_);
            return ad * md * cost_ / (md + ad);
        }
        case PenaltyKind::Table: return table_[a];
    }
    return 0.0;
}

bool Penalty::has_unit_bounded_increments() const {
    for (std::size_t a = 0; a < m_; ++a) {
        const double inc = (*this)(a + 1) - (*this)(a);
        if (inc < 0.0 || inc > 1.0) return false;
    }
    return true;
}

GroundTruth::GroundTruth(std::vector<std::uint8_t> labels) : labels_(std::move(labels)) {
    for (std::size_t i = 0; i < labels_.size(); ++i)
        if (labels_[i] > 1) throw InputError("ground truth label " + std::to_string(i) + " is not binary");
}

std::size_t GroundTruth::relevant_count() const noexcept {
    return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), std::uint8_t{1}));
}

double eval_penalty(const Penalty& f, std::size_t abstentions) { return f(abstentions); }

double generalized_hamming(const GroundTruth& y, const PartialLabeling& yhat, const Penalty& f) {
    if (y.size() != yhat.size()) throw InputError("ground truth and prediction lengths differ");
    std::size_t errors = 0;
    std::size_t abstained = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        switch (yhat[i]) {
            case Decision::Abstain: ++abstained; break;
            case Decision::Zero: errors += y[i] != 0; break;
            case Decision::One: errors += y[i] != 1; break;
        }
    }
    return static_cast<double>(errors) + f(abstained);
}

double rank_loss(const GroundTruth& y, const PartialRanking& ranking) {
    if (ranking.label_count() != y.size()) throw InputError("ranking and ground truth sizes differ");
    // Each relevant label loses one point per irrelevant label ranked above it.
    std::size_t irrelevant_above = 0;
    std::size_t inversions = 0;
    for (std::size_t label : ranking.order()) {
        if (y[label]) {
            inversions += irrelevant_above;
        } else {
            ++irrelevant_above;
        }
    }
    return static_cast<double>(inversions);
}

double f_measure(std::span<const std::uint8_t> y, std::span<const std::uint8_t> yhat) {
    if (y.size() != yhat.size()) throw InputError("f_measure: sequence lengths differ");
    std::size_t both = 0;
    std::size_t total = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        both += (y[i] && yhat[i]) ? 1 : 0;
        total += static_cast<std::size_t>(y[i] != 0) + static_cast<std::size_t>(yhat[i] != 0);
    }
    if (total == 0) return 1.0;
    return 2.0 * static_cast<double>(both) / static_cast<double>(total);
}

double generalized_f_measure(const GroundTruth& y, const PartialLabeling& yhat, const Penalty& f) {
    if (y.size() != yhat.size()) throw InputError("ground truth and prediction lengths differ");
    std::vector<std::uint8_t> yd;
    std::vector<std::uint8_t> hd;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (!yhat.decided(i)) continue;
        yd.push_back(y[i]);
        hd.push_back(yhat[i] == Decision::One ? 1 : 0);
    }
    return f_measure(yd, hd) - f(yhat.abstention_count());
}

double uncertainty(double p) { return 2.0 * labelwise_risk(p); }

}  // namespace mlabstain
