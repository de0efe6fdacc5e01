#pragma once

// Domain types shared by every minimizer: marginal probabilities, partial
// labelings and rankings, abstention penalties, and the losses evaluated on a
// realized ground truth.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mlabstain/errors.hpp"

namespace mlabstain {

// Two totals closer than this are treated as tied by every minimizer, so the
// documented tie-breaking rules apply to values that differ only by rounding.
inline constexpr double kTieTolerance = 1e-12;

/// Per-label relevance probabilities p_i = P(y_i = 1 | x) for one instance.
class MarginalVector {
public:
    MarginalVector() = default;
    explicit MarginalVector(std::vector<double> probs);

    std::size_t size() const noexcept { return probs_.size(); }
    double operator[](std::size_t i) const { return probs_[i]; }
    std::span<const double> values() const noexcept { return probs_; }
    auto begin() const noexcept { return probs_.begin(); }
    auto end() const noexcept { return probs_.end(); }

private:
    std::vector<double> probs_;
};

enum class Decision : std::uint8_t { Zero = 0, One = 1, Abstain = 2 };

/// A prediction over {0, 1, abstain} for each of m labels.
class PartialLabeling {
public:
    PartialLabeling() = default;
    explicit PartialLabeling(std::vector<Decision> entries);

    /// All labels abstained.
    static PartialLabeling abstain_all(std::size_t m);
    /// Parses the comma-separated symbol form "1,0,?".
    static PartialLabeling parse(std::string_view text);

    std::size_t size() const noexcept { return entries_.size(); }
    Decision operator[](std::size_t i) const { return entries_[i]; }
    std::span<const Decision> entries() const noexcept { return entries_; }

    bool decided(std::size_t i) const { return entries_[i] != Decision::Abstain; }
    std::vector<std::size_t> decided_set() const;
    std::vector<std::size_t> abstained_set() const;
    std::size_t abstention_count() const noexcept;

    /// Comma-separated symbols `0`, `1`, `?`.
    std::string to_string() const;

    friend bool operator==(const PartialLabeling&, const PartialLabeling&) = default;

private:
    std::vector<Decision> entries_;
};

/// Ordered distinct label indices (0-based), most probably relevant first.
/// Labels that do not appear are abstained on.
class PartialRanking {
public:
    PartialRanking() = default;
    /// Throws InputError on duplicates or indices >= label_count.
    PartialRanking(std::vector<std::size_t> order, std::size_t label_count);

    std::size_t label_count() const noexcept { return label_count_; }
    std::size_t size() const noexcept { return order_.size(); }
    std::size_t operator[](std::size_t pos) const { return order_[pos]; }
    std::span<const std::size_t> order() const noexcept { return order_; }
    std::size_t abstention_count() const noexcept { return label_count_ - order_.size(); }
    bool contains(std::size_t label) const;

    /// 1-based indices joined by '>', e.g. "1>4"; "-" for the empty ranking.
    std::string to_string() const;

    friend bool operator==(const PartialRanking&, const PartialRanking&) = default;

private:
    std::vector<std::size_t> order_;
    std::size_t label_count_ = 0;
};

enum class PenaltyKind { Sep, Par, Table };

enum class LossKind { Hamming, Rank, FMeasure };

/// "hamming", "rank", "f1".
std::string_view to_string(LossKind kind);
LossKind parse_loss_kind(std::string_view name);

std::string_view to_string(PenaltyKind kind);
/// Accepts "sep", "par", "table" (case-insensitive).
PenaltyKind parse_penalty_kind(std::string_view name);

/// Abstention penalty f(a) depending only on the number of abstained labels.
///   SEP:   f(a) = a c
///   PAR:   f(a) = a m c / (m + a)
///   TABLE: explicit f(0..m)
class Penalty {
public:
    static Penalty sep(double cost, std::size_t label_count);
    static Penalty par(double cost, std::size_t label_count);
    /// `values` holds f(0), ..., f(m); must start at 0 and be nondecreasing.
    static Penalty table(std::vector<double> values);
    static Penalty make(PenaltyKind kind, double cost, std::size_t label_count);

    PenaltyKind kind() const noexcept { return kind_; }
    double cost() const noexcept { return cost_; }
    std::size_t label_count() const noexcept { return m_; }

    /// f(a); throws InputError when a > m.
    double operator()(std::size_t abstentions) const;

    /// f(k+1) - f(k) <= 1 for every k: the condition under which generalized
    /// Hamming loss is monotonic in the correct > abstain > wrong order.
    bool has_unit_bounded_increments() const;

private:
    Penalty(PenaltyKind kind, double cost, std::size_t m, std::vector<double> table);

    PenaltyKind kind_ = PenaltyKind::Sep;
    double cost_ = 0.0;
    std::size_t m_ = 0;
    std::vector<double> table_;
};

/// A realized binary labeling.
class GroundTruth {
public:
    GroundTruth() = default;
    /// Throws InputError on entries other than 0 or 1.
    explicit GroundTruth(std::vector<std::uint8_t> labels);

    std::size_t size() const noexcept { return labels_.size(); }
    std::uint8_t operator[](std::size_t i) const { return labels_[i]; }
    std::span<const std::uint8_t> labels() const noexcept { return labels_; }
    std::size_t relevant_count() const noexcept;

private:
    std::vector<std::uint8_t> labels_;
};

double eval_penalty(const Penalty& f, std::size_t abstentions);

/// Hamming errors on decided labels plus f(|A|).
double generalized_hamming(const GroundTruth& y, const PartialLabeling& yhat, const Penalty& f);

/// Number of ranked pairs with an irrelevant label placed above a relevant
/// one. Unranked labels do not contribute.
double rank_loss(const GroundTruth& y, const PartialRanking& ranking);

/// 2 sum(y yhat) / sum(y + yhat); 1 when both sides are all zero or empty.
double f_measure(std::span<const std::uint8_t> y, std::span<const std::uint8_t> yhat);

/// F measure on the decided part minus f(|A|); 1 - f(m) under full abstention.
double generalized_f_measure(const GroundTruth& y, const PartialLabeling& yhat, const Penalty& f);

/// 2 min(p, 1 - p).
double uncertainty(double p);

/// min(p, 1 - p): expected Hamming error of the better of the two decisions.
inline double labelwise_risk(double p) { return p < 1.0 - p ? p : 1.0 - p; }

}  // namespace mlabstain
