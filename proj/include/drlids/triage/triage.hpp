#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "json.hpp"

#include "drlids/common/classes.hpp"
#include "drlids/data/dataset.hpp"

namespace drlids::triage {

inline constexpr double kVarianceFloor = 1e-6;

struct TriageDecision {
    TrafficClass cls = TrafficClass::Suspicious;
    int priority = priority_of(TrafficClass::Suspicious);

    static TriageDecision of(TrafficClass c) { return {c, priority_of(c)}; }
    friend bool operator==(const TriageDecision&, const TriageDecision&) = default;
};

/// Diagonal Gaussian density and prior for one class.
struct ClassModel {
    TrafficClass cls = TrafficClass::Healthy;
    double prior = 0.0;
    std::vector<double> mean;
    std::vector<double> variance;

    double log_density(std::span<const double> x) const;
    friend bool operator==(const ClassModel&, const ClassModel&) = default;
};

struct ClassStats {
    std::vector<ClassModel> classes;  ///< ordered by class priority
    double variance_floor = kVarianceFloor;

    std::size_t dimension() const { return classes.empty() ? 0 : classes.front().mean.size(); }
    friend bool operator==(const ClassStats&, const ClassStats&) = default;
};

/// Priors are class frequencies; variances are floored at `variance_floor`.
/// Throws EmptyDataset on empty input.
ClassStats estimate_class_stats(const data::Matrix& x, std::span<const TrafficClass> labels,
                                double variance_floor = kVarianceFloor);
ClassStats estimate_class_stats(const data::Dataset& train, double variance_floor = kVarianceFloor);

/// Pairwise likelihood-ratio test: class c beats r when
/// p(x|c) / p(x|r) > p(r) / p(c), evaluated in log space. The winner must
/// beat every other class; otherwise (any exact tie) the result is Suspicious.
TriageDecision likelihood_ratio_decision(std::span<const double> log_densities, std::span<const double> priors,
                                         std::span<const TrafficClass> classes);
TriageDecision classify_likelihood_ratio(std::span<const double> x, const ClassStats& stats);

/// X -> Y: every (feature index, bin) pair must match exactly.
struct Rule {
    std::vector<std::pair<std::size_t, int>> antecedent;
    TrafficClass consequent = TrafficClass::Healthy;
    friend bool operator==(const Rule&, const Rule&) = default;
};

struct RuleScore {
    double support = 0.0;     ///< count(X and Y) / |D|
    double confidence = 0.0;  ///< count(X and Y) / count(X); 0 when undefined
    bool confidence_defined = false;
    std::size_t count_x = 0;
    std::size_t count_xy = 0;
    std::size_t total = 0;
};

/// Discretized records with the decision each one carries.
struct RuleData {
    std::vector<std::vector<int>> features;
    std::vector<TrafficClass> decisions;

    std::size_t size() const { return decisions.size(); }
    friend bool operator==(const RuleData&, const RuleData&) = default;
};

/// One rule per decision class 0..m-1, all sharing the record's antecedent.
/// Throws EmptyAntecedent for a zero-feature record.
std::vector<Rule> generate_rules(std::span<const int> discretized, std::size_t m);

RuleScore score_rule(const Rule& rule, const RuleData& class_data);
/// Same counts restricted to the listed rows of `data`.
RuleScore score_rule(const Rule& rule, const RuleData& data, std::span<const std::size_t> members);

struct TriageParams {
    std::size_t k_neighbors = 5;
    std::size_t rule_bins = 4;  ///< quantile bins per feature for rule antecedents

    void validate() const;
};

/// Labeled training records prepared for neighbor voting: points for the
/// Euclidean search, discretized features for rules, and each record's
/// group (its own likelihood-ratio class).
class TriageReference {
public:
    TriageReference() = default;
    static TriageReference build(const data::Matrix& points, std::span<const TrafficClass> truth,
                                 const ClassStats& stats, std::size_t rule_bins);
    /// Builds from explicit parts; used by tests and deserialization.
    TriageReference(data::Matrix points, std::vector<TrafficClass> truth, std::vector<TrafficClass> groups,
                    std::vector<std::vector<double>> rule_thresholds);

    std::vector<int> discretize(std::span<const double> x) const;

    const data::Matrix& points() const { return points_; }
    const std::vector<TrafficClass>& groups() const { return groups_; }
    const RuleData& rule_data() const { return rule_data_; }
    const std::vector<std::vector<double>>& rule_thresholds() const { return rule_thresholds_; }
    std::size_t size() const { return points_.rows; }

    nlohmann::json to_json() const;
    static TriageReference from_json(const nlohmann::json& j);

    friend bool operator==(const TriageReference&, const TriageReference&) = default;

private:
    data::Matrix points_;
    std::vector<TrafficClass> groups_;
    std::vector<std::vector<double>> rule_thresholds_;
    RuleData rule_data_;
};

/// Result of a vote with the evidence that produced it.
struct VoteOutcome {
    TriageDecision decision;
    TrafficClass nearest_class = TrafficClass::Suspicious;
    std::vector<std::size_t> neighbors;  ///< reference row indices, nearest first
    std::array<double, kDecisionCount> accumulated{};  ///< summed confidence per decision
};

/// Nearest class by likelihood ratio, then the k Euclidean-nearest records of
/// that class each generate rules scored within the class; decisions collect
/// summed confidence and the maximum wins (ties go to the higher priority).
/// k is clamped to the class size. `exclude` drops one reference row
/// (leave-one-out scoring of training records).
VoteOutcome knn_vote_detail(std::span<const double> x, std::size_t k, const TriageReference& train,
                            const ClassStats& stats, std::optional<std::size_t> exclude = std::nullopt);
TriageDecision knn_vote(std::span<const double> x, std::size_t k, const TriageReference& train,
                        const ClassStats& stats, std::optional<std::size_t> exclude = std::nullopt);

nlohmann::json to_json(const ClassStats& s);
ClassStats class_stats_from_json(const nlohmann::json& j);

}  // namespace drlids::triage
