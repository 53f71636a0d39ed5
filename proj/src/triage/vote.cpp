#include <algorithm>
#include <numeric>

#include "drlids/common/error.hpp"
#include "drlids/data/preprocess.hpp"
#include "drlids/gbt/gbt.hpp"
#include "drlids/triage/triage.hpp"

namespace drlids::triage {

using nlohmann::json;

void TriageParams::validate() const {
    if (k_neighbors < 1) throw ConfigError("triage.k_neighbors must be >= 1");
    if (rule_bins < 1) throw ConfigError("triage.rule_bins must be >= 1");
}

TriageReference::TriageReference(data::Matrix points, std::vector<TrafficClass> truth,
                                 std::vector<TrafficClass> groups, std::vector<std::vector<double>> rule_thresholds)
    : points_(std::move(points)), groups_(std::move(groups)), rule_thresholds_(std::move(rule_thresholds)) {
    if (truth.size() != points_.rows || groups_.size() != points_.rows) {
        throw LengthMismatch("triage reference: label/group count does not match point count");
    }
    if (rule_thresholds_.size() != points_.cols) {
        throw DimensionMismatch("triage reference: threshold table width does not match points");
    }
    rule_data_.decisions = std::move(truth);
    for (std::size_t r = 0; r < points_.rows; ++r) rule_data_.features.push_back(discretize(points_.row(r)));
}

TriageReference TriageReference::build(const data::Matrix& points, std::span<const TrafficClass> truth,
                                       const ClassStats& stats, std::size_t rule_bins) {
    std::vector<std::vector<double>> thresholds;
    std::vector<double> col(points.rows);
    for (std::size_t f = 0; f < points.cols; ++f) {
        for (std::size_t r = 0; r < points.rows; ++r) col[r] = points(r, f);
        thresholds.push_back(gbt::quantile_bins(col, rule_bins));
    }
    std::vector<TrafficClass> groups;
    for (std::size_t r = 0; r < points.rows; ++r) groups.push_back(classify_likelihood_ratio(points.row(r), stats).cls);
    return TriageReference(points, std::vector<TrafficClass>(truth.begin(), truth.end()), std::move(groups),
                           std::move(thresholds));
}

std::vector<int> TriageReference::discretize(std::span<const double> x) const {
    if (x.size() != rule_thresholds_.size()) throw DimensionMismatch("record width does not match triage reference");
    std::vector<int> out(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) out[j] = static_cast<int>(data::bin_index(x[j], rule_thresholds_[j]));
    return out;
}

json TriageReference::to_json() const {
    std::vector<std::string> truth, groups;
    for (auto c : rule_data_.decisions) truth.emplace_back(drlids::to_string(c));
    for (auto c : groups_) groups.emplace_back(drlids::to_string(c));
    return {{"rows", points_.rows},   {"cols", points_.cols},           {"points", points_.values},
            {"truth", truth},         {"groups", groups},               {"rule_thresholds", rule_thresholds_}};
}

TriageReference TriageReference::from_json(const json& j) {
    data::Matrix points;
    points.rows = j.at("rows").get<std::size_t>();
    points.cols = j.at("cols").get<std::size_t>();
    points.values = j.at("points").get<std::vector<double>>();
    if (points.values.size() != points.rows * points.cols) throw ArtifactError("triage reference: point data size");
    auto parse = [](const json& arr) {
        std::vector<TrafficClass> out;
        for (const auto& s : arr) {
            auto c = parse_traffic_class(s.get<std::string>());
            if (!c) throw ArtifactError("triage reference: unknown class name");
            out.push_back(*c);
        }
        return out;
    };
    return TriageReference(std::move(points), parse(j.at("truth")), parse(j.at("groups")),
                           j.at("rule_thresholds").get<std::vector<std::vector<double>>>());
}

VoteOutcome knn_vote_detail(std::span<const double> x, std::size_t k, const TriageReference& train,
                            const ClassStats& stats, std::optional<std::size_t> exclude) {
    if (k < 1) throw ConfigError("knn_vote needs k >= 1");
    if (train.size() == 0) throw EmptyDataset("knn_vote needs a non-empty reference set");
    if (x.size() != train.points().cols) throw DimensionMismatch("record width does not match triage reference");

    VoteOutcome out;
    out.nearest_class = classify_likelihood_ratio(x, stats).cls;

    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < train.size(); ++i) {
        if (exclude && *exclude == i) continue;
        if (train.groups()[i] == out.nearest_class) members.push_back(i);
    }
    if (members.empty()) {
        // The likelihood-ratio class has no reference records; vote over everything.
        for (std::size_t i = 0; i < train.size(); ++i) {
            if (!(exclude && *exclude == i)) members.push_back(i);
        }
    }
    if (members.empty()) throw EmptyDataset("knn_vote: reference set is empty after exclusion");

    std::vector<std::pair<double, std::size_t>> dist;
    dist.reserve(members.size());
    for (auto i : members) {
        const auto p = train.points().row(i);
        double d2 = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) d2 += (x[j] - p[j]) * (x[j] - p[j]);
        dist.emplace_back(d2, i);
    }
    const std::size_t kk = std::min(k, dist.size());
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(kk), dist.end());

    for (std::size_t n = 0; n < kk; ++n) {
        const std::size_t idx = dist[n].second;
        out.neighbors.push_back(idx);
        for (const Rule& rule : generate_rules(train.rule_data().features[idx], kDecisionCount)) {
            out.accumulated[index_of(rule.consequent)] += score_rule(rule, train.rule_data(), members).confidence;
        }
    }

    // Scan from the highest priority down so ties keep the higher priority.
    std::size_t best = kDecisionCount - 1;
    for (std::size_t c = kDecisionCount - 1; c-- > 0;) {
        if (out.accumulated[c] > out.accumulated[best]) best = c;
    }
    out.decision = TriageDecision::of(class_from_index(best));
    return out;
}

TriageDecision knn_vote(std::span<const double> x, std::size_t k, const TriageReference& train,
                        const ClassStats& stats, std::optional<std::size_t> exclude) {
    return knn_vote_detail(x, k, train, stats, exclude).decision;
}

}  // namespace drlids::triage
