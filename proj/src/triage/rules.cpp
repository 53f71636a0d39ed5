#include "drlids/common/error.hpp"
#include "drlids/triage/triage.hpp"

namespace drlids::triage {

std::vector<Rule> generate_rules(std::span<const int> discretized, std::size_t m) {
    if (discretized.empty()) throw EmptyAntecedent("cannot generate rules from a record with no features");
    if (m == 0 || m > kDecisionCount) throw ConfigError("rule class count must be in [1, 3]");
    Rule base;
    for (std::size_t j = 0; j < discretized.size(); ++j) base.antecedent.emplace_back(j, discretized[j]);
    std::vector<Rule> rules;
    for (std::size_t i = 0; i < m; ++i) {
        Rule r = base;
        r.consequent = class_from_index(i);
        rules.push_back(std::move(r));
    }
    return rules;
}

namespace {

bool matches(const Rule& rule, const std::vector<int>& record) {
    for (const auto& [f, bin] : rule.antecedent) {
        if (f >= record.size() || record[f] != bin) return false;
    }
    return true;
}

RuleScore finish(std::size_t count_x, std::size_t count_xy, std::size_t total) {
    RuleScore s;
    s.count_x = count_x;
    s.count_xy = count_xy;
    s.total = total;
    s.support = total ? static_cast<double>(count_xy) / static_cast<double>(total) : 0.0;
    s.confidence_defined = count_x > 0;
    s.confidence = count_x ? static_cast<double>(count_xy) / static_cast<double>(count_x) : 0.0;
    return s;
}

}  // namespace

RuleScore score_rule(const Rule& rule, const RuleData& data, std::span<const std::size_t> members) {
    std::size_t count_x = 0, count_xy = 0;
    for (auto i : members) {
        if (!matches(rule, data.features[i])) continue;
        ++count_x;
        if (data.decisions[i] == rule.consequent) ++count_xy;
    }
    return finish(count_x, count_xy, members.size());
}

RuleScore score_rule(const Rule& rule, const RuleData& class_data) {
    if (class_data.features.size() != class_data.decisions.size()) {
        throw LengthMismatch("rule data features and decisions differ in length");
    }
    std::size_t count_x = 0, count_xy = 0;
    for (std::size_t i = 0; i < class_data.size(); ++i) {
        if (!matches(rule, class_data.features[i])) continue;
        ++count_x;
        if (class_data.decisions[i] == rule.consequent) ++count_xy;
    }
    return finish(count_x, count_xy, class_data.size());
}

}  // namespace drlids::triage
