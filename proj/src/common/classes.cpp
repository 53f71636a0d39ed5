#include "drlids/common/classes.hpp"

#include "drlids/common/error.hpp"

namespace drlids {

TrafficClass class_from_index(std::size_t i) {
    if (i >= kDecisionCount) {
        throw DimensionMismatch("decision index " + std::to_string(i) + " out of range");
    }
    return static_cast<TrafficClass>(i);
}

std::string_view to_string(TrafficClass c) {
    switch (c) {
        case TrafficClass::Healthy: return "Healthy";
        case TrafficClass::Suspicious: return "Suspicious";
        case TrafficClass::Intrusion: return "Intrusion";
    }
    return "?";
}

std::optional<TrafficClass> parse_traffic_class(std::string_view s) {
    for (auto c : kAllDecisions) {
        if (to_string(c) == s) return c;
    }
    return std::nullopt;
}

}  // namespace drlids
