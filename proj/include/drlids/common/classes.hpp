#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace drlids {

/// Decision levels, ordered by priority. The numeric value doubles as the
/// policy action index and the triage priority.
enum class TrafficClass : std::uint8_t { Healthy = 0, Suspicious = 1, Intrusion = 2 };

inline constexpr std::size_t kDecisionCount = 3;
inline constexpr std::array<TrafficClass, kDecisionCount> kAllDecisions{
    TrafficClass::Healthy, TrafficClass::Suspicious, TrafficClass::Intrusion};

constexpr std::size_t index_of(TrafficClass c) { return static_cast<std::size_t>(c); }
constexpr int priority_of(TrafficClass c) { return static_cast<int>(c); }

TrafficClass class_from_index(std::size_t i);
std::string_view to_string(TrafficClass c);
std::optional<TrafficClass> parse_traffic_class(std::string_view s);

/// Ground truth is binary; Suspicious never appears here.
struct GroundTruthLabel {
    TrafficClass value = TrafficClass::Healthy;
    std::optional<std::string> category;

    bool is_intrusion() const { return value == TrafficClass::Intrusion; }
    friend bool operator==(const GroundTruthLabel&, const GroundTruthLabel&) = default;
};

}  // namespace drlids
