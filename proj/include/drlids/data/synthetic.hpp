#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>

#include "drlids/data/dataset.hpp"

namespace drlids::data {

/// Linearly separable set: features uniform in [0,1]; the first
/// `informative` features decide the label through a fixed hyperplane and
/// the rest are noise. Rows within `margin` of the plane are redrawn.
struct SeparableSpec {
    std::size_t rows = 2000;
    std::size_t features = 10;
    std::size_t informative = 3;
    double margin = 0.05;
    std::uint64_t seed = 7;
};

Dataset make_separable(const SeparableSpec& spec);

/// The generator's decision rule; 1 = intrusion.
int separable_label(std::span<const double> features, std::size_t informative);

/// Bot-IoT-shaped flows with categorical address/port/protocol columns.
/// The attack count is exactly round(rows * attack_fraction), split across
/// `attack_categories` by weight.
struct BotIotSpec {
    std::size_t rows = 1000;
    double attack_fraction = 0.5;
    std::map<std::string, double> attack_categories{{"DDoS", 0.4}, {"DoS", 0.4}, {"Reconnaissance", 0.2}};
    double missing_rate = 0.0;
    std::uint64_t seed = 11;
};

Dataset make_bot_iot_like(const BotIotSpec& spec);

/// Writes the same records as full Bot-IoT CSV text (all 19 columns).
void write_bot_iot_like_csv(const BotIotSpec& spec, std::ostream& out);

/// Number of attack rows the Bot-IoT-like generator emits for `spec`.
std::size_t expected_attack_rows(const BotIotSpec& spec);

}  // namespace drlids::data
