#pragma once

#include <cstdint>
#include <utility>

#include "drlids/data/dataset.hpp"

namespace drlids::data {

/// Seeded shuffle-split. |train| = floor(n * train_fraction); both parts
/// keep the original row order.
std::pair<Dataset, Dataset> split(const Dataset& data, double train_fraction, std::uint64_t seed);

}  // namespace drlids::data
