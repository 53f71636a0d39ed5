#pragma once

#include "drlids/data/dataset.hpp"

namespace drlids::data {

/// Normal -> Healthy; DDoS, DoS, Reconnaissance, Theft -> Intrusion; plus
/// the raw 0/1 attack flag for label-only data.
LabelTable default_label_table();

/// Maps each row's category (or raw label when the schema has no category
/// column) through `mapping`. Throws UnknownCategory naming the first
/// unmapped value.
Dataset encode_labels(const Dataset& data, const LabelTable& mapping);

}  // namespace drlids::data
