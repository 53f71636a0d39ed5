#include "drlids/data/labels.hpp"

#include "drlids/common/error.hpp"

namespace drlids::data {

LabelTable default_label_table() {
    return {
        {"Normal", TrafficClass::Healthy},
        {"DDoS", TrafficClass::Intrusion},
        {"DoS", TrafficClass::Intrusion},
        {"Reconnaissance", TrafficClass::Intrusion},
        {"Theft", TrafficClass::Intrusion},
        {"0", TrafficClass::Healthy},
        {"1", TrafficClass::Intrusion},
    };
}

Dataset encode_labels(const Dataset& data, const LabelTable& mapping) {
    for (const auto& [key, cls] : mapping) {
        if (cls == TrafficClass::Suspicious) {
            throw ConfigError("label table maps '" + key + "' to Suspicious; ground truth is Healthy/Intrusion only");
        }
    }
    std::vector<GroundTruthLabel> labels;
    labels.reserve(data.size());
    for (std::size_t r = 0; r < data.size(); ++r) {
        const auto& cat = data.category(r);
        const std::string& key = cat ? *cat : data.raw_label(r);
        auto it = mapping.find(key);
        if (it == mapping.end()) {
            throw UnknownCategory("unknown category '" + key + "' at data row " + std::to_string(r + 1));
        }
        GroundTruthLabel label{it->second, std::nullopt};
        if (label.value == TrafficClass::Intrusion && cat) label.category = *cat;
        labels.push_back(std::move(label));
    }
    Dataset out = data;
    out.set_labels(std::move(labels), mapping);
    return out;
}

}  // namespace drlids::data
