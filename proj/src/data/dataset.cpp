#include "drlids/data/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "drlids/common/error.hpp"

namespace drlids::data {

void FeatureSchema::validate() const {
    std::set<std::string> seen;
    for (const auto& c : columns) {
        if (!seen.insert(c.name).second) throw SchemaError("duplicate column name '" + c.name + "'");
    }
    if (!seen.contains(label_column)) throw SchemaError("label column '" + label_column + "' not in schema");
    if (category_column && !seen.contains(*category_column)) {
        throw SchemaError("category column '" + *category_column + "' not in schema");
    }
    for (const auto& name : ignored_columns) {
        if (!seen.contains(name)) throw SchemaError("ignored column '" + name + "' not in schema");
    }
}

std::vector<std::size_t> FeatureSchema::feature_columns() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        const auto& name = columns[i].name;
        if (name == label_column) continue;
        if (category_column && name == *category_column) continue;
        if (std::find(ignored_columns.begin(), ignored_columns.end(), name) != ignored_columns.end()) continue;
        out.push_back(i);
    }
    return out;
}

bool FeatureSchema::has_column(const std::string& name) const {
    return std::any_of(columns.begin(), columns.end(), [&](const Column& c) { return c.name == name; });
}

FeatureSchema FeatureSchema::bot_iot() {
    using K = ColumnKind;
    FeatureSchema s;
    s.columns = {
        {"pkSeqID", K::Numeric},     {"proto", K::Categorical},
        {"saddr", K::Categorical},   {"sport", K::Categorical},
        {"daddr", K::Categorical},   {"dport", K::Categorical},
        {"seq", K::Numeric},         {"stddev", K::Numeric},
        {"N_IN_Conn_P_SrcIP", K::Numeric}, {"min", K::Numeric},
        {"state_number", K::Numeric}, {"mean", K::Numeric},
        {"N_IN_Conn_P_DstIP", K::Numeric}, {"drate", K::Numeric},
        {"srate", K::Numeric},       {"max", K::Numeric},
        {"attack", K::Numeric},      {"category", K::Categorical},
        {"subcategory", K::Categorical},
    };
    s.label_column = "attack";
    s.category_column = "category";
    // Row id carries no signal; subcategory restates the label.
    s.ignored_columns = {"pkSeqID", "subcategory"};
    return s;
}

Dataset::Dataset(FeatureSchema schema) : schema_(std::move(schema)) {
    schema_.validate();
    for (auto idx : schema_.feature_columns()) {
        feature_names_.push_back(schema_.columns[idx].name);
        feature_kinds_.push_back(schema_.columns[idx].kind);
    }
}

std::size_t Dataset::missing_count() const {
    return static_cast<std::size_t>(std::count(missing_.begin(), missing_.end(), std::uint8_t{1}));
}

void Dataset::add_row(std::vector<Cell> cells, std::vector<std::uint8_t> missing, std::string raw_label,
                      std::optional<std::string> category) {
    if (cells.size() != dimension()) {
        throw DimensionMismatch("row has " + std::to_string(cells.size()) + " cells, expected " +
                                std::to_string(dimension()));
    }
    if (missing.empty()) missing.assign(cells.size(), 0);
    if (missing.size() != cells.size()) throw DimensionMismatch("missing mask width does not match row");
    cells_.insert(cells_.end(), std::make_move_iterator(cells.begin()), std::make_move_iterator(cells.end()));
    missing_.insert(missing_.end(), missing.begin(), missing.end());
    raw_labels_.push_back(std::move(raw_label));
    categories_.push_back(std::move(category));
}

void Dataset::set_labels(std::vector<GroundTruthLabel> labels, LabelTable mapping) {
    if (labels.size() != size()) throw LengthMismatch("label count does not match row count");
    labels_ = std::move(labels);
    label_mapping_ = std::move(mapping);
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
    Dataset out;
    out.schema_ = schema_;
    out.feature_names_ = feature_names_;
    out.feature_kinds_ = feature_kinds_;
    out.label_mapping_ = label_mapping_;
    const std::size_t d = dimension();
    out.cells_.reserve(rows.size() * d);
    out.missing_.reserve(rows.size() * d);
    for (auto r : rows) {
        if (r >= size()) throw DimensionMismatch("subset row index out of range");
        for (std::size_t c = 0; c < d; ++c) {
            out.cells_.push_back(cells_[r * d + c]);
            out.missing_.push_back(missing_[r * d + c]);
        }
        out.raw_labels_.push_back(raw_labels_[r]);
        out.categories_.push_back(categories_[r]);
        if (has_labels()) out.labels_.push_back(labels_[r]);
    }
    return out;
}

Dataset Dataset::with_numeric_features(const Matrix& values) const {
    if (values.rows != size() || values.cols != dimension()) {
        throw DimensionMismatch("replacement matrix shape does not match dataset");
    }
    Dataset out = *this;
    for (auto& col : out.schema_.columns) {
        if (std::find(feature_names_.begin(), feature_names_.end(), col.name) != feature_names_.end()) {
            col.kind = ColumnKind::Numeric;
        }
    }
    std::fill(out.feature_kinds_.begin(), out.feature_kinds_.end(), ColumnKind::Numeric);
    for (std::size_t i = 0; i < values.values.size(); ++i) {
        const double v = values.values[i];
        out.cells_[i] = v;
        out.missing_[i] = std::isnan(v) ? 1 : 0;
    }
    return out;
}

Matrix Dataset::numeric_matrix() const {
    Matrix m(size(), dimension());
    for (std::size_t i = 0; i < cells_.size(); ++i) {
        if (missing_[i]) {
            m.values[i] = std::numeric_limits<double>::quiet_NaN();
        } else if (const double* v = std::get_if<double>(&cells_[i])) {
            m.values[i] = *v;
        } else {
            throw SchemaError("feature '" + feature_names_[i % dimension()] +
                              "' is categorical; preprocess before numeric use");
        }
    }
    return m;
}

bool operator==(const Dataset& a, const Dataset& b) {
    if (a.schema_ != b.schema_ || a.feature_names_ != b.feature_names_ || a.feature_kinds_ != b.feature_kinds_ ||
        a.missing_ != b.missing_ || a.raw_labels_ != b.raw_labels_ || a.categories_ != b.categories_ ||
        a.labels_ != b.labels_ || a.label_mapping_ != b.label_mapping_ || a.cells_.size() != b.cells_.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.cells_.size(); ++i) {
        if (!a.missing_[i] && a.cells_[i] != b.cells_[i]) return false;
    }
    return true;
}

}  // namespace drlids::data
