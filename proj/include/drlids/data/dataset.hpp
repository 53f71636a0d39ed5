#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "drlids/common/classes.hpp"

namespace drlids::data {

enum class ColumnKind { Numeric, Categorical };

struct Column {
    std::string name;
    ColumnKind kind = ColumnKind::Numeric;
    friend bool operator==(const Column&, const Column&) = default;
};

/// Ordered CSV column layout. Every column that is not the label, the
/// category or explicitly ignored is a feature.
struct FeatureSchema {
    std::vector<Column> columns;
    std::string label_column;
    std::optional<std::string> category_column;
    std::vector<std::string> ignored_columns;

    /// Throws SchemaError on duplicate names or a missing label column.
    void validate() const;
    /// Indices into `columns` of the feature columns, in order.
    std::vector<std::size_t> feature_columns() const;
    bool has_column(const std::string& name) const;

    /// Published Bot-IoT 2018 "10-best" layout; label = attack, category = category.
    static FeatureSchema bot_iot();

    friend bool operator==(const FeatureSchema&, const FeatureSchema&) = default;
};

using Cell = std::variant<double, std::string>;

/// Dense row-major numeric view; NaN marks a missing cell.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}

    double& operator()(std::size_t r, std::size_t c) { return values[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
    std::span<const double> row(std::size_t r) const { return {values.data() + r * cols, cols}; }

    friend bool operator==(const Matrix&, const Matrix&) = default;
};

using LabelTable = std::map<std::string, TrafficClass>;

/// Tabular flow records: n rows of d feature cells, a missing-cell mask,
/// raw label/category strings and, once encoded, ground-truth labels.
class Dataset {
public:
    Dataset() = default;
    explicit Dataset(FeatureSchema schema);

    const FeatureSchema& schema() const { return schema_; }
    const std::vector<std::string>& feature_names() const { return feature_names_; }
    const std::vector<ColumnKind>& feature_kinds() const { return feature_kinds_; }

    std::size_t size() const { return raw_labels_.size(); }
    std::size_t dimension() const { return feature_names_.size(); }
    bool empty() const { return size() == 0; }

    const Cell& cell(std::size_t row, std::size_t col) const { return cells_[row * dimension() + col]; }
    bool missing(std::size_t row, std::size_t col) const { return missing_[row * dimension() + col] != 0; }
    std::span<const Cell> row(std::size_t r) const { return {cells_.data() + r * dimension(), dimension()}; }
    std::span<const std::uint8_t> missing_row(std::size_t r) const {
        return {missing_.data() + r * dimension(), dimension()};
    }
    std::size_t missing_count() const;

    const std::string& raw_label(std::size_t r) const { return raw_labels_[r]; }
    const std::optional<std::string>& category(std::size_t r) const { return categories_[r]; }

    bool has_labels() const { return labels_.size() == size() && !labels_.empty(); }
    const std::vector<GroundTruthLabel>& labels() const { return labels_; }
    const LabelTable& label_mapping() const { return label_mapping_; }

    /// Appends one record. `missing` flags cells that were empty in the source.
    void add_row(std::vector<Cell> cells, std::vector<std::uint8_t> missing, std::string raw_label,
                 std::optional<std::string> category = std::nullopt);

    void set_labels(std::vector<GroundTruthLabel> labels, LabelTable mapping);

    /// Copy with the same schema holding only the given rows, in the given order.
    Dataset subset(std::span<const std::size_t> rows) const;

    /// Copy of this dataset with feature cells replaced; kinds become Numeric.
    Dataset with_numeric_features(const Matrix& values) const;

    /// Throws SchemaError if a categorical cell is present.
    Matrix numeric_matrix() const;

    /// Cells under the missing mask are not compared.
    friend bool operator==(const Dataset& a, const Dataset& b);

private:
    FeatureSchema schema_;
    std::vector<std::string> feature_names_;
    std::vector<ColumnKind> feature_kinds_;
    std::vector<Cell> cells_;
    std::vector<std::uint8_t> missing_;
    std::vector<std::string> raw_labels_;
    std::vector<std::optional<std::string>> categories_;
    std::vector<GroundTruthLabel> labels_;
    LabelTable label_mapping_;
};

}  // namespace drlids::data
