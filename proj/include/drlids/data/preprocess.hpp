#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "drlids/data/dataset.hpp"

namespace drlids::data {

enum class ImputeMode {
    MedianMode,  ///< median for numeric columns, mode for categorical ones
    Mode,        ///< mode for every column
};

enum class Normalization { MinMax, ZScore, None };

struct PreprocessConfig {
    ImputeMode impute = ImputeMode::MedianMode;
    /// Per-feature ascending thresholds, applied after normalization.
    std::map<std::string, std::vector<double>> discretize_thresholds;
    Normalization normalize = Normalization::MinMax;
    /// Buckets for hashing categorical cells (addresses, ports, protocols).
    std::size_t hash_buckets = 256;

    void validate() const;
};

/// Fitted per-column transform, in application order: impute, hash
/// categorical to a bucket, normalize, discretize.
struct ColumnTransform {
    ColumnKind kind = ColumnKind::Numeric;
    double numeric_fill = 0.0;
    std::string categorical_fill;
    double shift = 0.0;
    double scale = 1.0;  ///< 0 marks a constant column, which maps to 0
    std::vector<double> thresholds;
};

class Preprocessor {
public:
    static Preprocessor fit(const Dataset& data, const PreprocessConfig& cfg);

    Dataset apply(const Dataset& data) const;
    /// Transforms one raw record; `missing` may be empty when nothing is missing.
    std::vector<double> transform(std::span<const Cell> cells, std::span<const std::uint8_t> missing = {}) const;

    std::size_t dimension() const { return columns_.size(); }
    const std::vector<ColumnTransform>& columns() const { return columns_; }
    std::size_t hash_buckets() const { return hash_buckets_; }

    nlohmann::json to_json() const;
    static Preprocessor from_json(const nlohmann::json& j);

private:
    double transform_cell(std::size_t col, const Cell& cell, bool missing) const;

    std::vector<ColumnTransform> columns_;
    std::size_t hash_buckets_ = 256;
};

/// Fit-and-apply. Afterwards no cell is missing; under MinMax every
/// non-discretized cell lies in [0, 1].
Dataset preprocess(const Dataset& data, const PreprocessConfig& cfg);

/// Bin index of `value`: the number of thresholds <= value.
std::size_t bin_index(double value, std::span<const double> thresholds);

/// Stable FNV-1a hash of a categorical value into [0, buckets).
std::size_t hash_bucket(const std::string& value, std::size_t buckets);

double median_of(std::vector<double> values);

}  // namespace drlids::data
