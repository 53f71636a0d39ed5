#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "drlids/data/dataset.hpp"

namespace drlids::data {

/// Reads a header-first CSV. Empty cells are recorded as missing. Columns in
/// the file but not in the schema are skipped; ignored schema columns are
/// read and dropped, so the returned dataset's schema omits them.
Dataset load_csv(const std::filesystem::path& path, const FeatureSchema& schema);
Dataset read_csv(std::istream& in, const FeatureSchema& schema, const std::string& source_name = "<stream>");

/// Writes features, label and category in schema order. Loading the output
/// with `data.schema()` reproduces `data` exactly (labels aside).
void write_csv(const Dataset& data, std::ostream& out);
void save_csv(const Dataset& data, const std::filesystem::path& path);

/// Builds a schema from a CSV header: a column is numeric when every
/// non-empty cell in the first `probe_rows` rows parses as a number.
FeatureSchema infer_schema(const std::filesystem::path& path, const std::string& label_column,
                           const std::optional<std::string>& category_column = std::nullopt,
                           std::size_t probe_rows = 200);

}  // namespace drlids::data
