#include "drlids/data/csv.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "drlids/common/error.hpp"
#include "drlids/common/text.hpp"

namespace drlids::data {

namespace {

std::size_t find_header(const std::vector<std::string>& header, const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw SchemaError("column '" + name + "' missing from CSV header");
    return static_cast<std::size_t>(it - header.begin());
}

std::vector<std::string> read_header(std::istream& in, const std::string& source) {
    std::string line;
    if (!std::getline(in, line)) throw SchemaError(source + ": empty file, header row expected");
    if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line.erase(0, 3);  // UTF-8 BOM
    auto header = split_csv_line(line);
    for (auto& h : header) h = std::string(trim(h));
    return header;
}

}  // namespace

Dataset read_csv(std::istream& in, const FeatureSchema& schema, const std::string& source) {
    schema.validate();
    const auto header = read_header(in, source);

    FeatureSchema effective = schema;
    std::erase_if(effective.columns, [&](const Column& c) {
        return std::find(schema.ignored_columns.begin(), schema.ignored_columns.end(), c.name) !=
               schema.ignored_columns.end();
    });
    effective.ignored_columns.clear();

    for (const auto& c : schema.columns) find_header(header, c.name);

    Dataset out(effective);
    std::vector<std::size_t> feature_pos;
    for (const auto& name : out.feature_names()) feature_pos.push_back(find_header(header, name));
    const std::size_t label_pos = find_header(header, schema.label_column);
    std::optional<std::size_t> category_pos;
    if (schema.category_column) category_pos = find_header(header, *schema.category_column);

    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw ParseError(source + ":" + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                             " fields, found " + std::to_string(fields.size()));
        }
        std::vector<Cell> cells;
        std::vector<std::uint8_t> missing;
        cells.reserve(feature_pos.size());
        for (std::size_t j = 0; j < feature_pos.size(); ++j) {
            const std::string_view raw = trim(fields[feature_pos[j]]);
            const bool is_missing = raw.empty();
            missing.push_back(is_missing ? 1 : 0);
            if (out.feature_kinds()[j] == ColumnKind::Categorical) {
                cells.emplace_back(std::string(raw));
            } else if (is_missing) {
                cells.emplace_back(std::numeric_limits<double>::quiet_NaN());
            } else {
                auto v = parse_double(raw);
                if (!v) {
                    throw ParseError(source + ":" + std::to_string(line_no) + ": column '" + out.feature_names()[j] +
                                     "' has non-numeric value '" + std::string(raw) + "'");
                }
                cells.emplace_back(*v);
            }
        }
        std::string label(trim(fields[label_pos]));
        if (label.empty()) {
            throw ParseError(source + ":" + std::to_string(line_no) + ": empty label in column '" +
                             schema.label_column + "'");
        }
        std::optional<std::string> category;
        if (category_pos) category = std::string(trim(fields[*category_pos]));
        out.add_row(std::move(cells), std::move(missing), std::move(label), std::move(category));
    }
    return out;
}

Dataset load_csv(const std::filesystem::path& path, const FeatureSchema& schema) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open CSV file '" + path.string() + "'");
    return read_csv(in, schema, path.string());
}

void write_csv(const Dataset& data, std::ostream& out) {
    const auto& schema = data.schema();
    const auto features = schema.feature_columns();
    for (std::size_t i = 0; i < schema.columns.size(); ++i) {
        if (i) out << ',';
        out << escape_csv_field(schema.columns[i].name);
    }
    out << '\n';
    for (std::size_t r = 0; r < data.size(); ++r) {
        std::size_t f = 0;
        for (std::size_t i = 0; i < schema.columns.size(); ++i) {
            if (i) out << ',';
            const auto& name = schema.columns[i].name;
            if (name == schema.label_column) {
                out << escape_csv_field(data.raw_label(r));
            } else if (schema.category_column && name == *schema.category_column) {
                out << escape_csv_field(data.category(r).value_or(""));
            } else if (f < features.size() && features[f] == i) {
                if (!data.missing(r, f)) {
                    const Cell& c = data.cell(r, f);
                    if (const double* v = std::get_if<double>(&c)) {
                        out << format_double(*v);
                    } else {
                        out << escape_csv_field(std::get<std::string>(c));
                    }
                }
                ++f;
            }
        }
        out << '\n';
    }
}

void save_csv(const Dataset& data, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ArtifactError("cannot write '" + path.string() + "'");
    write_csv(data, out);
}

FeatureSchema infer_schema(const std::filesystem::path& path, const std::string& label_column,
                           const std::optional<std::string>& category_column, std::size_t probe_rows) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open CSV file '" + path.string() + "'");
    const auto header = read_header(in, path.string());
    std::vector<bool> numeric(header.size(), true);
    std::string line;
    for (std::size_t n = 0; n < probe_rows && std::getline(in, line); ++n) {
        auto fields = split_csv_line(line);
        for (std::size_t j = 0; j < std::min(fields.size(), header.size()); ++j) {
            auto raw = trim(fields[j]);
            if (!raw.empty() && !parse_double(raw)) numeric[j] = false;
        }
    }
    FeatureSchema s;
    for (std::size_t j = 0; j < header.size(); ++j) {
        s.columns.push_back({header[j], numeric[j] ? ColumnKind::Numeric : ColumnKind::Categorical});
    }
    s.label_column = label_column;
    s.category_column = category_column;
    s.validate();
    return s;
}

}  // namespace drlids::data
