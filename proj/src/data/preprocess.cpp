#include "drlids/data/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "drlids/common/error.hpp"

namespace drlids::data {

using nlohmann::json;

void PreprocessConfig::validate() const {
    if (hash_buckets == 0) throw ConfigError("preprocess.hash_buckets must be >= 1");
    for (const auto& [name, th] : discretize_thresholds) {
        for (std::size_t i = 1; i < th.size(); ++i) {
            if (!(th[i - 1] < th[i])) {
                throw ConfigError("discretize thresholds for '" + name + "' are not strictly ascending");
            }
        }
    }
}

std::size_t bin_index(double value, std::span<const double> thresholds) {
    return static_cast<std::size_t>(std::upper_bound(thresholds.begin(), thresholds.end(), value) -
                                    thresholds.begin());
}

std::size_t hash_bucket(const std::string& value, std::size_t buckets) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : value) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(h % buckets);
}

double median_of(std::vector<double> values) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

namespace {

template <typename T>
T mode_of(const std::vector<T>& values, T fallback) {
    std::map<T, std::size_t> counts;
    for (const auto& v : values) ++counts[v];
    T best = fallback;
    std::size_t best_n = 0;
    for (const auto& [v, n] : counts) {  // ascending order: ties keep the smallest
        if (n > best_n) {
            best = v;
            best_n = n;
        }
    }
    return best;
}

}  // namespace

Preprocessor Preprocessor::fit(const Dataset& data, const PreprocessConfig& cfg) {
    cfg.validate();
    for (const auto& [name, th] : cfg.discretize_thresholds) {
        if (std::find(data.feature_names().begin(), data.feature_names().end(), name) == data.feature_names().end()) {
            throw ConfigError("discretize thresholds given for unknown feature '" + name + "'");
        }
    }
    Preprocessor p;
    p.hash_buckets_ = cfg.hash_buckets;
    const std::size_t d = data.dimension();
    p.columns_.resize(d);

    for (std::size_t j = 0; j < d; ++j) {
        ColumnTransform& t = p.columns_[j];
        t.kind = data.feature_kinds()[j];
        if (t.kind == ColumnKind::Categorical) {
            std::vector<std::string> present;
            for (std::size_t i = 0; i < data.size(); ++i) {
                if (!data.missing(i, j)) present.push_back(std::get<std::string>(data.cell(i, j)));
            }
            t.categorical_fill = mode_of<std::string>(present, "");
        } else {
            std::vector<double> present;
            for (std::size_t i = 0; i < data.size(); ++i) {
                if (!data.missing(i, j)) present.push_back(std::get<double>(data.cell(i, j)));
            }
            t.numeric_fill = cfg.impute == ImputeMode::Mode ? mode_of<double>(present, 0.0) : median_of(present);
        }
    }

    // Normalization statistics are taken over imputed, hashed values.
    for (std::size_t j = 0; j < d; ++j) {
        ColumnTransform& t = p.columns_[j];
        std::vector<double> col;
        col.reserve(data.size());
        for (std::size_t i = 0; i < data.size(); ++i) {
            col.push_back(p.transform_cell(j, data.cell(i, j), data.missing(i, j)));
        }
        if (col.empty() || cfg.normalize == Normalization::None) continue;
        if (cfg.normalize == Normalization::MinMax) {
            const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
            t.shift = *lo;
            t.scale = *hi - *lo;
        } else {
            double mean = 0.0;
            for (double v : col) mean += v;
            mean /= static_cast<double>(col.size());
            double var = 0.0;
            for (double v : col) var += (v - mean) * (v - mean);
            var /= static_cast<double>(col.size());
            t.shift = mean;
            t.scale = std::sqrt(var);
        }
    }

    for (std::size_t j = 0; j < d; ++j) {
        auto it = cfg.discretize_thresholds.find(data.feature_names()[j]);
        if (it != cfg.discretize_thresholds.end()) p.columns_[j].thresholds = it->second;
    }
    return p;
}

double Preprocessor::transform_cell(std::size_t col, const Cell& cell, bool missing) const {
    const ColumnTransform& t = columns_[col];
    double v = 0.0;
    if (t.kind == ColumnKind::Categorical) {
        const std::string* s = std::get_if<std::string>(&cell);
        const std::string& value = (missing || !s) ? t.categorical_fill : *s;
        v = static_cast<double>(hash_bucket(value, hash_buckets_));
    } else {
        const double* x = std::get_if<double>(&cell);
        v = (missing || !x || std::isnan(*x)) ? t.numeric_fill : *x;
    }
    v = t.scale == 0.0 ? 0.0 : (v - t.shift) / t.scale;
    if (!t.thresholds.empty()) v = static_cast<double>(bin_index(v, t.thresholds));
    return v;
}

std::vector<double> Preprocessor::transform(std::span<const Cell> cells, std::span<const std::uint8_t> missing) const {
    if (cells.size() != columns_.size()) {
        throw DimensionMismatch("record has " + std::to_string(cells.size()) + " cells, preprocessor expects " +
                                std::to_string(columns_.size()));
    }
    if (!missing.empty() && missing.size() != cells.size()) throw DimensionMismatch("missing mask width mismatch");
    std::vector<double> out(cells.size());
    for (std::size_t j = 0; j < cells.size(); ++j) {
        out[j] = transform_cell(j, cells[j], !missing.empty() && missing[j]);
    }
    return out;
}

Dataset Preprocessor::apply(const Dataset& data) const {
    if (data.dimension() != columns_.size()) {
        throw DimensionMismatch("dataset has " + std::to_string(data.dimension()) + " features, preprocessor expects " +
                                std::to_string(columns_.size()));
    }
    Matrix m(data.size(), data.dimension());
    for (std::size_t i = 0; i < data.size(); ++i) {
        for (std::size_t j = 0; j < data.dimension(); ++j) {
            m(i, j) = transform_cell(j, data.cell(i, j), data.missing(i, j));
        }
    }
    return data.with_numeric_features(m);
}

Dataset preprocess(const Dataset& data, const PreprocessConfig& cfg) {
    return Preprocessor::fit(data, cfg).apply(data);
}

json Preprocessor::to_json() const {
    json cols = json::array();
    for (const auto& t : columns_) {
        cols.push_back({{"kind", t.kind == ColumnKind::Numeric ? "numeric" : "categorical"},
                        {"numeric_fill", t.numeric_fill},
                        {"categorical_fill", t.categorical_fill},
                        {"shift", t.shift},
                        {"scale", t.scale},
                        {"thresholds", t.thresholds}});
    }
    return {{"hash_buckets", hash_buckets_}, {"columns", cols}};
}

Preprocessor Preprocessor::from_json(const json& j) {
    Preprocessor p;
    p.hash_buckets_ = j.at("hash_buckets").get<std::size_t>();
    for (const auto& c : j.at("columns")) {
        ColumnTransform t;
        t.kind = c.at("kind").get<std::string>() == "numeric" ? ColumnKind::Numeric : ColumnKind::Categorical;
        t.numeric_fill = c.at("numeric_fill").get<double>();
        t.categorical_fill = c.at("categorical_fill").get<std::string>();
        t.shift = c.at("shift").get<double>();
        t.scale = c.at("scale").get<double>();
        t.thresholds = c.at("thresholds").get<std::vector<double>>();
        p.columns_.push_back(std::move(t));
    }
    return p;
}

}  // namespace drlids::data
