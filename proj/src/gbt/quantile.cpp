#include <algorithm>
#include <cmath>

#include "drlids/gbt/gbt.hpp"

namespace drlids::gbt {

std::vector<double> quantile_bins(std::span<const double> values, std::size_t n_bins) {
    std::vector<double> sorted;
    sorted.reserve(values.size());
    for (double v : values) {
        if (!std::isnan(v)) sorted.push_back(v);
    }
    std::vector<double> out;
    if (n_bins <= 1 || sorted.size() < 2) return out;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();

    for (std::size_t k = 1; k < n_bins; ++k) {
        // Boundary after the first floor(k/n_bins * n) values; slide right
        // past runs of equal values so every threshold separates something.
        std::size_t idx = (k * n) / n_bins;
        idx = std::clamp<std::size_t>(idx, 1, n - 1);
        while (idx < n && !(sorted[idx - 1] < sorted[idx])) ++idx;
        if (idx >= n) break;
        double t = sorted[idx - 1] + 0.5 * (sorted[idx] - sorted[idx - 1]);
        if (!(t > sorted[idx - 1])) t = sorted[idx];
        if (out.empty() || out.back() < t) out.push_back(t);
    }
    return out;
}

}  // namespace drlids::gbt
