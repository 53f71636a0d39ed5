#include "drlids/data/split.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "drlids/common/error.hpp"
#include "drlids/common/rng.hpp"

namespace drlids::data {

std::pair<Dataset, Dataset> split(const Dataset& data, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction >= 0.0 && train_fraction <= 1.0)) {
        throw ConfigError("train_fraction must lie in [0, 1]");
    }
    const std::size_t n = data.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(order);

    const auto n_train = static_cast<std::size_t>(std::floor(static_cast<double>(n) * train_fraction));
    std::vector<std::size_t> train(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    std::vector<std::size_t> test(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
    std::sort(train.begin(), train.end());
    std::sort(test.begin(), test.end());
    return {data.subset(train), data.subset(test)};
}

}  // namespace drlids::data
