#include "nlos/dataset/split.hpp"

#include "nlos/error.hpp"
#include "nlos/random.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace nlos::dataset {

DatasetSplit split_train_test(std::size_t count, double ratio, std::uint64_t split_seed) {
    if (count < kMinimumSplitRecords)
        throw ConfigError("need at least " + std::to_string(kMinimumSplitRecords) + " records to split, got " +
                          std::to_string(count));
    if (!(ratio > 0.0 && ratio < 1.0)) throw ConfigError("train fraction must lie in (0, 1)");

    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Engine eng(split_seed);
    for (std::size_t i = count - 1; i > 0; --i) std::swap(order[i], order[uniform_below(eng, i + 1)]);

    const auto n_train = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(count)));
    DatasetSplit split;
    split.split_seed = split_seed;
    split.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    split.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
    return split;
}

}  // namespace nlos::dataset
