#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace nlos::dataset {

struct DatasetSplit {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
    std::uint64_t split_seed = 0;
};

inline constexpr double kDefaultTrainFraction = 0.95;
inline constexpr std::size_t kMinimumSplitRecords = 20;

/// Seeded Fisher-Yates shuffle of 0..count-1, then the first
/// round(ratio * count) indices train and the rest test. Not stratified.
/// Throws ConfigError for fewer than 20 records or a ratio outside (0, 1).
DatasetSplit split_train_test(std::size_t count, double ratio, std::uint64_t split_seed);

}  // namespace nlos::dataset
