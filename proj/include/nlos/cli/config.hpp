#pragma once

// Run configuration shared by every subcommand.
//
// Settings are flat "section.key" strings. They are merged in three layers,
// defaults < config file < command-line flags, and only then converted into
// typed configuration. Seeds that are not set explicitly are derived from
// run.seed.

#include "nlos/classifier/train.hpp"
#include "nlos/dataset/preprocess.hpp"
#include "nlos/scenario/scenario.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace nlos::cli {

using Settings = std::map<std::string, std::string>;

/// Every accepted "section.key" with its default ("" when the value is derived).
const Settings& default_settings();

/// Parses an INI file ([section] headers, key = value lines, ';' or '#' comments).
/// Unknown sections or keys raise ConfigError naming the offending key.
Settings read_config_file(const std::filesystem::path& path);
Settings parse_config_text(const std::string& text);

/// defaults, then `file`, then `flags`; unknown keys raise ConfigError.
Settings merge_settings(const Settings& file, const Settings& flags);

/// Child-seed indices below run.seed.
enum class SeedSlot : std::uint64_t { wall = 1, wall2 = 2, rotation = 3, noise = 4, split = 5, init = 6, shuffle = 7 };

struct RunConfig {
    std::filesystem::path mnist_images;
    std::filesystem::path mnist_labels;
    std::size_t count = 0;

    scenario::ScenarioConfig scenario;
    dataset::PreprocessConfig preprocess;
    std::uint64_t noise_seed_stream = 0;

    classifier::TrainConfig train;
    double train_fraction = 0.95;
    std::uint64_t split_seed = 0;

    std::filesystem::path dataset_path;
    std::filesystem::path checkpoint_path;
    std::filesystem::path log_path;  ///< empty: checkpoint path + ".log.jsonl"
    std::filesystem::path report_path;

    std::uint64_t seed = 0;
    int threads = 0;  ///< 0 keeps the OpenMP default
};

/// Converts merged settings; malformed values raise ConfigError.
RunConfig build_run_config(const Settings& merged);

}  // namespace nlos::cli
