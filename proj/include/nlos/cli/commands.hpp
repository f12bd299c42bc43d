#pragma once

#include "nlos/classifier/evaluate.hpp"
#include "nlos/cli/config.hpp"
#include "nlos/dataset/generate.hpp"
#include "nlos/dataset/split.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

namespace nlos::cli {

struct Console {
    std::ostream& out;
    std::ostream& err;
    bool verbose = false;
};

/// Loads the configured digits and writes an SPKL1 dataset to `out_path`.
dataset::Dataset cmd_generate(const RunConfig& cfg, const std::filesystem::path& out_path, Console& io);

/// Splits the dataset, trains, writes the SNET1 checkpoint and a JSON-lines log.
classifier::TrainResult cmd_train(const RunConfig& cfg, const std::filesystem::path& dataset_path,
                                  const std::filesystem::path& checkpoint_path,
                                  const std::filesystem::path& log_path, Console& io);

/// Evaluates on the test split (or every record) and writes a JSON report.
classifier::EvalReport cmd_eval(const RunConfig& cfg, const std::filesystem::path& checkpoint_path,
                                const std::filesystem::path& dataset_path, const std::filesystem::path& report_path,
                                bool all_records, Console& io);

struct StatsSource {
    std::optional<std::filesystem::path> dataset;
    std::optional<std::size_t> record;
    std::optional<std::filesystem::path> image;
};

/// Prints speckle statistics; writes the histogram CSV when csv_path is non-empty.
optics::SpeckleStats cmd_stats(const StatsSource& src, const std::filesystem::path& csv_path, Console& io);

/// Writes an 8-bit PGM or PNG of a dataset record or of a PGM image.
void cmd_render(const StatsSource& src, const std::filesystem::path& out_path, Console& io);

/// The split shared by train and eval.
dataset::DatasetSplit dataset_split(const RunConfig& cfg, const dataset::Dataset& ds);

nlohmann::json report_to_json(const classifier::EvalReport& report);
std::string histogram_csv(const optics::SpeckleStats& stats);

/// Entry point of the command-line tool; returns the process exit code.
int run_app(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Exit code for an error kind ("config", "parse", ...).
int exit_code_for(const std::string& kind);

}  // namespace nlos::cli
