#include "nlos/cli/commands.hpp"

#include "nlos/classifier/checkpoint.hpp"
#include "nlos/cli/image_io.hpp"
#include "nlos/dataset/container.hpp"
#include "nlos/dataset/idx.hpp"
#include "nlos/error.hpp"
#include "nlos/optics/detection.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace nlos::cli {
namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const dataset::SpeckleRecord& record_at(const dataset::Dataset& ds, std::size_t id) {
    if (id >= ds.records.size())
        throw ConfigError("record id " + std::to_string(id) + " out of range (dataset has " +
                          std::to_string(ds.records.size()) + " records)");
    return ds.records[id];
}

optics::IntensityImage load_source_image(const StatsSource& src) {
    if (src.image && src.dataset) throw ConfigError("give either --image or --dataset, not both");
    if (src.image) return read_pgm(*src.image);
    if (!src.dataset) throw ConfigError("no input: give --dataset (with --record) or --image");
    const auto ds = dataset::load_dataset(*src.dataset);
    if (!src.record) throw ConfigError("--record is required with --dataset");
    return record_at(ds, *src.record).image;
}

void print_stats(std::ostream& out, const optics::SpeckleStats& s) {
    out << "pixels " << s.samples << "\n";
    out << "mean_intensity " << s.mean_intensity << "\n";
    out << "std_intensity " << s.std_intensity << "\n";
    if (s.contrast_defined())
        out << "contrast " << s.contrast << "\n";
    else
        out << "contrast undefined (zero mean intensity)\n";
}

}  // namespace

dataset::DatasetSplit dataset_split(const RunConfig& cfg, const dataset::Dataset& ds) {
    return dataset::split_train_test(ds.records.size(), cfg.train_fraction, cfg.split_seed);
}

dataset::Dataset cmd_generate(const RunConfig& cfg, const std::filesystem::path& out_path, Console& io) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto digits = dataset::load_idx(cfg.mnist_images, cfg.mnist_labels, cfg.count);
    if (digits.size() < cfg.count)
        throw ConfigError("requested " + std::to_string(cfg.count) + " digits but the IDX files hold " +
                          std::to_string(digits.size()));

    dataset::ProgressFn progress;
    if (io.verbose) {
        progress = [&io, step = std::max<std::size_t>(1, digits.size() / 10)](std::size_t done, std::size_t total) {
            if (done % step == 0 || done == total) io.err << "generated " << done << "/" << total << "\n";
        };
        for (const auto& w : scenario::Scenario(cfg.scenario).warnings()) io.err << "warning: " << w << "\n";
    }
    auto ds = dataset::generate_dataset(cfg.scenario, digits, cfg.noise_seed_stream, cfg.preprocess, progress);
    dataset::save_dataset(ds, out_path);

    io.out << "records " << ds.records.size() << " (" << scenario::to_string(cfg.scenario.kind) << ", "
           << ds.image_size() << "x" << ds.image_size() << ") -> " << out_path.string() << "\n";
    io.out << "class counts";
    const auto counts = dataset::class_counts(ds);
    for (std::size_t c = 0; c < counts.size(); ++c) io.out << " " << c << ":" << counts[c];
    io.out << "\n" << "elapsed " << std::fixed << std::setprecision(2) << seconds_since(t0) << " s\n"
           << std::defaultfloat;
    return ds;
}

classifier::TrainResult cmd_train(const RunConfig& cfg, const std::filesystem::path& dataset_path,
                                  const std::filesystem::path& checkpoint_path,
                                  const std::filesystem::path& log_path, Console& io) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto ds = dataset::load_dataset(dataset_path);
    const auto split = dataset_split(cfg, ds);
    const auto train_set = classifier::make_image_set(ds, split.train);
    const auto test_set = classifier::make_image_set(ds, split.test);

    std::ofstream log(log_path, std::ios::trunc);
    if (!log) throw IoError("cannot write " + log_path.string());
    auto on_epoch = [&](const classifier::EpochLog& e) {
        nlohmann::json line{{"epoch", e.epoch}, {"loss", e.loss}, {"train_acc", e.train_acc}};
        line["test_acc"] = e.test_acc ? nlohmann::json(*e.test_acc) : nlohmann::json(nullptr);
        log << line.dump() << "\n" << std::flush;
        if (io.verbose) io.err << line.dump() << "\n";
    };
    auto result = classifier::train(train_set, cfg.train, &test_set, on_epoch);
    if (!log) throw IoError("failed writing " + log_path.string());
    classifier::save_params(result.params, checkpoint_path);

    const auto report = classifier::evaluate(result.params, test_set);
    std::size_t correct = 0;
    for (int c = 0; c < classifier::kClasses; ++c) correct += report.confusion[c][c];
    io.out << "trained " << cfg.train.epochs << " epochs on " << train_set.count() << " records -> "
           << checkpoint_path.string() << "\n";
    io.out << "final test accuracy " << std::fixed << std::setprecision(4) << report.accuracy << " (" << correct << "/"
           << report.total << ")\n";
    io.out << "elapsed " << std::setprecision(2) << seconds_since(t0) << " s\n" << std::defaultfloat;
    return result;
}

nlohmann::json report_to_json(const classifier::EvalReport& report) {
    nlohmann::json j;
    j["accuracy"] = report.accuracy;
    j["total"] = report.total;
    auto confusion = nlohmann::json::array();
    auto counts = nlohmann::json::array();
    auto per_class = nlohmann::json::array();
    for (int c = 0; c < classifier::kClasses; ++c) {
        confusion.push_back(report.confusion[c]);
        counts.push_back(report.class_count(c));
        const double a = report.per_class_accuracy[c];
        per_class.push_back(std::isnan(a) ? nlohmann::json(nullptr) : nlohmann::json(a));
    }
    j["confusion"] = confusion;
    j["class_counts"] = counts;
    j["per_class_accuracy"] = per_class;
    return j;
}

classifier::EvalReport cmd_eval(const RunConfig& cfg, const std::filesystem::path& checkpoint_path,
                                const std::filesystem::path& dataset_path, const std::filesystem::path& report_path,
                                bool all_records, Console& io) {
    const auto params = classifier::load_params(checkpoint_path);
    const auto ds = dataset::load_dataset(dataset_path);
    const auto set = all_records ? classifier::make_image_set(ds)
                                 : classifier::make_image_set(ds, dataset_split(cfg, ds).test);
    const auto report = classifier::evaluate(params, set);

    auto j = report_to_json(report);
    j["subset"] = all_records ? "all" : "test";
    j["split_seed"] = cfg.split_seed;
    j["train_fraction"] = cfg.train_fraction;
    std::ofstream out(report_path, std::ios::trunc);
    if (!out) throw IoError("cannot write " + report_path.string());
    out << j.dump(2) << "\n";
    if (!out) throw IoError("failed writing " + report_path.string());

    io.out << "accuracy " << std::fixed << std::setprecision(4) << report.accuracy << std::defaultfloat << " on "
           << report.total << " " << (all_records ? "records" : "test records") << "\n";
    io.out << "confusion (rows: true 0-9, columns: predicted 0-9)\n";
    for (int r = 0; r < classifier::kClasses; ++r) {
        for (int c = 0; c < classifier::kClasses; ++c) io.out << std::setw(5) << report.confusion[r][c];
        io.out << "\n";
    }
    io.out << "report -> " << report_path.string() << "\n";
    return report;
}

std::string histogram_csv(const optics::SpeckleStats& stats) {
    std::ostringstream os;
    os << "bin_center,count,density\n";
    os.precision(10);
    for (std::size_t i = 0; i < stats.histogram.size(); ++i)
        os << stats.bin_center(i) << "," << static_cast<std::uint64_t>(stats.histogram[i]) << "," << stats.density(i)
           << "\n";
    return os.str();
}

optics::SpeckleStats cmd_stats(const StatsSource& src, const std::filesystem::path& csv_path, Console& io) {
    optics::SpeckleStats stats;
    if (src.dataset && !src.record && !src.image) {
        // every record: per-record contrast summary and a pooled histogram
        const auto ds = dataset::load_dataset(*src.dataset);
        if (ds.records.empty()) throw ConfigError("dataset has no records");
        double sum = 0, lo = INFINITY, hi = -INFINITY, mean_sum = 0, std_sum = 0;
        std::size_t defined = 0;
        for (const auto& r : ds.records) {
            const auto s = optics::speckle_statistics(r.image);
            if (stats.histogram.empty()) {
                stats.histogram.assign(s.histogram.size(), 0.0);
                stats.bin_width = s.bin_width;
            }
            for (std::size_t i = 0; i < s.histogram.size(); ++i) stats.histogram[i] += s.histogram[i];
            stats.samples += s.samples;
            mean_sum += s.mean_intensity;
            std_sum += s.std_intensity;
            if (!s.contrast_defined()) continue;
            ++defined;
            sum += s.contrast;
            lo = std::min(lo, s.contrast);
            hi = std::max(hi, s.contrast);
        }
        const double n = static_cast<double>(ds.records.size());
        stats.mean_intensity = mean_sum / n;
        stats.std_intensity = std_sum / n;
        stats.contrast = defined ? sum / static_cast<double>(defined) : NAN;
        io.out << "records " << ds.records.size() << "\n";
        io.out << "mean_intensity " << stats.mean_intensity << "\n";
        io.out << "mean_std_intensity " << stats.std_intensity << "\n";
        if (defined)
            io.out << "mean_contrast " << stats.contrast << " (min " << lo << ", max " << hi << ")\n";
        else
            io.out << "mean_contrast undefined\n";
    } else {
        stats = optics::speckle_statistics(load_source_image(src));
        print_stats(io.out, stats);
    }
    if (!csv_path.empty()) {
        const auto csv = histogram_csv(stats);
        write_bytes(csv_path, {csv.begin(), csv.end()});
        io.out << "histogram -> " << csv_path.string() << "\n";
    }
    return stats;
}

void cmd_render(const StatsSource& src, const std::filesystem::path& out_path, Console& io) {
    if (out_path.empty()) throw ConfigError("render needs an output path (--out)");
    const auto image = load_source_image(src);
    write_image(out_path, image);
    io.out << "rendered " << image.grid.nx << "x" << image.grid.ny << " -> " << out_path.string() << "\n";
}

}  // namespace nlos::cli
