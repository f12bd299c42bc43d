#include "nlos/cli/commands.hpp"
#include "nlos/error.hpp"
#include "nlos/version.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <algorithm>
#include <ostream>

namespace nlos::cli {

int exit_code_for(const std::string& kind) {
    if (kind == "usage") return 2;
    if (kind == "config") return 3;
    if (kind == "parse") return 4;
    if (kind == "io") return 5;
    if (kind == "shape" || kind == "domain" || kind == "geometry" || kind == "degenerate-input") return 6;
    if (kind == "corrupt-checkpoint") return 7;
    if (kind == "training") return 8;
    if (kind == "generation") return 9;
    return 1;
}

namespace {

std::string one_line(std::string s) {
    std::replace(s.begin(), s.end(), '\n', ' ');
    while (!s.empty() && s.back() == ' ') s.pop_back();
    return s;
}

int report_error(std::ostream& err, const std::string& kind, const std::string& message) {
    err << "error: " << kind << ": " << one_line(message) << "\n";
    return exit_code_for(kind);
}

// A command-line value that is copied into the settings map only when given.
struct Flag {
    CLI::Option* option = nullptr;
    std::string key;
    std::string value;
};

class Flags {
public:
    void add(CLI::App* app, const std::string& name, const std::string& key, const std::string& help) {
        auto& f = flags_.emplace_back(std::make_unique<Flag>());
        f->key = key;
        f->option = app->add_option(name, f->value, help);
    }
    CLI::Option* last() { return flags_.back()->option; }

    Settings collect() const {
        Settings s;
        for (const auto& f : flags_)
            if (f->option->count() > 0) s[f->key] = f->value;
        return s;
    }

private:
    std::vector<std::unique_ptr<Flag>> flags_;
};

const std::vector<std::string> kScenarioNames{"one-wall", "same-side", "rotating-wall", "two-walls"};

}  // namespace

int run_app(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Coherent speckle simulator for non-line-of-sight digit recognition", "nlos"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", nlos::kVersionTag);

    std::string config_path;
    std::string out_path;
    std::vector<std::string> overrides;
    bool verbose = false;
    Flags flags;
    app.add_option("--config", config_path, "INI configuration file")->check(CLI::ExistingFile);
    flags.add(&app, "--seed", "run.seed", "master seed; unset seeds are derived from it");
    flags.add(&app, "--threads", "run.threads", "OpenMP threads (0 keeps the default)");
    app.add_option("--out", out_path, "output path of the subcommand");
    app.add_option("--set", overrides, "override any setting, e.g. --set scenario.nx=128");
    app.add_flag("-v,--verbose", verbose, "progress on stderr");

    auto* gen = app.add_subcommand("generate", "simulate speckle captures of digits into a dataset");
    flags.add(gen, "--scenario", "scenario.kind", "one-wall | same-side | rotating-wall | two-walls");
    flags.last()->check(CLI::IsMember(kScenarioNames));
    flags.add(gen, "--count", "data.count", "number of digits");
    flags.add(gen, "--images", "data.images", "IDX image file");
    flags.add(gen, "--labels", "data.labels", "IDX label file");

    auto* tr = app.add_subcommand("train", "train the classifier on a dataset");
    flags.add(tr, "--dataset", "output.dataset", "SPKL1 dataset");
    flags.add(tr, "--epochs", "train.epochs", "training epochs");
    flags.add(tr, "--batch-size", "train.batch_size", "mini-batch size");
    flags.add(tr, "--learning-rate", "train.learning_rate", "step size");
    flags.add(tr, "--optimizer", "train.optimizer", "adam | sgd");
    flags.last()->check(CLI::IsMember({"adam", "sgd"}));
    flags.add(tr, "--log", "output.log", "JSON-lines training log");

    auto* ev = app.add_subcommand("eval", "evaluate a checkpoint on the test split");
    flags.add(ev, "--checkpoint", "output.checkpoint", "SNET1 checkpoint");
    flags.add(ev, "--dataset", "output.dataset", "SPKL1 dataset");
    bool all_records = false;
    ev->add_flag("--all", all_records, "evaluate on every record instead of the test split");

    StatsSource src;
    std::string csv_path;
    auto add_source = [&src](CLI::App* sub) {
        sub->add_option("--dataset", src.dataset, "SPKL1 dataset");
        sub->add_option("--record", src.record, "record id");
        sub->add_option("--image", src.image, "PGM image")->check(CLI::ExistingFile);
    };
    auto* st = app.add_subcommand("stats", "speckle statistics of a record, a dataset or an image");
    add_source(st);
    st->add_option("--csv", csv_path, "histogram CSV output");
    auto* rd = app.add_subcommand("render", "write a record or image as 8-bit PGM or PNG");
    add_source(rd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        report_error(err, "usage", e.what());
        err << "run 'nlos --help' for usage\n";
        return exit_code_for("usage");
    }

    try {
        Settings cli = flags.collect();
        for (const auto& o : overrides) {
            const auto eq = o.find('=');
            if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value, got '" + o + "'");
            cli[o.substr(0, eq)] = o.substr(eq + 1);
        }
        const Settings file = config_path.empty() ? Settings{} : read_config_file(config_path);
        const RunConfig cfg = build_run_config(merge_settings(file, cli));
        if (cfg.threads > 0) omp_set_num_threads(cfg.threads);

        Console io{out, err, verbose};
        if (gen->parsed()) {
            cmd_generate(cfg, out_path.empty() ? cfg.dataset_path : std::filesystem::path(out_path), io);
        } else if (tr->parsed()) {
            const std::filesystem::path ckpt = out_path.empty() ? cfg.checkpoint_path : std::filesystem::path(out_path);
            const std::filesystem::path log = cfg.log_path.empty() ? std::filesystem::path(ckpt.string() + ".log.jsonl")
                                                                   : cfg.log_path;
            cmd_train(cfg, cfg.dataset_path, ckpt, log, io);
        } else if (ev->parsed()) {
            cmd_eval(cfg, cfg.checkpoint_path, cfg.dataset_path,
                     out_path.empty() ? cfg.report_path : std::filesystem::path(out_path), all_records, io);
        } else if (st->parsed()) {
            cmd_stats(src, csv_path.empty() ? out_path : csv_path, io);
        } else if (rd->parsed()) {
            cmd_render(src, out_path, io);
        }
    } catch (const Error& e) {
        return report_error(err, e.kind(), e.what());
    } catch (const std::exception& e) {
        return report_error(err, "internal", e.what());
    }
    return 0;
}

}  // namespace nlos::cli
