#include "nlos/dataset/generate.hpp"

#include "nlos/dataset/objects.hpp"
#include "nlos/error.hpp"
#include "nlos/random.hpp"

#include <atomic>
#include <limits>
#include <string>

namespace nlos::dataset {

scenario::Capture capture_object(const scenario::Scenario& scene, const LabeledImage& img,
                                 const PreprocessConfig& pre, std::uint64_t capture_index) {
    const auto& cfg = scene.config();
    const LabeledImage object = pre.binarize ? binarize(img, pre.binarize_threshold) : img;
    auto capture = scene.run(embed_object(object, cfg.grid, cfg.object_size), capture_index);
    capture.provenance.object_id = img.id;
    capture.provenance.label = img.label;
    return capture;
}

Dataset generate_dataset(const scenario::ScenarioConfig& cfg, const std::vector<LabeledImage>& images,
                         std::uint64_t seed_stream, const PreprocessConfig& pre, const ProgressFn& progress) {
    if (images.empty()) throw ConfigError("generate_dataset: no input images");
    pre.validate();
    const scenario::Scenario scene(cfg);

    Dataset ds;
    ds.scenario = cfg;
    ds.preprocess = pre;
    ds.seed_stream = seed_stream;
    ds.records.resize(images.size());

    const auto n = static_cast<std::int64_t>(images.size());
    std::atomic<std::int64_t> first_failure{std::numeric_limits<std::int64_t>::max()};
    std::vector<std::string> failure_message(images.size());
    std::atomic<std::size_t> done{0};

#pragma omp parallel for schedule(dynamic, 4)
    for (std::int64_t i = 0; i < n; ++i) {
        if (i > first_failure.load()) continue;
        try {
            const auto idx = static_cast<std::size_t>(i);
            auto capture = capture_object(scene, images[idx], pre, idx);
            auto& rec = ds.records[idx];
            rec.noise_seed = derive_seed(seed_stream, idx);
            rec.image = preprocess(capture.image, pre, rec.noise_seed);
            rec.label = images[idx].label;
            rec.provenance = std::move(capture.provenance);
        } catch (const std::exception& e) {
            failure_message[static_cast<std::size_t>(i)] = e.what();
            std::int64_t cur = first_failure.load();
            while (i < cur && !first_failure.compare_exchange_weak(cur, i)) {
            }
        }
        const auto d = ++done;
        if (progress) {
#pragma omp critical(nlos_progress)
            progress(d, images.size());
        }
    }

    if (const auto f = first_failure.load(); f != std::numeric_limits<std::int64_t>::max())
        throw Error("generation", "record " + std::to_string(f) + " failed: " + failure_message[static_cast<std::size_t>(f)]);
    return ds;
}

optics::IntensityImage regenerate_capture(const Dataset& ds, const SpeckleRecord& rec, const LabeledImage& source) {
    const scenario::Scenario scene(scenario::config_from_provenance(ds.scenario, rec.provenance));
    return capture_object(scene, source, ds.preprocess, rec.provenance.capture_index).image;
}

std::vector<std::size_t> class_counts(const Dataset& ds) {
    std::vector<std::size_t> counts(10, 0);
    for (const auto& r : ds.records)
        if (r.label >= 0 && r.label < 10) ++counts[static_cast<std::size_t>(r.label)];
    return counts;
}

}  // namespace nlos::dataset
