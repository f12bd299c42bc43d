#pragma once

#include "nlos/dataset/idx.hpp"
#include "nlos/dataset/preprocess.hpp"
#include "nlos/optics/grid.hpp"
#include "nlos/scenario/scenario.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace nlos::dataset {

/// One preprocessed capture with everything needed to regenerate it.
struct SpeckleRecord {
    optics::IntensityImage image;  ///< cropped, noised, normalized
    int label = 0;
    std::uint64_t noise_seed = 0;
    scenario::CaptureProvenance provenance;
};

struct Dataset {
    scenario::ScenarioConfig scenario;
    PreprocessConfig preprocess;
    std::uint64_t seed_stream = 0;
    std::vector<SpeckleRecord> records;

    int image_size() const { return preprocess.crop_size; }
};

/// Raw (pre-preprocessing) capture for one source image.
scenario::Capture capture_object(const scenario::Scenario& scene, const LabeledImage& img,
                                 const PreprocessConfig& pre, std::uint64_t capture_index);

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

/// One scenario run per input image, in parallel over records. Record i uses
/// capture index i and noise seed derive_seed(seed_stream, i). Any failure
/// aborts with an Error naming the lowest failing record index.
Dataset generate_dataset(const scenario::ScenarioConfig& cfg, const std::vector<LabeledImage>& images,
                         std::uint64_t seed_stream, const PreprocessConfig& pre = {},
                         const ProgressFn& progress = {});

/// Regenerates the raw capture of a stored record from its provenance.
optics::IntensityImage regenerate_capture(const Dataset& ds, const SpeckleRecord& rec, const LabeledImage& source);

/// Per-class counts of the records' labels.
std::vector<std::size_t> class_counts(const Dataset& ds);

}  // namespace nlos::dataset
