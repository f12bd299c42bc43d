#pragma once

#include "nlos/classifier/simplenet.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nlos::dataset {
struct Dataset;
}

namespace nlos::classifier {

/// Square single-channel images packed for the network.
struct ImageSet {
    int size = 0;
    std::vector<float> pixels;  ///< [count, size, size]
    std::vector<int> labels;

    std::size_t count() const { return labels.size(); }
    std::span<const float> image(std::size_t i) const {
        const std::size_t px = static_cast<std::size_t>(size) * size;
        return {pixels.data() + i * px, px};
    }
};

/// Records of `ds` at `indices`, in that order.
ImageSet make_image_set(const dataset::Dataset& ds, std::span<const std::size_t> indices);
/// Every record of `ds`.
ImageSet make_image_set(const dataset::Dataset& ds);

enum class OptimizerKind { adam, sgd };

std::string to_string(OptimizerKind k);
OptimizerKind parse_optimizer(const std::string& name);

struct TrainConfig {
    int batch_size = 32;
    int epochs = 10;
    double learning_rate = 1e-3;
    OptimizerKind optimizer = OptimizerKind::adam;
    std::uint64_t init_seed = 1;
    std::uint64_t shuffle_seed = 2;

    void validate() const;
};

struct EpochLog {
    int epoch = 0;          ///< 1-based
    double loss = 0;        ///< mean training loss over the epoch's batches
    double train_acc = 0;   ///< accuracy of the in-epoch predictions
    std::optional<double> test_acc;
};

struct TrainResult {
    SimpleNetParams<float> params;
    std::vector<EpochLog> log;
};

using EpochCallback = std::function<void(const EpochLog&)>;

/// Mini-batch training. Epoch e visits the training set in the order of a
/// Fisher-Yates shuffle seeded with derive_seed(shuffle_seed, e). When
/// `test` is given its accuracy is logged after every epoch.
/// Throws TrainingError when the loss becomes non-finite.
TrainResult train(SimpleNetParams<float> params, const ImageSet& train_set, const TrainConfig& cfg,
                  const ImageSet* test_set = nullptr, const EpochCallback& on_epoch = {});

/// Initializes from cfg.init_seed, then trains.
TrainResult train(const ImageSet& train_set, const TrainConfig& cfg, const ImageSet* test_set = nullptr,
                  const EpochCallback& on_epoch = {});

/// Argmax predictions for every image of the set.
std::vector<int> predict(const SimpleNetParams<float>& params, const ImageSet& set);

}  // namespace nlos::classifier
