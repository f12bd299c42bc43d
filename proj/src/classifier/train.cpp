#include "nlos/classifier/train.hpp"

#include "nlos/dataset/generate.hpp"
#include "nlos/error.hpp"
#include "nlos/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nlos::classifier {

ImageSet make_image_set(const dataset::Dataset& ds, std::span<const std::size_t> indices) {
    ImageSet set;
    set.size = ds.image_size();
    const std::size_t px = static_cast<std::size_t>(set.size) * set.size;
    set.pixels.reserve(indices.size() * px);
    set.labels.reserve(indices.size());
    for (std::size_t idx : indices) {
        if (idx >= ds.records.size()) throw ShapeError("record index " + std::to_string(idx) + " out of range");
        const auto& rec = ds.records[idx];
        if (rec.image.values.size() != px) throw ShapeError("record " + std::to_string(idx) + " is not " +
                                                            std::to_string(set.size) + "x" + std::to_string(set.size));
        for (double v : rec.image.values) set.pixels.push_back(static_cast<float>(v));
        set.labels.push_back(rec.label);
    }
    return set;
}

ImageSet make_image_set(const dataset::Dataset& ds) {
    std::vector<std::size_t> all(ds.records.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return make_image_set(ds, all);
}

std::string to_string(OptimizerKind k) { return k == OptimizerKind::adam ? "adam" : "sgd"; }

OptimizerKind parse_optimizer(const std::string& name) {
    if (name == "adam") return OptimizerKind::adam;
    if (name == "sgd") return OptimizerKind::sgd;
    throw ConfigError("unknown optimizer '" + name + "' (expected adam or sgd)");
}

void TrainConfig::validate() const {
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (epochs < 0) throw ConfigError("epochs must be >= 0");
    if (!(learning_rate > 0) || !std::isfinite(learning_rate)) throw ConfigError("learning_rate must be > 0");
}

namespace {

class Optimizer {
public:
    Optimizer(const SimpleNetParams<float>& shape, const TrainConfig& cfg) : cfg_(cfg) {
        if (cfg.optimizer == OptimizerKind::adam) {
            m_ = zero_params<float>(shape.input_size);
            v_ = zero_params<float>(shape.input_size);
        }
    }

    void step(SimpleNetParams<float>& params, const SimpleNetParams<float>& grads) {
        const float lr = static_cast<float>(cfg_.learning_rate);
        auto p = params.tensors();
        auto g = grads.tensors();
        if (cfg_.optimizer == OptimizerKind::sgd) {
            for (std::size_t t = 0; t < p.size(); ++t)
                for (std::size_t i = 0; i < p[t].size(); ++i) p[t][i] -= lr * g[t][i];
            return;
        }
        ++step_;
        constexpr float beta1 = 0.9f, beta2 = 0.999f, eps = 1e-8f;
        const float c1 = 1.0f / static_cast<float>(1.0 - std::pow(0.9, step_));
        const float c2 = 1.0f / static_cast<float>(1.0 - std::pow(0.999, step_));
        auto m = m_.tensors();
        auto v = v_.tensors();
        for (std::size_t t = 0; t < p.size(); ++t) {
            float* pt = p[t].data();
            float* mt = m[t].data();
            float* vt = v[t].data();
            const float* gt = g[t].data();
            for (std::size_t i = 0, n = p[t].size(); i < n; ++i) {
                mt[i] = beta1 * mt[i] + (1.0f - beta1) * gt[i];
                vt[i] = beta2 * vt[i] + (1.0f - beta2) * gt[i] * gt[i];
                pt[i] -= lr * (mt[i] * c1) / (std::sqrt(vt[i] * c2) + eps);
            }
        }
    }

private:
    TrainConfig cfg_;
    SimpleNetParams<float> m_, v_;
    long step_ = 0;
};

bool all_finite(const SimpleNetParams<float>& p) {
    for (auto t : p.tensors())
        for (float v : t)
            if (!std::isfinite(v)) return false;
    return true;
}

}  // namespace

TrainResult train(SimpleNetParams<float> params, const ImageSet& train_set, const TrainConfig& cfg,
                  const ImageSet* test_set, const EpochCallback& on_epoch) {
    cfg.validate();
    if (train_set.count() == 0) throw ConfigError("training split is empty");
    if (train_set.size != params.input_size)
        throw ShapeError("training images are " + std::to_string(train_set.size) + " px, network expects " +
                         std::to_string(params.input_size));

    const std::size_t n = train_set.count();
    const std::size_t px = static_cast<std::size_t>(train_set.size) * train_set.size;
    Optimizer opt(params, cfg);
    TrainResult result;

    std::vector<std::size_t> order(n);
    std::vector<float> batch_pixels;
    std::vector<int> batch_labels;
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        Engine eng(derive_seed(cfg.shuffle_seed, static_cast<std::uint64_t>(epoch)));
        for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[uniform_below(eng, i)]);

        double loss_sum = 0.0;
        std::size_t correct = 0;
        for (std::size_t start = 0; start < n; start += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t end = std::min(n, start + static_cast<std::size_t>(cfg.batch_size));
            batch_pixels.resize((end - start) * px);
            batch_labels.resize(end - start);
            for (std::size_t b = start; b < end; ++b) {
                auto img = train_set.image(order[b]);
                std::copy(img.begin(), img.end(), batch_pixels.begin() + static_cast<std::ptrdiff_t>((b - start) * px));
                batch_labels[b - start] = train_set.labels[order[b]];
            }
            auto lg = loss_and_gradients<float>(params, batch_pixels, batch_labels);
            if (!std::isfinite(lg.loss)) throw TrainingError("training loss became non-finite", epoch);
            loss_sum += static_cast<double>(lg.loss) * static_cast<double>(end - start);
            for (std::size_t b = 0; b < end - start; ++b)
                if (argmax_class(std::span<const float>(lg.logits).subspan(b * kClasses, kClasses)) == batch_labels[b])
                    ++correct;
            opt.step(params, lg.gradients);
        }
        if (!all_finite(params)) throw TrainingError("parameters became non-finite", epoch);

        EpochLog entry;
        entry.epoch = epoch;
        entry.loss = loss_sum / static_cast<double>(n);
        entry.train_acc = static_cast<double>(correct) / static_cast<double>(n);
        if (test_set && test_set->count() > 0) {
            const auto pred = predict(params, *test_set);
            std::size_t hits = 0;
            for (std::size_t i = 0; i < pred.size(); ++i) hits += pred[i] == test_set->labels[i];
            entry.test_acc = static_cast<double>(hits) / static_cast<double>(pred.size());
        }
        result.log.push_back(entry);
        if (on_epoch) on_epoch(entry);
    }
    result.params = std::move(params);
    return result;
}

TrainResult train(const ImageSet& train_set, const TrainConfig& cfg, const ImageSet* test_set,
                  const EpochCallback& on_epoch) {
    return train(init_params<float>(train_set.size, cfg.init_seed), train_set, cfg, test_set, on_epoch);
}

std::vector<int> predict(const SimpleNetParams<float>& params, const ImageSet& set) {
    if (set.count() > 0 && set.size != params.input_size)
        throw ShapeError("images are " + std::to_string(set.size) + " px, network expects " +
                         std::to_string(params.input_size));
    constexpr std::size_t chunk = 64;
    const std::size_t px = static_cast<std::size_t>(set.size) * set.size;
    std::vector<int> out;
    out.reserve(set.count());
    for (std::size_t start = 0; start < set.count(); start += chunk) {
        const std::size_t end = std::min(set.count(), start + chunk);
        std::span<const float> imgs(set.pixels.data() + start * px, (end - start) * px);
        const auto cache = forward<float>(params, imgs, static_cast<int>(end - start));
        for (std::size_t b = 0; b < end - start; ++b)
            out.push_back(argmax_class(std::span<const float>(cache.logits).subspan(b * kClasses, kClasses)));
    }
    return out;
}

}  // namespace nlos::classifier
