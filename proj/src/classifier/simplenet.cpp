#include "nlos/classifier/simplenet.hpp"

#include "nlos/classifier/kernels.hpp"
#include "nlos/error.hpp"
#include "nlos/random.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nlos::classifier {

std::array<int, 5> stage_sizes(int input_size) {
    if (input_size < kMinInputSize)
        throw ConfigError("input of " + std::to_string(input_size) + " px is too small for four pooling stages (need >= " +
                          std::to_string(kMinInputSize) + ")");
    std::array<int, 5> s{input_size, 0, 0, 0, 0};
    for (int i = 1; i < 5; ++i) s[i] = s[i - 1] / 2;
    return s;
}

int flatten_dim_for(int input_size) {
    const int side = stage_sizes(input_size)[4];
    return kConvChannels[3] * side * side;
}

std::vector<TensorInfo> tensor_layout(int input_size) {
    const auto flat = static_cast<std::uint32_t>(flatten_dim_for(input_size));
    std::vector<TensorInfo> out;
    int in_c = 1;
    for (int l = 0; l < 4; ++l) {
        const auto k = static_cast<std::uint32_t>(kConvChannels[l]);
        const std::string name = "conv" + std::to_string(l + 1);
        out.push_back({name + ".weight", {k, static_cast<std::uint32_t>(in_c), 3, 3}});
        out.push_back({name + ".bias", {k}});
        in_c = kConvChannels[l];
    }
    out.push_back({"fc1.weight", {flat, kHiddenUnits}});
    out.push_back({"fc1.bias", {kHiddenUnits}});
    out.push_back({"fc2.weight", {kHiddenUnits, kClasses}});
    out.push_back({"fc2.bias", {kClasses}});
    return out;
}

template <typename T>
std::vector<std::span<T>> SimpleNetParams<T>::tensors() {
    std::vector<std::span<T>> out;
    for (auto& c : conv) {
        out.emplace_back(c.weights);
        out.emplace_back(c.bias);
    }
    out.emplace_back(fc1.weights);
    out.emplace_back(fc1.bias);
    out.emplace_back(fc2.weights);
    out.emplace_back(fc2.bias);
    return out;
}

template <typename T>
std::vector<std::span<const T>> SimpleNetParams<T>::tensors() const {
    std::vector<std::span<const T>> out;
    for (auto& c : conv) {
        out.emplace_back(c.weights);
        out.emplace_back(c.bias);
    }
    out.emplace_back(fc1.weights);
    out.emplace_back(fc1.bias);
    out.emplace_back(fc2.weights);
    out.emplace_back(fc2.bias);
    return out;
}

template <typename T>
template <typename U>
SimpleNetParams<U> SimpleNetParams<T>::cast() const {
    SimpleNetParams<U> out = zero_params<U>(input_size);
    auto dst = out.tensors();
    auto src = tensors();
    for (std::size_t t = 0; t < src.size(); ++t)
        std::transform(src[t].begin(), src[t].end(), dst[t].begin(), [](T v) { return static_cast<U>(v); });
    return out;
}

template <typename T>
SimpleNetParams<T> zero_params(int input_size) {
    SimpleNetParams<T> p;
    p.input_size = input_size;
    int in_c = 1;
    for (int l = 0; l < 4; ++l) {
        auto& c = p.conv[l];
        c.in_channels = in_c;
        c.out_channels = kConvChannels[l];
        c.weights.assign(static_cast<std::size_t>(c.out_channels) * in_c * 9, T(0));
        c.bias.assign(static_cast<std::size_t>(c.out_channels), T(0));
        in_c = c.out_channels;
    }
    p.fc1.inputs = flatten_dim_for(input_size);
    p.fc1.outputs = kHiddenUnits;
    p.fc1.weights.assign(static_cast<std::size_t>(p.fc1.inputs) * kHiddenUnits, T(0));
    p.fc1.bias.assign(kHiddenUnits, T(0));
    p.fc2.inputs = kHiddenUnits;
    p.fc2.outputs = kClasses;
    p.fc2.weights.assign(static_cast<std::size_t>(kHiddenUnits) * kClasses, T(0));
    p.fc2.bias.assign(kClasses, T(0));
    return p;
}

template <typename T>
SimpleNetParams<T> init_params(int input_size, std::uint64_t seed) {
    auto p = zero_params<T>(input_size);
    NormalSource normal(seed);
    auto fill = [&](std::vector<T>& w, int fan_in) {
        const double std_dev = std::sqrt(2.0 / fan_in);
        for (auto& v : w) v = static_cast<T>(std_dev * normal());
    };
    for (auto& c : p.conv) fill(c.weights, c.in_channels * 9);
    fill(p.fc1.weights, p.fc1.inputs);
    fill(p.fc2.weights, p.fc2.inputs);
    return p;
}

template <typename T>
ForwardCache<T> forward(const SimpleNetParams<T>& params, std::span<const T> images, int batch) {
    const auto sizes = stage_sizes(params.input_size);
    const std::size_t pixels = static_cast<std::size_t>(params.input_size) * params.input_size;
    if (batch < 1 || images.size() != pixels * static_cast<std::size_t>(batch))
        throw ShapeError("forward: expected " + std::to_string(batch) + " images of " + std::to_string(params.input_size) +
                         "x" + std::to_string(params.input_size) + " pixels");

    ForwardCache<T> cache;
    cache.batch = batch;
    cache.conv_input[0].assign(images.begin(), images.end());
    for (int l = 0; l < 4; ++l) {
        const auto& layer = params.conv[l];
        const int s = sizes[l];
        const std::size_t act = static_cast<std::size_t>(batch) * layer.out_channels * s * s;
        auto& a = cache.conv_activation[l];
        a.resize(act);
        kernels::conv3x3_forward(cache.conv_input[l].data(), batch, layer.in_channels, s, s, layer.weights.data(),
                                 layer.bias.data(), layer.out_channels, a.data());
        kernels::relu_forward(a.data(), a.size());

        const std::size_t pooled = static_cast<std::size_t>(batch) * layer.out_channels * sizes[l + 1] * sizes[l + 1];
        auto& out = l < 3 ? cache.conv_input[l + 1] : cache.flat;
        out.resize(pooled);
        cache.pool_argmax[l].resize(pooled);
        kernels::maxpool2x2_forward(a.data(), batch, layer.out_channels, s, s, out.data(), cache.pool_argmax[l].data());
    }

    cache.hidden.resize(static_cast<std::size_t>(batch) * kHiddenUnits);
    kernels::dense_forward(cache.flat.data(), batch, params.fc1.inputs, params.fc1.weights.data(), params.fc1.bias.data(),
                           kHiddenUnits, cache.hidden.data());
    kernels::relu_forward(cache.hidden.data(), cache.hidden.size());
    cache.logits.resize(static_cast<std::size_t>(batch) * kClasses);
    kernels::dense_forward(cache.hidden.data(), batch, kHiddenUnits, params.fc2.weights.data(), params.fc2.bias.data(),
                           kClasses, cache.logits.data());
    return cache;
}

template <typename T>
T softmax_cross_entropy(std::span<const T> logits, std::span<const int> labels) {
    const std::size_t n = labels.size();
    if (logits.size() != n * kClasses) throw ShapeError("softmax_cross_entropy: logits/labels size mismatch");
    double total = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
        if (labels[s] < 0 || labels[s] >= kClasses) throw DomainError("label " + std::to_string(labels[s]) + " outside 0..9");
        const T* z = logits.data() + s * kClasses;
        const T zmax = *std::max_element(z, z + kClasses);
        double sum = 0.0;
        for (int c = 0; c < kClasses; ++c) sum += std::exp(static_cast<double>(z[c] - zmax));
        total += std::log(sum) - static_cast<double>(z[labels[s]] - zmax);
    }
    return static_cast<T>(total / static_cast<double>(n));
}

template <typename T>
LossAndGradients<T> loss_and_gradients(const SimpleNetParams<T>& params, std::span<const T> images,
                                       std::span<const int> labels) {
    const int batch = static_cast<int>(labels.size());
    for (int lbl : labels)
        if (lbl < 0 || lbl >= kClasses) throw DomainError("label " + std::to_string(lbl) + " outside 0..9");
    const auto cache = forward(params, images, batch);
    const auto sizes = stage_sizes(params.input_size);

    LossAndGradients<T> out;
    out.loss = softmax_cross_entropy<T>(cache.logits, labels);
    auto& g = out.gradients;
    g = zero_params<T>(params.input_size);

    // d(mean CE)/d logits = (softmax - onehot) / batch
    std::vector<T> grad_logits(cache.logits.size());
    for (int s = 0; s < batch; ++s) {
        const T* z = cache.logits.data() + static_cast<std::size_t>(s) * kClasses;
        T* gz = grad_logits.data() + static_cast<std::size_t>(s) * kClasses;
        const T zmax = *std::max_element(z, z + kClasses);
        T sum = 0;
        for (int c = 0; c < kClasses; ++c) {
            gz[c] = std::exp(z[c] - zmax);
            sum += gz[c];
        }
        for (int c = 0; c < kClasses; ++c) gz[c] = (gz[c] / sum - (c == labels[s] ? T(1) : T(0))) / static_cast<T>(batch);
    }

    std::vector<T> grad_hidden(cache.hidden.size());
    kernels::dense_backward(cache.hidden.data(), batch, kHiddenUnits, params.fc2.weights.data(), kClasses,
                            grad_logits.data(), grad_hidden.data(), g.fc2.weights.data(), g.fc2.bias.data());
    kernels::relu_backward(cache.hidden.data(), grad_hidden.data(), grad_hidden.size());
    std::vector<T> grad_pooled(cache.flat.size());
    kernels::dense_backward(cache.flat.data(), batch, params.fc1.inputs, params.fc1.weights.data(), kHiddenUnits,
                            grad_hidden.data(), grad_pooled.data(), g.fc1.weights.data(), g.fc1.bias.data());

    std::vector<T> grad_act;
    for (int l = 3; l >= 0; --l) {
        const auto& layer = params.conv[l];
        const int s = sizes[l];
        grad_act.resize(cache.conv_activation[l].size());
        kernels::maxpool2x2_backward(grad_pooled.data(), cache.pool_argmax[l].data(), batch, layer.out_channels, s, s,
                                     grad_act.data());
        kernels::relu_backward(cache.conv_activation[l].data(), grad_act.data(), grad_act.size());
        std::vector<T> grad_in(l > 0 ? cache.conv_input[l].size() : 0);
        kernels::conv3x3_backward(cache.conv_input[l].data(), batch, layer.in_channels, s, s, layer.weights.data(),
                                  layer.out_channels, grad_act.data(), l > 0 ? grad_in.data() : nullptr,
                                  g.conv[l].weights.data(), g.conv[l].bias.data());
        grad_pooled = std::move(grad_in);
    }
    out.logits = cache.logits;
    return out;
}

int argmax_class(std::span<const float> logits) {
    return static_cast<int>(std::max_element(logits.begin(), logits.end()) - logits.begin());
}
int argmax_class(std::span<const double> logits) {
    return static_cast<int>(std::max_element(logits.begin(), logits.end()) - logits.begin());
}

#define NLOS_INSTANTIATE_NET(T)                                                                                   \
    template struct SimpleNetParams<T>;                                                                          \
    template SimpleNetParams<T> zero_params<T>(int);                                                             \
    template SimpleNetParams<T> init_params<T>(int, std::uint64_t);                                              \
    template ForwardCache<T> forward<T>(const SimpleNetParams<T>&, std::span<const T>, int);                     \
    template T softmax_cross_entropy<T>(std::span<const T>, std::span<const int>);                               \
    template LossAndGradients<T> loss_and_gradients<T>(const SimpleNetParams<T>&, std::span<const T>,            \
                                                       std::span<const int>);

NLOS_INSTANTIATE_NET(float)
NLOS_INSTANTIATE_NET(double)
#undef NLOS_INSTANTIATE_NET

template SimpleNetParams<double> SimpleNetParams<float>::cast<double>() const;
template SimpleNetParams<float> SimpleNetParams<double>::cast<float>() const;
template SimpleNetParams<float> SimpleNetParams<float>::cast<float>() const;
template SimpleNetParams<double> SimpleNetParams<double>::cast<double>() const;

}  // namespace nlos::classifier
