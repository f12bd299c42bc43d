#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace nlos::classifier {

inline constexpr std::array<int, 4> kConvChannels{16, 16, 32, 32};
inline constexpr int kHiddenUnits = 1024;
inline constexpr int kClasses = 10;
inline constexpr int kMinInputSize = 16;

template <typename T>
struct ConvLayer {
    int in_channels = 0;
    int out_channels = 0;
    std::vector<T> weights;  ///< [out][in][3][3]
    std::vector<T> bias;     ///< [out]

    friend bool operator==(const ConvLayer&, const ConvLayer&) = default;
};

template <typename T>
struct DenseLayer {
    int inputs = 0;
    int outputs = 0;
    std::vector<T> weights;  ///< [inputs][outputs]
    std::vector<T> bias;     ///< [outputs]

    friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

/// Four conv3x3(pad 1) + ReLU + maxpool2x2 stages with 16, 16, 32, 32
/// channels, then a 1024-unit ReLU layer and 10 logits.
template <typename T>
struct SimpleNetParams {
    int input_size = 0;
    std::array<ConvLayer<T>, 4> conv;
    DenseLayer<T> fc1;
    DenseLayer<T> fc2;

    int flatten_dim() const { return fc1.inputs; }

    /// The twelve parameter tensors in canonical order
    /// (conv1.weight, conv1.bias, ..., fc2.weight, fc2.bias).
    std::vector<std::span<T>> tensors();
    std::vector<std::span<const T>> tensors() const;

    template <typename U>
    SimpleNetParams<U> cast() const;

    friend bool operator==(const SimpleNetParams&, const SimpleNetParams&) = default;
};

struct TensorInfo {
    std::string name;
    std::vector<std::uint32_t> shape;
};

/// Names and shapes of the twelve tensors for a given input size.
std::vector<TensorInfo> tensor_layout(int input_size);

/// Spatial side after each pooling stage: {input, s1, s2, s3, s4}.
std::array<int, 5> stage_sizes(int input_size);

/// 32 * s4 * s4. Throws ConfigError for inputs below 16 pixels.
int flatten_dim_for(int input_size);

/// Parameters shaped for `input_size` with every entry zero.
template <typename T>
SimpleNetParams<T> zero_params(int input_size);

/// He-normal weights (std sqrt(2 / fan_in)), zero biases; deterministic in seed.
template <typename T>
SimpleNetParams<T> init_params(int input_size, std::uint64_t seed);

/// Activations retained by forward() for the backward pass.
template <typename T>
struct ForwardCache {
    int batch = 0;
    std::array<std::vector<T>, 4> conv_input;       ///< input of conv stage l
    std::array<std::vector<T>, 4> conv_activation;  ///< ReLU output of conv stage l (pre-pool)
    std::array<std::vector<std::uint32_t>, 4> pool_argmax;
    std::vector<T> flat;    ///< [batch, flatten_dim]
    std::vector<T> hidden;  ///< [batch, 1024] after ReLU
    std::vector<T> logits;  ///< [batch, 10]
};

/// `images` holds `batch` square images of params.input_size pixels, row-major.
/// Throws ShapeError when the buffer size does not match.
template <typename T>
ForwardCache<T> forward(const SimpleNetParams<T>& params, std::span<const T> images, int batch);

template <typename T>
struct LossAndGradients {
    T loss = 0;
    SimpleNetParams<T> gradients;
    std::vector<T> logits;  ///< [batch, 10] from the forward pass
};

/// Mean softmax cross-entropy of a batch and its exact gradient.
/// Throws DomainError for labels outside 0..9.
template <typename T>
LossAndGradients<T> loss_and_gradients(const SimpleNetParams<T>& params, std::span<const T> images,
                                       std::span<const int> labels);

/// Mean softmax cross-entropy of [batch, 10] logits (log-sum-exp stabilized).
template <typename T>
T softmax_cross_entropy(std::span<const T> logits, std::span<const int> labels);

/// Index of the largest logit, first one on ties.
int argmax_class(std::span<const float> logits);
int argmax_class(std::span<const double> logits);

}  // namespace nlos::classifier
