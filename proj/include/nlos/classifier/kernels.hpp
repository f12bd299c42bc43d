#pragma once

// Batched layer kernels of the classifier, parallelized over the batch with
// OpenMP. Tensors are dense NCHW. Every reduction runs in a fixed order that
// does not depend on the thread count, so results are bit-identical for any
// OMP_NUM_THREADS. reference_kernels.hpp holds straightforward serial
// versions with the same signatures for testing and benchmarking.

#include <cstddef>
#include <cstdint>

namespace nlos::classifier::kernels {

/// 3x3 convolution, stride 1, zero padding 1.
/// in [n, c, h, w], weights [k, c, 3, 3], bias [k] -> out [n, k, h, w].
template <typename T>
void conv3x3_forward(const T* in, int n, int c, int h, int w, const T* weights, const T* bias, int k, T* out);

/// Gradients of conv3x3_forward. grad_w and grad_b are overwritten;
/// grad_in may be null (first layer) and is overwritten otherwise.
template <typename T>
void conv3x3_backward(const T* in, int n, int c, int h, int w, const T* weights, int k, const T* grad_out,
                      T* grad_in, T* grad_w, T* grad_b);

/// In-place max(x, 0) over `count` values.
template <typename T>
void relu_forward(T* x, std::size_t count);

/// grad *= (activation > 0), where `activation` is the ReLU output.
template <typename T>
void relu_backward(const T* activation, T* grad, std::size_t count);

/// 2x2 max pooling, stride 2, floor semantics (odd trailing rows/cols dropped).
/// in [n, c, h, w] -> out [n, c, h/2, w/2]; argmax holds the flat index of the
/// winning input within its (h, w) plane, first maximum on ties.
template <typename T>
void maxpool2x2_forward(const T* in, int n, int c, int h, int w, T* out, std::uint32_t* argmax);

/// Routes each pooled gradient to its argmax position; grad_in is overwritten.
template <typename T>
void maxpool2x2_backward(const T* grad_out, const std::uint32_t* argmax, int n, int c, int h, int w, T* grad_in);

/// y [n, outputs] = x [n, inputs] * weights [inputs, outputs] + bias.
template <typename T>
void dense_forward(const T* x, int n, int inputs, const T* weights, const T* bias, int outputs, T* y);

/// Gradients of dense_forward; grad_x may be null. All outputs are overwritten.
template <typename T>
void dense_backward(const T* x, int n, int inputs, const T* weights, int outputs, const T* grad_y, T* grad_x,
                    T* grad_w, T* grad_b);

}  // namespace nlos::classifier::kernels
