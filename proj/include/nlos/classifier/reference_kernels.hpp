#pragma once

// Serial textbook versions of kernels.hpp, used only as test oracles and as
// the baseline in bench/. Same argument conventions.

#include <cstddef>
#include <cstdint>

namespace nlos::classifier::reference {

template <typename T>
void conv3x3_forward(const T* in, int n, int c, int h, int w, const T* weights, const T* bias, int k, T* out);

template <typename T>
void conv3x3_backward(const T* in, int n, int c, int h, int w, const T* weights, int k, const T* grad_out,
                      T* grad_in, T* grad_w, T* grad_b);

template <typename T>
void maxpool2x2_forward(const T* in, int n, int c, int h, int w, T* out, std::uint32_t* argmax);

template <typename T>
void maxpool2x2_backward(const T* grad_out, const std::uint32_t* argmax, int n, int c, int h, int w, T* grad_in);

template <typename T>
void dense_forward(const T* x, int n, int inputs, const T* weights, const T* bias, int outputs, T* y);

template <typename T>
void dense_backward(const T* x, int n, int inputs, const T* weights, int outputs, const T* grad_y, T* grad_x,
                    T* grad_w, T* grad_b);

}  // namespace nlos::classifier::reference
