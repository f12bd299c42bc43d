#include "nlos/classifier/kernels.hpp"

#include <algorithm>
#include <cstring>
#include <vector>

namespace nlos::classifier::kernels {
namespace {

template <typename T>
inline void axpy(T* __restrict y, const T* __restrict x, T a, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

// Fixed 16-lane accumulation; vectorizes without -ffast-math and gives the
// same bits on every run.
template <typename T>
inline T dot(const T* __restrict a, const T* __restrict b, std::size_t n) {
    constexpr std::size_t lanes = 16;
    T acc[lanes] = {};
    std::size_t i = 0;
    for (; i + lanes <= n; i += lanes)
        for (std::size_t j = 0; j < lanes; ++j) acc[j] += a[i + j] * b[i + j];
    T tail = 0;
    for (; i < n; ++i) tail += a[i] * b[i];
    for (std::size_t width = lanes / 2; width > 0; width /= 2)
        for (std::size_t j = 0; j < width; ++j) acc[j] += acc[j + width];
    return acc[0] + tail;
}

// col [c*9, h*w]: row (ci*9 + ky*3 + kx) holds the input shifted by (ky-1, kx-1).
template <typename T>
void im2col(const T* in, int c, int h, int w, T* col) {
    const std::size_t hw = static_cast<std::size_t>(h) * w;
    for (int ci = 0; ci < c; ++ci) {
        const T* plane = in + ci * hw;
        for (int ky = 0; ky < 3; ++ky) {
            for (int kx = 0; kx < 3; ++kx) {
                T* row = col + (static_cast<std::size_t>(ci) * 9 + ky * 3 + kx) * hw;
                for (int y = 0; y < h; ++y) {
                    const int sy = y + ky - 1;
                    T* dst = row + static_cast<std::size_t>(y) * w;
                    if (sy < 0 || sy >= h) {
                        std::fill(dst, dst + w, T(0));
                        continue;
                    }
                    const T* src = plane + static_cast<std::size_t>(sy) * w;
                    const int dx = kx - 1;
                    const int x_begin = std::max(0, -dx);
                    const int x_end = std::min(w, w - dx);
                    if (x_begin > 0) dst[0] = T(0);
                    if (x_end < w) dst[w - 1] = T(0);
                    std::copy(src + x_begin + dx, src + x_end + dx, dst + x_begin);
                }
            }
        }
    }
}

template <typename T>
void col2im_add(const T* col, int c, int h, int w, T* grad_in) {
    const std::size_t hw = static_cast<std::size_t>(h) * w;
    for (int ci = 0; ci < c; ++ci) {
        T* plane = grad_in + ci * hw;
        for (int ky = 0; ky < 3; ++ky) {
            for (int kx = 0; kx < 3; ++kx) {
                const T* row = col + (static_cast<std::size_t>(ci) * 9 + ky * 3 + kx) * hw;
                const int dx = kx - 1;
                const int x_begin = std::max(0, -dx);
                const int x_end = std::min(w, w - dx);
                for (int y = 0; y < h; ++y) {
                    const int sy = y + ky - 1;
                    if (sy < 0 || sy >= h) continue;
                    T* dst = plane + static_cast<std::size_t>(sy) * w;
                    const T* src = row + static_cast<std::size_t>(y) * w;
                    for (int x = x_begin; x < x_end; ++x) dst[x + dx] += src[x];
                }
            }
        }
    }
}

}  // namespace

template <typename T>
void conv3x3_forward(const T* in, int n, int c, int h, int w, const T* weights, const T* bias, int k, T* out) {
    const std::size_t hw = static_cast<std::size_t>(h) * w;
    const std::size_t rows = static_cast<std::size_t>(c) * 9;
#pragma omp parallel
    {
        std::vector<T> col(rows * hw);
#pragma omp for schedule(static)
        for (int s = 0; s < n; ++s) {
            im2col(in + static_cast<std::size_t>(s) * c * hw, c, h, w, col.data());
            T* o = out + static_cast<std::size_t>(s) * k * hw;
            // four output channels per pass so each im2col row is loaded once per group
            int ko = 0;
            for (; ko + 4 <= k; ko += 4) {
                T* o0 = o + (ko + 0) * hw;
                T* o1 = o + (ko + 1) * hw;
                T* o2 = o + (ko + 2) * hw;
                T* o3 = o + (ko + 3) * hw;
                std::fill(o0, o0 + hw, bias[ko + 0]);
                std::fill(o1, o1 + hw, bias[ko + 1]);
                std::fill(o2, o2 + hw, bias[ko + 2]);
                std::fill(o3, o3 + hw, bias[ko + 3]);
                const T* w0 = weights + (ko + 0) * rows;
                const T* w1 = weights + (ko + 1) * rows;
                const T* w2 = weights + (ko + 2) * rows;
                const T* w3 = weights + (ko + 3) * rows;
                for (std::size_t r = 0; r < rows; ++r) {
                    const T* __restrict src = col.data() + r * hw;
                    const T a0 = w0[r], a1 = w1[r], a2 = w2[r], a3 = w3[r];
                    for (std::size_t p = 0; p < hw; ++p) {
                        const T v = src[p];
                        o0[p] += a0 * v;
                        o1[p] += a1 * v;
                        o2[p] += a2 * v;
                        o3[p] += a3 * v;
                    }
                }
            }
            for (; ko < k; ++ko) {
                T* oo = o + ko * hw;
                std::fill(oo, oo + hw, bias[ko]);
                for (std::size_t r = 0; r < rows; ++r) axpy(oo, col.data() + r * hw, weights[ko * rows + r], hw);
            }
        }
    }
}

template <typename T>
void conv3x3_backward(const T* in, int n, int c, int h, int w, const T* weights, int k, const T* grad_out,
                      T* grad_in, T* grad_w, T* grad_b) {
    const std::size_t hw = static_cast<std::size_t>(h) * w;
    const std::size_t rows = static_cast<std::size_t>(c) * 9;
    const std::size_t wsize = static_cast<std::size_t>(k) * rows;
    // Per-sample partial weight gradients, summed afterwards in sample order.
    std::vector<T> partial_w(static_cast<std::size_t>(n) * wsize);
    std::vector<T> partial_b(static_cast<std::size_t>(n) * k);

#pragma omp parallel
    {
        std::vector<T> col(rows * hw);
        std::vector<T> grad_col(grad_in ? rows * hw : 0);
#pragma omp for schedule(static)
        for (int s = 0; s < n; ++s) {
            im2col(in + static_cast<std::size_t>(s) * c * hw, c, h, w, col.data());
            const T* go = grad_out + static_cast<std::size_t>(s) * k * hw;
            T* pw = partial_w.data() + static_cast<std::size_t>(s) * wsize;
            T* pb = partial_b.data() + static_cast<std::size_t>(s) * k;
            for (int ko = 0; ko < k; ++ko) {
                const T* g = go + ko * hw;
                T sum = 0;
                for (std::size_t p = 0; p < hw; ++p) sum += g[p];
                pb[ko] = sum;
                for (std::size_t r = 0; r < rows; ++r) pw[ko * rows + r] = dot(g, col.data() + r * hw, hw);
            }
            if (grad_in) {
                std::fill(grad_col.begin(), grad_col.end(), T(0));
                for (std::size_t r = 0; r < rows; ++r) {
                    T* gc = grad_col.data() + r * hw;
                    for (int ko = 0; ko < k; ++ko) axpy(gc, go + ko * hw, weights[ko * rows + r], hw);
                }
                T* gi = grad_in + static_cast<std::size_t>(s) * c * hw;
                std::fill(gi, gi + c * hw, T(0));
                col2im_add(grad_col.data(), c, h, w, gi);
            }
        }
    }

    std::fill(grad_w, grad_w + wsize, T(0));
    std::fill(grad_b, grad_b + k, T(0));
    for (int s = 0; s < n; ++s) {
        axpy(grad_w, partial_w.data() + static_cast<std::size_t>(s) * wsize, T(1), wsize);
        axpy(grad_b, partial_b.data() + static_cast<std::size_t>(s) * k, T(1), static_cast<std::size_t>(k));
    }
}

template <typename T>
void relu_forward(T* x, std::size_t count) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(count); ++i) x[i] = x[i] > T(0) ? x[i] : T(0);
}

template <typename T>
void relu_backward(const T* activation, T* grad, std::size_t count) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(count); ++i)
        if (!(activation[i] > T(0))) grad[i] = T(0);
}

namespace {

template <typename T>
void maxpool_plane(const T* src, int h, int w, T* dst, std::uint32_t* idx) {
    const int ho = h / 2, wo = w / 2;
    for (int y = 0; y < ho; ++y) {
        const T* r0 = src + static_cast<std::size_t>(2 * y) * w;
        const T* r1 = r0 + w;
        for (int x = 0; x < wo; ++x) {
            // strict comparisons keep the first maximum in row-major order
            const int x0 = 2 * x;
            T v = r0[x0];
            int off = 0;
            if (r0[x0 + 1] > v) {
                v = r0[x0 + 1];
                off = 1;
            }
            if (r1[x0] > v) {
                v = r1[x0];
                off = w;
            }
            if (r1[x0 + 1] > v) {
                v = r1[x0 + 1];
                off = w + 1;
            }
            dst[y * wo + x] = v;
            idx[y * wo + x] = static_cast<std::uint32_t>(2 * y * w + x0 + off);
        }
    }
}

}  // namespace

template <typename T>
void maxpool2x2_forward(const T* in, int n, int c, int h, int w, T* out, std::uint32_t* argmax) {
    const std::size_t in_plane = static_cast<std::size_t>(h) * w;
    const std::size_t out_plane = static_cast<std::size_t>(h / 2) * (w / 2);
#pragma omp parallel for schedule(static)
    for (int p = 0; p < n * c; ++p) maxpool_plane(in + p * in_plane, h, w, out + p * out_plane, argmax + p * out_plane);
}

template <typename T>
void maxpool2x2_backward(const T* grad_out, const std::uint32_t* argmax, int n, int c, int h, int w, T* grad_in) {
    const std::size_t in_plane = static_cast<std::size_t>(h) * w;
    const std::size_t out_plane = static_cast<std::size_t>(h / 2) * (w / 2);
#pragma omp parallel for schedule(static)
    for (int p = 0; p < n * c; ++p) {
        T* dst = grad_in + p * in_plane;
        std::fill(dst, dst + in_plane, T(0));
        const T* g = grad_out + p * out_plane;
        const std::uint32_t* idx = argmax + p * out_plane;
        for (std::size_t q = 0; q < out_plane; ++q) dst[idx[q]] += g[q];
    }
}

template <typename T>
void dense_forward(const T* x, int n, int inputs, const T* weights, const T* bias, int outputs, T* y) {
#pragma omp parallel for schedule(static)
    for (int s = 0; s < n; ++s) {
        T* ys = y + static_cast<std::size_t>(s) * outputs;
        std::copy(bias, bias + outputs, ys);
        const T* xs = x + static_cast<std::size_t>(s) * inputs;
        for (int i = 0; i < inputs; ++i) {
            if (xs[i] == T(0)) continue;  // post-ReLU inputs are mostly zero
            axpy(ys, weights + static_cast<std::size_t>(i) * outputs, xs[i], static_cast<std::size_t>(outputs));
        }
    }
}

template <typename T>
void dense_backward(const T* x, int n, int inputs, const T* weights, int outputs, const T* grad_y, T* grad_x,
                    T* grad_w, T* grad_b) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < inputs; ++i) {
        T* gw = grad_w + static_cast<std::size_t>(i) * outputs;
        std::fill(gw, gw + outputs, T(0));
        for (int s = 0; s < n; ++s) {
            const T xv = x[static_cast<std::size_t>(s) * inputs + i];
            if (xv == T(0)) continue;
            axpy(gw, grad_y + static_cast<std::size_t>(s) * outputs, xv, static_cast<std::size_t>(outputs));
        }
    }
    std::fill(grad_b, grad_b + outputs, T(0));
    for (int s = 0; s < n; ++s) axpy(grad_b, grad_y + static_cast<std::size_t>(s) * outputs, T(1), static_cast<std::size_t>(outputs));
    if (!grad_x) return;
#pragma omp parallel for schedule(static)
    for (int s = 0; s < n; ++s) {
        const T* gy = grad_y + static_cast<std::size_t>(s) * outputs;
        T* gx = grad_x + static_cast<std::size_t>(s) * inputs;
        for (int i = 0; i < inputs; ++i) gx[i] = dot(gy, weights + static_cast<std::size_t>(i) * outputs, static_cast<std::size_t>(outputs));
    }
}

#define NLOS_INSTANTIATE_KERNELS(T)                                                                              \
    template void conv3x3_forward<T>(const T*, int, int, int, int, const T*, const T*, int, T*);                 \
    template void conv3x3_backward<T>(const T*, int, int, int, int, const T*, int, const T*, T*, T*, T*);        \
    template void relu_forward<T>(T*, std::size_t);                                                              \
    template void relu_backward<T>(const T*, T*, std::size_t);                                                   \
    template void maxpool2x2_forward<T>(const T*, int, int, int, int, T*, std::uint32_t*);                       \
    template void maxpool2x2_backward<T>(const T*, const std::uint32_t*, int, int, int, int, T*);                \
    template void dense_forward<T>(const T*, int, int, const T*, const T*, int, T*);                             \
    template void dense_backward<T>(const T*, int, int, const T*, int, const T*, T*, T*, T*);

NLOS_INSTANTIATE_KERNELS(float)
NLOS_INSTANTIATE_KERNELS(double)
#undef NLOS_INSTANTIATE_KERNELS

}  // namespace nlos::classifier::kernels
