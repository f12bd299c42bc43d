#include "nlos/classifier/reference_kernels.hpp"

#include <algorithm>
#include <cstddef>

namespace nlos::classifier::reference {
namespace {

inline std::size_t at4(int a, int b, int c, int d, int nb, int nc, int nd) {
    return ((static_cast<std::size_t>(a) * nb + b) * nc + c) * nd + d;
}

}  // namespace

template <typename T>
void conv3x3_forward(const T* in, int n, int c, int h, int w, const T* weights, const T* bias, int k, T* out) {
    for (int s = 0; s < n; ++s)
        for (int ko = 0; ko < k; ++ko)
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x) {
                    T acc = bias[ko];
                    for (int ci = 0; ci < c; ++ci)
                        for (int ky = 0; ky < 3; ++ky)
                            for (int kx = 0; kx < 3; ++kx) {
                                const int sy = y + ky - 1, sx = x + kx - 1;
                                if (sy < 0 || sy >= h || sx < 0 || sx >= w) continue;
                                acc += weights[at4(ko, ci, ky, kx, c, 3, 3)] * in[at4(s, ci, sy, sx, c, h, w)];
                            }
                    out[at4(s, ko, y, x, k, h, w)] = acc;
                }
}

template <typename T>
void conv3x3_backward(const T* in, int n, int c, int h, int w, const T* weights, int k, const T* grad_out,
                      T* grad_in, T* grad_w, T* grad_b) {
    std::fill(grad_w, grad_w + static_cast<std::size_t>(k) * c * 9, T(0));
    std::fill(grad_b, grad_b + k, T(0));
    if (grad_in) std::fill(grad_in, grad_in + static_cast<std::size_t>(n) * c * h * w, T(0));
    for (int s = 0; s < n; ++s)
        for (int ko = 0; ko < k; ++ko)
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x) {
                    const T g = grad_out[at4(s, ko, y, x, k, h, w)];
                    grad_b[ko] += g;
                    for (int ci = 0; ci < c; ++ci)
                        for (int ky = 0; ky < 3; ++ky)
                            for (int kx = 0; kx < 3; ++kx) {
                                const int sy = y + ky - 1, sx = x + kx - 1;
                                if (sy < 0 || sy >= h || sx < 0 || sx >= w) continue;
                                grad_w[at4(ko, ci, ky, kx, c, 3, 3)] += g * in[at4(s, ci, sy, sx, c, h, w)];
                                if (grad_in) grad_in[at4(s, ci, sy, sx, c, h, w)] += g * weights[at4(ko, ci, ky, kx, c, 3, 3)];
                            }
                }
}

template <typename T>
void maxpool2x2_forward(const T* in, int n, int c, int h, int w, T* out, std::uint32_t* argmax) {
    const int ho = h / 2, wo = w / 2;
    for (int s = 0; s < n; ++s)
        for (int ci = 0; ci < c; ++ci)
            for (int y = 0; y < ho; ++y)
                for (int x = 0; x < wo; ++x) {
                    int by = 2 * y, bx = 2 * x;
                    for (int dy = 0; dy < 2; ++dy)
                        for (int dx = 0; dx < 2; ++dx)
                            if (in[at4(s, ci, 2 * y + dy, 2 * x + dx, c, h, w)] > in[at4(s, ci, by, bx, c, h, w)]) {
                                by = 2 * y + dy;
                                bx = 2 * x + dx;
                            }
                    out[at4(s, ci, y, x, c, ho, wo)] = in[at4(s, ci, by, bx, c, h, w)];
                    argmax[at4(s, ci, y, x, c, ho, wo)] = static_cast<std::uint32_t>(by * w + bx);
                }
}

template <typename T>
void maxpool2x2_backward(const T* grad_out, const std::uint32_t* argmax, int n, int c, int h, int w, T* grad_in) {
    const int ho = h / 2, wo = w / 2;
    std::fill(grad_in, grad_in + static_cast<std::size_t>(n) * c * h * w, T(0));
    for (int s = 0; s < n; ++s)
        for (int ci = 0; ci < c; ++ci)
            for (int y = 0; y < ho; ++y)
                for (int x = 0; x < wo; ++x) {
                    const auto q = at4(s, ci, y, x, c, ho, wo);
                    grad_in[at4(s, ci, 0, 0, c, h, w) + argmax[q]] += grad_out[q];
                }
}

template <typename T>
void dense_forward(const T* x, int n, int inputs, const T* weights, const T* bias, int outputs, T* y) {
    for (int s = 0; s < n; ++s)
        for (int o = 0; o < outputs; ++o) {
            T acc = bias[o];
            for (int i = 0; i < inputs; ++i)
                acc += x[static_cast<std::size_t>(s) * inputs + i] * weights[static_cast<std::size_t>(i) * outputs + o];
            y[static_cast<std::size_t>(s) * outputs + o] = acc;
        }
}

template <typename T>
void dense_backward(const T* x, int n, int inputs, const T* weights, int outputs, const T* grad_y, T* grad_x,
                    T* grad_w, T* grad_b) {
    for (int i = 0; i < inputs; ++i)
        for (int o = 0; o < outputs; ++o) {
            T acc = 0;
            for (int s = 0; s < n; ++s)
                acc += x[static_cast<std::size_t>(s) * inputs + i] * grad_y[static_cast<std::size_t>(s) * outputs + o];
            grad_w[static_cast<std::size_t>(i) * outputs + o] = acc;
        }
    for (int o = 0; o < outputs; ++o) {
        T acc = 0;
        for (int s = 0; s < n; ++s) acc += grad_y[static_cast<std::size_t>(s) * outputs + o];
        grad_b[o] = acc;
    }
    if (!grad_x) return;
    for (int s = 0; s < n; ++s)
        for (int i = 0; i < inputs; ++i) {
            T acc = 0;
            for (int o = 0; o < outputs; ++o)
                acc += grad_y[static_cast<std::size_t>(s) * outputs + o] * weights[static_cast<std::size_t>(i) * outputs + o];
            grad_x[static_cast<std::size_t>(s) * inputs + i] = acc;
        }
}

#define NLOS_INSTANTIATE_REFERENCE(T)                                                                         \
    template void conv3x3_forward<T>(const T*, int, int, int, int, const T*, const T*, int, T*);              \
    template void conv3x3_backward<T>(const T*, int, int, int, int, const T*, int, const T*, T*, T*, T*);     \
    template void maxpool2x2_forward<T>(const T*, int, int, int, int, T*, std::uint32_t*);                    \
    template void maxpool2x2_backward<T>(const T*, const std::uint32_t*, int, int, int, int, T*);             \
    template void dense_forward<T>(const T*, int, int, const T*, const T*, int, T*);                          \
    template void dense_backward<T>(const T*, int, int, const T*, int, const T*, T*, T*, T*);

NLOS_INSTANTIATE_REFERENCE(float)
NLOS_INSTANTIATE_REFERENCE(double)
#undef NLOS_INSTANTIATE_REFERENCE

}  // namespace nlos::classifier::reference
