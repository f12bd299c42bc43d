#pragma once

#include "nlos/optics/grid.hpp"

#include <span>

namespace nlos::optics {

/// Unnormalized in-place 2-D DFT over a row-major ny x nx array.
/// Plans are cached per shape; safe to call concurrently from several threads.
void fft2_forward(std::span<complex> data, int nx, int ny);

/// Inverse of fft2_forward including the 1/(nx*ny) factor.
void fft2_inverse(std::span<complex> data, int nx, int ny);

/// Signed spatial frequency (cycles/m) of DFT bin k on an n-point axis.
inline double dft_frequency(int k, int n, double pitch) {
    const int signed_k = k < (n + 1) / 2 ? k : k - n;
    return signed_k / (n * pitch);
}

}  // namespace nlos::optics
