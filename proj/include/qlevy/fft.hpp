#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace qlevy::fft {

using cplx = std::complex<double>;

bool is_pow2(std::size_t n) noexcept;
std::size_t next_pow2(std::size_t n) noexcept;

/// In-place radix-2 transform, length a power of two.
///   forward: X_k = sum_j x_j exp(-2 pi i jk/N)
///   inverse: x_j = sum_k X_k exp(+2 pi i jk/N)   (unnormalized)
void transform(std::span<cplx> data, bool inverse);

/// Row-major multidimensional transform; every extent a power of two.
void transform_nd(std::span<cplx> data, std::span<const std::size_t> shape, bool inverse);

/// Linear (non-circular) convolution of two real row-major arrays.
/// Result shape is a_shape + b_shape - 1 per axis.
std::vector<double> convolve_real(std::span<const double> a, std::span<const std::size_t> a_shape,
                                  std::span<const double> b, std::span<const std::size_t> b_shape);

}  // namespace qlevy::fft
