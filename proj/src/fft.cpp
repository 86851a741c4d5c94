#include "qlevy/fft.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <utility>

#include "qlevy/errors.hpp"

namespace qlevy::fft {

bool is_pow2(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) noexcept {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void transform(std::span<cplx> data, bool inverse) {
  const std::size_t n = data.size();
  if (n <= 1) return;
  if (!is_pow2(n)) throw Error(Errc::InvalidArgument, "fft length must be a power of two");

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }

  const double sign = inverse ? 1.0 : -1.0;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len >> 1;
    // Twiddles computed directly (not by recurrence) to keep the error at
    // O(eps log n).
    std::vector<cplx> w(half);
    for (std::size_t k = 0; k < half; ++k) {
      const double ang = sign * 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(len);
      w[k] = {std::cos(ang), std::sin(ang)};
    }
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const cplx u = data[i + k];
        const cplx v = data[i + k + half] * w[k];
        data[i + k] = u + v;
        data[i + k + half] = u - v;
      }
    }
  }
}

void transform_nd(std::span<cplx> data, std::span<const std::size_t> shape, bool inverse) {
  const std::size_t total = std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
  if (total != data.size()) throw Error(Errc::InvalidArgument, "fft shape does not match data");

  std::vector<cplx> line;
  std::size_t stride = total;
  for (std::size_t axis = 0; axis < shape.size(); ++axis) {
    const std::size_t n = shape[axis];
    stride /= n;
    if (n == 1) continue;
    line.resize(n);
    const std::size_t outer = total / (n * stride);
    for (std::size_t o = 0; o < outer; ++o) {
      for (std::size_t s = 0; s < stride; ++s) {
        const std::size_t base = o * n * stride + s;
        for (std::size_t k = 0; k < n; ++k) line[k] = data[base + k * stride];
        transform(line, inverse);
        for (std::size_t k = 0; k < n; ++k) data[base + k * stride] = line[k];
      }
    }
  }
}

std::vector<double> convolve_real(std::span<const double> a, std::span<const std::size_t> a_shape,
                                  std::span<const double> b, std::span<const std::size_t> b_shape) {
  const std::size_t d = a_shape.size();
  if (b_shape.size() != d) throw Error(Errc::InvalidArgument, "convolution rank mismatch");

  std::vector<std::size_t> out_shape(d), pad_shape(d);
  for (std::size_t j = 0; j < d; ++j) {
    out_shape[j] = a_shape[j] + b_shape[j] - 1;
    pad_shape[j] = next_pow2(out_shape[j]);
  }
  const std::size_t pad_total =
      std::accumulate(pad_shape.begin(), pad_shape.end(), std::size_t{1}, std::multiplies<>());

  // Scatter a row-major array with `shape` into the padded grid.
  auto scatter = [&](std::span<const double> src, std::span<const std::size_t> shape, std::vector<cplx>& dst) {
    dst.assign(pad_total, cplx{});
    std::vector<std::size_t> idx(d, 0);
    for (std::size_t flat = 0; flat < src.size(); ++flat) {
      std::size_t pos = 0;
      for (std::size_t j = 0; j < d; ++j) pos = pos * pad_shape[j] + idx[j];
      dst[pos] = src[flat];
      for (std::size_t j = d; j-- > 0;) {
        if (++idx[j] < shape[j]) break;
        idx[j] = 0;
      }
    }
  };

  std::vector<cplx> fa, fb;
  scatter(a, a_shape, fa);
  scatter(b, b_shape, fb);
  transform_nd(fa, pad_shape, false);
  transform_nd(fb, pad_shape, false);
  for (std::size_t i = 0; i < pad_total; ++i) fa[i] *= fb[i];
  transform_nd(fa, pad_shape, true);

  const std::size_t out_total =
      std::accumulate(out_shape.begin(), out_shape.end(), std::size_t{1}, std::multiplies<>());
  std::vector<double> out(out_total);
  std::vector<std::size_t> idx(d, 0);
  const double norm = 1.0 / static_cast<double>(pad_total);
  for (std::size_t flat = 0; flat < out_total; ++flat) {
    std::size_t pos = 0;
    for (std::size_t j = 0; j < d; ++j) pos = pos * pad_shape[j] + idx[j];
    out[flat] = fa[pos].real() * norm;
    for (std::size_t j = d; j-- > 0;) {
      if (++idx[j] < out_shape[j]) break;
      idx[j] = 0;
    }
  }
  return out;
}

}  // namespace qlevy::fft
