#include "dense_box.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qlevy/errors.hpp"
#include "qlevy/fft.hpp"

namespace qlevy::detail {
namespace {

constexpr std::size_t kMaxBoxVolume = std::size_t{1} << 27;
// Above this many multiply-adds the FFT route is used.
constexpr double kDirectWorkLimit = 4e6;

std::size_t volume(const std::vector<std::size_t>& shape) {
  std::size_t v = 1;
  for (auto s : shape) {
    if (s != 0 && v > kMaxBoxVolume / s) throw Error(Errc::InvalidArgument, "support box too large");
    v *= s;
  }
  return v;
}

// Advance a multi-index in row-major order; false when exhausted.
bool next_index(std::vector<std::size_t>& idx, const std::vector<std::size_t>& shape) {
  for (std::size_t j = idx.size(); j-- > 0;) {
    if (++idx[j] < shape[j]) return true;
    idx[j] = 0;
  }
  return false;
}

}  // namespace

DenseBox DenseBox::from_atoms(const AtomMap& atoms, std::size_t d) {
  DenseBox box;
  if (atoms.empty()) {
    box.lo.assign(d, 0);
    box.shape.assign(d, 0);
    return box;
  }
  Coords lo(d, std::numeric_limits<std::int64_t>::max());
  Coords hi(d, std::numeric_limits<std::int64_t>::min());
  for (const auto& [c, w] : atoms) {
    for (std::size_t j = 0; j < d; ++j) {
      lo[j] = std::min(lo[j], c[j]);
      hi[j] = std::max(hi[j], c[j]);
    }
  }
  box.lo = lo;
  box.shape.resize(d);
  for (std::size_t j = 0; j < d; ++j) box.shape[j] = static_cast<std::size_t>(hi[j] - lo[j] + 1);
  box.w.assign(volume(box.shape), 0.0);
  for (const auto& [c, w] : atoms) {
    std::size_t pos = 0;
    for (std::size_t j = 0; j < d; ++j) pos = pos * box.shape[j] + static_cast<std::size_t>(c[j] - lo[j]);
    box.w[pos] += w;
  }
  return box;
}

DenseBox DenseBox::point(const Coords& c, double weight) {
  DenseBox box;
  box.lo = c;
  box.shape.assign(c.size(), 1);
  box.w = {weight};
  return box;
}

AtomMap DenseBox::to_atoms() const {
  AtomMap out;
  if (w.empty()) return out;
  std::vector<std::size_t> idx(dim(), 0);
  std::size_t flat = 0;
  do {
    if (w[flat] != 0.0) {
      Coords c(dim());
      for (std::size_t j = 0; j < dim(); ++j) c[j] = lo[j] + static_cast<std::int64_t>(idx[j]);
      out.emplace(std::move(c), w[flat]);
    }
    ++flat;
  } while (next_index(idx, shape));
  return out;
}

double DenseBox::l1() const {
  double s = 0.0;
  for (double x : w) s += std::abs(x);
  return s;
}

double DenseBox::sum() const { return std::accumulate(w.begin(), w.end(), 0.0); }

double DenseBox::prune(double threshold) {
  if (w.empty()) return 0.0;
  const std::size_t d = dim();
  double dropped = 0.0;
  std::vector<std::size_t> lo_idx(d, std::numeric_limits<std::size_t>::max()), hi_idx(d, 0);
  bool any = false;
  std::vector<std::size_t> idx(d, 0);
  std::size_t flat = 0;
  do {
    double& x = w[flat];
    if (std::abs(x) < threshold) {
      dropped += std::abs(x);
      x = 0.0;
    } else if (x != 0.0) {
      any = true;
      for (std::size_t j = 0; j < d; ++j) {
        lo_idx[j] = std::min(lo_idx[j], idx[j]);
        hi_idx[j] = std::max(hi_idx[j], idx[j]);
      }
    }
    ++flat;
  } while (next_index(idx, shape));

  if (!any) {
    w.clear();
    shape.assign(d, 0);
    return dropped;
  }
  bool same = true;
  for (std::size_t j = 0; j < d; ++j) same = same && lo_idx[j] == 0 && hi_idx[j] + 1 == shape[j];
  if (same) return dropped;

  DenseBox shrunk;
  shrunk.lo.resize(d);
  shrunk.shape.resize(d);
  for (std::size_t j = 0; j < d; ++j) {
    shrunk.lo[j] = lo[j] + static_cast<std::int64_t>(lo_idx[j]);
    shrunk.shape[j] = hi_idx[j] - lo_idx[j] + 1;
  }
  shrunk.w.assign(volume(shrunk.shape), 0.0);
  std::vector<std::size_t> sidx(d, 0);
  std::size_t sflat = 0;
  do {
    std::size_t pos = 0;
    for (std::size_t j = 0; j < d; ++j) pos = pos * shape[j] + sidx[j] + lo_idx[j];
    shrunk.w[sflat++] = w[pos];
  } while (next_index(sidx, shrunk.shape));
  *this = std::move(shrunk);
  return dropped;
}

void DenseBox::axpy(double a, const DenseBox& x) {
  if (x.empty()) return;
  const std::size_t d = x.dim();
  if (empty()) {
    *this = x;
    for (double& v : w) v *= a;
    return;
  }
  Coords new_lo(d);
  std::vector<std::size_t> new_shape(d);
  bool grow = false;
  for (std::size_t j = 0; j < d; ++j) {
    new_lo[j] = std::min(lo[j], x.lo[j]);
    const std::int64_t hi = std::max(lo[j] + static_cast<std::int64_t>(shape[j]),
                                     x.lo[j] + static_cast<std::int64_t>(x.shape[j]));
    new_shape[j] = static_cast<std::size_t>(hi - new_lo[j]);
    grow = grow || new_lo[j] != lo[j] || new_shape[j] != shape[j];
  }
  if (grow) {
    DenseBox bigger;
    bigger.lo = new_lo;
    bigger.shape = new_shape;
    bigger.w.assign(volume(new_shape), 0.0);
    std::vector<std::size_t> idx(d, 0);
    std::size_t flat = 0;
    do {
      std::size_t pos = 0;
      for (std::size_t j = 0; j < d; ++j)
        pos = pos * new_shape[j] + idx[j] + static_cast<std::size_t>(lo[j] - new_lo[j]);
      bigger.w[pos] = w[flat++];
    } while (next_index(idx, shape));
    *this = std::move(bigger);
  }
  std::vector<std::size_t> idx(d, 0);
  std::size_t flat = 0;
  do {
    std::size_t pos = 0;
    for (std::size_t j = 0; j < d; ++j)
      pos = pos * shape[j] + idx[j] + static_cast<std::size_t>(x.lo[j] - lo[j]);
    w[pos] += a * x.w[flat++];
  } while (next_index(idx, x.shape));
}

DenseBox convolve(const DenseBox& a, const DenseBox& b) {
  const std::size_t d = a.dim();
  DenseBox out;
  out.lo.resize(d);
  out.shape.resize(d);
  if (a.empty() || b.empty()) {
    out.shape.assign(d, 0);
    return out;
  }
  for (std::size_t j = 0; j < d; ++j) {
    out.lo[j] = a.lo[j] + b.lo[j];
    out.shape[j] = a.shape[j] + b.shape[j] - 1;
  }
  const double work = static_cast<double>(a.w.size()) * static_cast<double>(b.w.size());
  if (work > kDirectWorkLimit) {
    out.w = fft::convolve_real(a.w, a.shape, b.w, b.shape);
    return out;
  }

  out.w.assign(volume(out.shape), 0.0);
  // Row-major strides of the output grid.
  std::vector<std::size_t> stride(d, 1);
  for (std::size_t j = d; j-- > 1;) stride[j - 1] = stride[j] * out.shape[j];
  auto offset_of = [&](const std::vector<std::size_t>& idx) {
    std::size_t pos = 0;
    for (std::size_t j = 0; j < d; ++j) pos += idx[j] * stride[j];
    return pos;
  };
  std::vector<std::size_t> bpos;
  std::vector<double> bval;
  {
    std::vector<std::size_t> idx(d, 0);
    std::size_t flat = 0;
    do {
      if (b.w[flat] != 0.0) {
        bpos.push_back(offset_of(idx));
        bval.push_back(b.w[flat]);
      }
      ++flat;
    } while (next_index(idx, b.shape));
  }
  std::vector<std::size_t> idx(d, 0);
  std::size_t flat = 0;
  do {
    const double x = a.w[flat++];
    if (x == 0.0) continue;
    const std::size_t base = offset_of(idx);
    for (std::size_t k = 0; k < bpos.size(); ++k) out.w[base + bpos[k]] += x * bval[k];
  } while (next_index(idx, a.shape));
  return out;
}

}  // namespace qlevy::detail
