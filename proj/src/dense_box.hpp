#pragma once

// Dense row-major storage of an atomic measure over the bounding box of its
// coordinates. Used wherever long chains of convolutions are needed.

#include <cstdint>
#include <span>
#include <vector>

#include "qlevy/measures.hpp"

namespace qlevy::detail {

struct DenseBox {
  Coords lo;                       // lowest corner
  std::vector<std::size_t> shape;  // extent per axis
  std::vector<double> w;           // row-major weights

  std::size_t dim() const { return lo.size(); }
  bool empty() const { return w.empty(); }

  static DenseBox from_atoms(const AtomMap& atoms, std::size_t d);
  static DenseBox point(const Coords& c, double weight);

  AtomMap to_atoms() const;
  double l1() const;
  double sum() const;

  /// Zeroes entries with |w| < threshold, shrinks to the bounding box of the
  /// survivors and returns the discarded l1 mass.
  double prune(double threshold);

  void axpy(double a, const DenseBox& x);  // this += a * x, growing the box
};

DenseBox convolve(const DenseBox& a, const DenseBox& b);

}  // namespace qlevy::detail
