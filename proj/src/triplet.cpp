#include "qlevy/triplet.hpp"

#include <algorithm>
#include <cmath>

#include "qlevy/errors.hpp"

namespace qlevy {

QuasiTriplet::QuasiTriplet(FrequencyBasis basis, Coords gamma_coords, std::map<Coords, double> lambdas,
                           double tail_bound)
    : basis_(std::move(basis)),
      gamma_coords_(std::move(gamma_coords)),
      lambdas_(std::move(lambdas)),
      tail_bound_(tail_bound) {
  const std::size_t d = basis_.dim();
  if (gamma_coords_.size() != d) throw Error(Errc::InvalidArgument, "gamma coordinates have the wrong length");
  if (!(tail_bound_ >= 0.0) || !std::isfinite(tail_bound_))
    throw Error(Errc::InvalidArgument, "tail bound must be finite and nonnegative");
  for (const auto& [l, v] : lambdas_) {
    if (l.size() != d) throw Error(Errc::InvalidArgument, "frequency coordinates have the wrong length");
    if (std::all_of(l.begin(), l.end(), [](std::int64_t x) { return x == 0; }))
      throw Error(Errc::InvalidArgument, "the zero frequency is not stored");
    if (!std::isfinite(v)) throw Error(Errc::InvalidArgument, "non-finite spectral weight");
  }
}

double QuasiTriplet::lambda(const Coords& l) const {
  auto it = lambdas_.find(l);
  return it == lambdas_.end() ? 0.0 : it->second;
}

double QuasiTriplet::l1_norm() const {
  double s = 0.0;
  for (const auto& [l, v] : lambdas_) s += std::abs(v);
  return s;
}

double QuasiTriplet::lambda_sum() const {
  double s = 0.0;
  for (const auto& [l, v] : lambdas_) s += v;
  return s;
}

}  // namespace qlevy
