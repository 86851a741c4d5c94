#pragma once

#include <map>

#include "qlevy/measures.hpp"

namespace qlevy {

/// The pair (gamma, {lambda_u}) of the representation
///   f(t) = exp{ i t gamma + sum_{u != 0} lambda_u (e^{itu} - 1) }.
/// gamma = sum_j gamma_coords_j alpha_j and u = sum_j l_j alpha_j are kept as
/// integer coordinates over the basis, so membership in the support module
/// is exact. The zero frequency is never stored.
class QuasiTriplet {
 public:
  QuasiTriplet(FrequencyBasis basis, Coords gamma_coords, std::map<Coords, double> lambdas,
               double tail_bound = 0.0);

  const FrequencyBasis& basis() const noexcept { return basis_; }
  const Coords& gamma_coords() const noexcept { return gamma_coords_; }
  const std::map<Coords, double>& lambdas() const noexcept { return lambdas_; }
  double tail_bound() const noexcept { return tail_bound_; }

  double gamma() const { return basis_.value(gamma_coords_); }
  double frequency(const Coords& l) const { return basis_.value(l); }
  double lambda(const Coords& l) const;
  /// sum_u |lambda_u| over the stored frequencies.
  double l1_norm() const;
  /// sum_u lambda_u, i.e. minus the derived lambda_0.
  double lambda_sum() const;

  friend bool operator==(const QuasiTriplet&, const QuasiTriplet&) = default;

 private:
  FrequencyBasis basis_;
  Coords gamma_coords_;
  std::map<Coords, double> lambdas_;
  double tail_bound_;
};

}  // namespace qlevy
