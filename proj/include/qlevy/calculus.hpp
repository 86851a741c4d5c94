#pragma once

#include <map>
#include <vector>

#include "qlevy/measures.hpp"
#include "qlevy/triplet.hpp"

namespace qlevy {

/// Controls the truncation of sum_n N^{*n}/n!.
struct ExpSeriesParams {
  double tol = 1e-12;
  int max_terms = 400;
};

struct CompoundExp {
  SignedAtomicMeasure measure;
  int terms = 0;
  /// Certified TV bound on the discarded series tail.
  double series_tail = 0.0;
  /// TV bound on the effect of support pruning.
  double pruned = 0.0;
  /// series_tail + pruned: the TV distance to the exact exponential.
  double residual = 0.0;
};

/// delta_gamma * e^{-sum lambda} * sum_{n>=0} N^{*n}/n!,  N = sum_u lambda_u delta_u:
/// the measure whose characteristic function is
///   exp{ i t gamma + sum_u lambda_u (e^{itu} - 1) }.
/// Throws Diverged when max_terms is reached before the tail bound closes.
CompoundExp compound_exp(const FrequencyBasis& basis, const Coords& gamma,
                         const std::map<Coords, double>& lambdas, const ExpSeriesParams& params = {});
CompoundExp compound_exp(const QuasiTriplet& triplet, const ExpSeriesParams& params = {});

struct ReconstructParams {
  ExpSeriesParams series;
  /// Atoms more negative than this mean the triplet is not a probability law.
  double negative_tol = 1e-9;
};

struct Reconstruction {
  DiscreteLaw law;
  /// Series residual plus the mass moved by clamping and renormalization.
  double residual = 0.0;
};

Reconstruction reconstruct_law(const QuasiTriplet& triplet, const ReconstructParams& params = {});

/// exp(x) - 1: the TV bound ||F_rec - F|| <= e^{||Delta||} - 1 for a
/// perturbation of the exponent of l1 size `delta`.
double exponent_perturbation_bound(double delta);

enum class PowerClass { Probability, Signed };

struct PowerResult {
  SignedAtomicMeasure measure;
  PowerClass classification = PowerClass::Probability;
  double s = 1.0;
  /// Coordinates of s * gamma that could not be absorbed into the lattice;
  /// all zero when in_module is true. The measure is to be shifted by
  /// sum_j residual_shift_j alpha_j.
  std::vector<double> residual_shift;
  bool in_module = true;
  double residual = 0.0;
};

/// The s-th convolution power exp{ s * (exponent of the triplet) }.
/// Signed results are returned raw, never renormalized.
PowerResult conv_power(const QuasiTriplet& triplet, double s, const ExpSeriesParams& params = {},
                       double negative_tol = 1e-9);

/// Convolution of two power results, combining their residual shifts.
PowerResult convolve(const PowerResult& a, const PowerResult& b, double negative_tol = 1e-9);

/// True iff every lambda_u >= -tol and the tail bound is at most tol.
bool is_infinitely_divisible(const QuasiTriplet& triplet, double tol = 1e-9);

}  // namespace qlevy
