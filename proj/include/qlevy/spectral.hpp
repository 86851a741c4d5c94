#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "qlevy/calculus.hpp"
#include "qlevy/charfn.hpp"
#include "qlevy/measures.hpp"
#include "qlevy/triplet.hpp"

namespace qlevy {

/// Continuous branch of log along a sampled path. values[0] must be 1.
/// Throws ZeroOnPath when a sample is below zero_tol in modulus and
/// StepTooCoarse when two neighbours differ in phase by step_guard or more.
std::vector<cplx> distinguished_log(std::span<const cplx> values, double step_guard = 0.9 * std::numbers::pi,
                                    double zero_tol = 1e-10);

struct TripletParams {
  /// Grid points per axis; 0 picks 1024 (d <= 2), 128 (d = 3) or 32.
  std::size_t n_init = 0;
  /// 0 picks 2^16 (d = 1), 2^11 (d = 2), 2^8 (d = 3) or 2^6.
  std::size_t n_max = 0;
  /// Bound on the coefficient mass in the outer quarter of the window and on
  /// the imaginary parts of the coefficients.
  double tol = 1e-10;
  /// Bound on TV(reconstruction, law) before a grid is accepted.
  double residual_tol = 1e-9;
  /// |lambda| below this is dropped into the tail bound.
  double drop_below = 1e-13;
  SeparationParams separation;
  ExpSeriesParams series;
};

struct TripletReport {
  QuasiTriplet triplet;
  SeparationCertificate certificate;
  /// The law the triplet describes: the input, rebased when its basis was a
  /// multi-element rational one.
  DiscreteLaw law;
  std::size_t grid = 0;
  int refinements = 0;
  double max_phase_jump = 0.0;
  double outer_mass = 0.0;
  double max_imag = 0.0;
  double dropped = 0.0;
  double residual = 0.0;
};

/// Lattice laws (d = 1, or any exact rational basis): DFT of the distinguished
/// log of the lattice polynomial on the circle.
TripletReport triplet_lattice_report(const DiscreteLaw& law, const TripletParams& params = {});
QuasiTriplet triplet_lattice(const DiscreteLaw& law, const TripletParams& params = {});

/// d-dimensional torus computation over the law's own basis. The law must
/// already be certified on the torus; `certificate` is stored in the report.
TripletReport triplet_torus(const DiscreteLaw& law, const SeparationCertificate& certificate,
                            const TripletParams& params = {});

/// Dispatches to the lattice engine when possible, otherwise certifies on
/// the torus and runs triplet_torus. Throws NotSeparated unless Certified.
TripletReport triplet_multibasis_report(const DiscreteLaw& law, const TripletParams& params = {});
QuasiTriplet triplet_multibasis(const DiscreteLaw& law, const TripletParams& params = {});

/// Keeps the n heaviest atoms (ties broken by coordinates) and renormalizes.
/// sup_t |f(t) - f_n(t)| <= 2 * discarded.
struct TruncatedLaw {
  DiscreteLaw law;
  double discarded = 0.0;
  double cf_sup_bound = 0.0;
};

TruncatedLaw truncate_law(const DiscreteLaw& law, std::size_t n);

/// Triplet of a truncated law with the truncation bound added to tail_bound.
QuasiTriplet triplet_truncated(const TruncatedLaw& truncated, const TripletParams& params = {});

/// f(t) = exp{ i t gamma + sum lambda_u (e^{itu} - 1) }.
cplx cf_from_triplet(const QuasiTriplet& triplet, double t);

/// exp{ i tau gamma_tau + sum lambda_u (e^{i tau u} - 1 - i sin(tau u)) }.
cplx cf_centered(const QuasiTriplet& triplet, double tau);

struct MeanMotionSample {
  double horizon = 0.0;
  double estimate = 0.0;
  /// (sum |lambda| + tail_bound) / horizon.
  double bound = 0.0;
};

struct MeanMotion {
  double exact = 0.0;
  std::vector<MeanMotionSample> samples;
};

/// gamma from the triplet next to Arg f(T)/T, the phase being unwrapped
/// along [0, T] for every T in `horizons`.
MeanMotion mean_motion(const DiscreteLaw& law, const QuasiTriplet& triplet,
                       std::span<const double> horizons = {}, const SeparationParams& separation = {});

/// gamma + (1/tau) sum lambda_u sin(tau u).
double gamma_tau(const QuasiTriplet& triplet, double tau);

/// Lambda(u) = -sum_{u_k > u} lambda for u > 0, sum_{u_k <= u} lambda for
/// u < 0, and 0 at u = 0.
class SpectralFunction {
 public:
  struct Jump {
    double u = 0.0;
    double lambda = 0.0;
  };

  explicit SpectralFunction(std::vector<Jump> jumps);

  double operator()(double u) const;
  std::span<const Jump> jumps() const noexcept { return jumps_; }
  /// Total variation of Lambda on {|u| >= r}.
  double variation_outside(double r) const;

 private:
  std::vector<Jump> jumps_;  // sorted by u
};

SpectralFunction levy_spectral_function(const QuasiTriplet& triplet);

}  // namespace qlevy
