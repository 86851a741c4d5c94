#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qlevy/measures.hpp"

namespace qlevy {

using cplx = std::complex<double>;

/// f(t) = sum_k p_k exp(i t x_k).
cplx cf_eval(const DiscreteLaw& law, double t);

/// phi(theta) = sum_k p_k exp(i <coords_k, theta>) on [0, 2pi)^d. Its
/// restriction to the line theta_j = t * alpha_j (mod 2pi) is the
/// characteristic function of the law.
class TorusFunction {
 public:
  explicit TorusFunction(const DiscreteLaw& law);

  std::size_t dim() const noexcept { return dim_; }
  cplx operator()(std::span<const double> theta) const;

  /// Per-coordinate Lipschitz constants L_j = sum_k p_k |coords_{k,j}|.
  std::span<const double> lipschitz() const noexcept { return lipschitz_; }

  /// The torus point (t alpha_j mod 2pi)_j on the diagonal line.
  std::vector<double> diagonal_point(double t) const;

  const DiscreteLaw& law() const noexcept { return law_; }

 private:
  DiscreteLaw law_;
  std::size_t dim_;
  std::vector<double> masses_;
  std::vector<double> coords_;  // row-major, size() x dim_
  std::vector<double> lipschitz_;
};

TorusFunction torus_lift(const DiscreteLaw& law);

/// 2 p* - 1 when the largest mass p* exceeds 1/2: a lower bound for |f|.
std::optional<double> dominant_mass_bound(const DiscreteLaw& law);

struct SeparationParams {
  int max_depth = 40;
  double zero_tol = 1e-10;
  /// Certify once the smallest cell bound reaches this fraction of the best
  /// sampled value.
  double target_gap = 0.9;
  std::size_t max_cells = std::size_t{1} << 21;
  /// Number of subdivision steps between two search-log entries.
  std::size_t log_every = 64;
};

struct SearchLogEntry {
  std::size_t step = 0;
  std::size_t leaves = 0;
  int depth = 0;
  double lower = 0.0;
  double upper = 0.0;
};

enum class SeparationVerdict { Certified, ZeroFound, Undecided };

struct SeparationCertificate {
  SeparationVerdict verdict = SeparationVerdict::Undecided;
  std::size_t dim = 1;
  /// Certified: proven lower bound for inf |f| over the real line.
  double mu = 0.0;
  /// Smallest sampled |phi| and where it was seen (torus coordinates).
  double best_inf_estimate = 0.0;
  std::vector<double> theta_star;
  /// d = 1 only: the real t in [0, 2pi/|alpha|) corresponding to theta_star.
  std::optional<double> t_star;
  int depth = 0;
  std::size_t cells = 0;
  /// Whether the torus reduction relied on a user-declared independent basis.
  bool basis_declared_independent = false;
  std::vector<SearchLogEntry> search_log;

  bool certified() const noexcept { return verdict == SeparationVerdict::Certified; }
  /// "certified", "zero", "infimum zero (torus)" or "undecided".
  std::string label() const;
};

SeparationCertificate certify_separation(const DiscreteLaw& law, const SeparationParams& params = {});

/// Same search applied to an explicit torus function.
SeparationCertificate certify_separation(const TorusFunction& phi, const SeparationParams& params = {});

}  // namespace qlevy
