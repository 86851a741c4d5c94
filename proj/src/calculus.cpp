#include "qlevy/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dense_box.hpp"
#include "qlevy/errors.hpp"

namespace qlevy {
namespace {

// Smallest M with scale * e^{x} x^{M+1}/(M+1)! <= target, or -1 past max_terms.
int series_terms(double x, double scale, double target, int max_terms, double& tail_out) {
  if (x == 0.0) {
    tail_out = 0.0;
    return 0;
  }
  // log of e^x x^{M+1}/(M+1)!, advanced incrementally.
  double log_term = x + std::log(x);  // M = 0
  const double log_target = std::log(target / scale);
  for (int m = 0; m <= max_terms; ++m) {
    if (log_term <= log_target) {
      tail_out = scale * std::exp(log_term);
      return m;
    }
    log_term += std::log(x) - std::log(static_cast<double>(m + 2));
  }
  return -1;
}

bool near_integer(double x) { return std::abs(x - std::round(x)) <= 1e-9 * std::max(1.0, std::abs(x)); }

PowerClass classify(const SignedAtomicMeasure& m, double negative_tol) {
  for (const auto& [c, w] : m.atoms())
    if (w < -negative_tol) return PowerClass::Signed;
  return PowerClass::Probability;
}

}  // namespace

CompoundExp compound_exp(const FrequencyBasis& basis, const Coords& gamma,
                         const std::map<Coords, double>& lambdas, const ExpSeriesParams& params) {
  if (!(params.tol > 0.0) || params.max_terms < 1)
    throw Error(Errc::InvalidArgument, "series tolerance must be positive and max_terms >= 1");
  const std::size_t d = basis.dim();
  if (gamma.size() != d) throw Error(Errc::InvalidArgument, "gamma coordinates have the wrong length");

  double norm = 0.0;
  double sum = 0.0;
  AtomMap kernel;
  for (const auto& [l, v] : lambdas) {
    if (l.size() != d) throw Error(Errc::InvalidArgument, "frequency coordinates have the wrong length");
    if (v == 0.0) continue;
    norm += std::abs(v);
    sum += v;
    kernel.emplace(l, v);
  }
  if (!std::isfinite(norm)) throw Error(Errc::Diverged, "spectral weights are not summable");

  CompoundExp out{SignedAtomicMeasure(basis)};
  if (kernel.empty()) {
    out.measure = point_mass(basis, gamma);
    return out;
  }

  const double prefactor = std::exp(-sum);
  double tail = 0.0;
  const int terms = series_terms(norm, prefactor, 0.5 * params.tol, params.max_terms, tail);
  if (terms < 0)
    throw Error(Errc::Diverged, "series tail bound does not close within " + std::to_string(params.max_terms) +
                                    " terms (||N|| = " + std::to_string(norm) + ")");
  const double threshold = params.tol / (10.0 * std::max(terms, 1));

  const auto n_box = detail::DenseBox::from_atoms(kernel, d);
  detail::DenseBox term = detail::DenseBox::point(Coords(d, 0), 1.0);
  detail::DenseBox total = term;
  double pruned_terms = 0.0;
  for (int n = 1; n <= terms; ++n) {
    term = detail::convolve(term, n_box);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (double& w : term.w) w *= inv_n;
    pruned_terms += term.prune(threshold);
    if (term.empty()) break;
    total.axpy(1.0, term);
  }
  for (double& w : total.w) w *= prefactor;
  const double pruned_total = total.prune(threshold);
  for (std::size_t j = 0; j < d; ++j) total.lo[j] += gamma[j];

  out.measure = SignedAtomicMeasure(basis, total.to_atoms());
  out.terms = terms;
  out.series_tail = tail;
  // A perturbation of one term propagates through later convolutions by at
  // most a factor sum_k ||N||^k/k! = e^{||N||}.
  out.pruned = prefactor * std::exp(norm) * pruned_terms + pruned_total;
  out.residual = out.series_tail + out.pruned;
  return out;
}

CompoundExp compound_exp(const QuasiTriplet& triplet, const ExpSeriesParams& params) {
  return compound_exp(triplet.basis(), triplet.gamma_coords(), triplet.lambdas(), params);
}

Reconstruction reconstruct_law(const QuasiTriplet& triplet, const ReconstructParams& params) {
  const CompoundExp ce = compound_exp(triplet, params.series);
  std::vector<Atom> atoms;
  double clamped = 0.0;
  double total = 0.0;
  for (const auto& [c, w] : ce.measure.atoms()) {
    if (w < -params.negative_tol)
      throw Error(Errc::NegativeMassBeyondTolerance,
                  "reconstruction has weight " + std::to_string(w) + ": the triplet is not of a probability law");
    if (w <= 0.0) {
      clamped += -w;
      continue;
    }
    atoms.push_back({c, w});
    total += w;
  }
  if (!(total > 0.0)) throw Error(Errc::NegativeMassBeyondTolerance, "reconstruction has no positive mass");
  for (auto& a : atoms) a.mass /= total;
  return {DiscreteLaw(triplet.basis(), std::move(atoms)), ce.residual + clamped + std::abs(total - 1.0)};
}

double exponent_perturbation_bound(double delta) { return std::expm1(delta); }

PowerResult conv_power(const QuasiTriplet& triplet, double s, const ExpSeriesParams& params,
                       double negative_tol) {
  if (!(s >= 0.0) || !std::isfinite(s)) throw Error(Errc::InvalidArgument, "power must be finite and >= 0");
  const std::size_t d = triplet.basis().dim();

  std::map<Coords, double> scaled;
  if (s > 0.0)
    for (const auto& [l, v] : triplet.lambdas()) scaled.emplace(l, s * v);

  Coords shift(d, 0);
  std::vector<double> residual_shift(d, 0.0);
  bool in_module = true;
  for (std::size_t j = 0; j < d; ++j) {
    const double x = s * static_cast<double>(triplet.gamma_coords()[j]);
    if (!near_integer(x)) in_module = false;
    residual_shift[j] = x;
  }
  if (in_module) {
    for (std::size_t j = 0; j < d; ++j) shift[j] = static_cast<std::int64_t>(std::llround(residual_shift[j]));
    std::fill(residual_shift.begin(), residual_shift.end(), 0.0);
  }

  CompoundExp ce = compound_exp(triplet.basis(), shift, scaled, params);
  const PowerClass cls = classify(ce.measure, negative_tol);
  return {std::move(ce.measure), cls, s, std::move(residual_shift), in_module, ce.residual};
}

PowerResult convolve(const PowerResult& a, const PowerResult& b, double negative_tol) {
  SignedAtomicMeasure m = convolve(a.measure, b.measure);
  const std::size_t d = m.basis().dim();
  std::vector<double> shift(d);
  bool integral = true;
  for (std::size_t j = 0; j < d; ++j) {
    shift[j] = a.residual_shift.at(j) + b.residual_shift.at(j);
    integral = integral && near_integer(shift[j]);
  }
  if (integral) {
    Coords c(d);
    for (std::size_t j = 0; j < d; ++j) c[j] = static_cast<std::int64_t>(std::llround(shift[j]));
    m = translate(m, c);
    std::fill(shift.begin(), shift.end(), 0.0);
  }
  const double residual = a.residual * total_variation(b.measure) + b.residual * total_variation(a.measure) +
                         a.residual * b.residual;
  const PowerClass cls = classify(m, negative_tol);
  return {std::move(m), cls, a.s + b.s, std::move(shift), integral, residual};
}

bool is_infinitely_divisible(const QuasiTriplet& triplet, double tol) {
  if (triplet.tail_bound() > tol) return false;
  return std::all_of(triplet.lambdas().begin(), triplet.lambdas().end(),
                     [tol](const auto& kv) { return kv.second >= -tol; });
}

}  // namespace qlevy
