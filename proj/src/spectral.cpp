#include "qlevy/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qlevy/errors.hpp"
#include "qlevy/fft.hpp"

namespace qlevy {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kJumpLimit = kPi / 2.0;

std::size_t default_n_init(std::size_t d) {
  if (d <= 2) return 1024;
  if (d == 3) return 128;
  return 32;
}

std::size_t default_n_max(std::size_t d) {
  switch (d) {
    case 1: return std::size_t{1} << 16;
    case 2: return std::size_t{1} << 11;
    case 3: return std::size_t{1} << 8;
    default: return std::size_t{1} << 6;
  }
}

std::int64_t wrap_index(std::int64_t c, std::size_t n) {
  const auto m = static_cast<std::int64_t>(n);
  return ((c % m) + m) % m;
}

std::int64_t signed_index(std::size_t k, std::size_t n) {
  return k <= n / 2 ? static_cast<std::int64_t>(k) : static_cast<std::int64_t>(k) - static_cast<std::int64_t>(n);
}

// Samples sum_k p_k exp(i <c_k, theta>) on the uniform grid of N^d points.
std::vector<cplx> sample_grid(const std::vector<std::pair<Coords, double>>& atoms, std::size_t d, std::size_t n) {
  std::size_t total = 1;
  for (std::size_t j = 0; j < d; ++j) total *= n;
  std::vector<cplx> a(total, cplx{0.0, 0.0});
  for (const auto& [c, p] : atoms) {
    std::size_t idx = 0;
    for (std::size_t j = 0; j < d; ++j) idx = idx * n + static_cast<std::size_t>(wrap_index(c[j], n));
    a[idx] += p;
  }
  const std::vector<std::size_t> shape(d, n);
  fft::transform_nd(a, shape, true);
  return a;
}

struct GridOutcome {
  std::map<Coords, double> lambdas;
  Coords winding;
  double max_jump = 0.0;
  double outer = 0.0;
  double max_imag = 0.0;
  double dropped = 0.0;
  bool phase_ok = false;
};

// Unwraps log(phi) over the grid, removes the linear part i<m, theta> and
// reads the Fourier coefficients.
GridOutcome analyse_grid(const std::vector<cplx>& phi, std::size_t d, std::size_t n, double zero_tol,
                         double drop_below) {
  GridOutcome out;
  const std::size_t total = phi.size();
  for (const cplx& v : phi)
    if (std::abs(v) <= zero_tol) throw Error(Errc::ZeroOnPath, "torus function vanishes on the sampling grid");

  std::vector<std::size_t> stride(d, 1);
  for (std::size_t j = d - 1; j > 0; --j) stride[j - 1] = stride[j] * n;

  std::vector<cplx> log_phi(total);
  log_phi[0] = std::log(phi[0]);
  out.winding.assign(d, 0);
  std::vector<std::size_t> idx(d, 0);

  // Sweep axis a from every point whose coordinates a..d-1 are zero.
  for (std::size_t a = 0; a < d; ++a) {
    std::size_t starts = 1;
    for (std::size_t b = 0; b < a; ++b) starts *= n;
    for (std::size_t s = 0; s < starts; ++s) {
      std::size_t base = 0;
      std::size_t rem = s;
      for (std::size_t b = a; b-- > 0;) {
        base += (rem % n) * stride[b];
        rem /= n;
      }
      std::size_t prev = base;
      for (std::size_t j = 1; j < n; ++j) {
        const std::size_t cur = base + j * stride[a];
        const cplx step = std::log(phi[cur] / phi[prev]);
        out.max_jump = std::max(out.max_jump, std::abs(step.imag()));
        log_phi[cur] = log_phi[prev] + step;
        prev = cur;
      }
      if (s == 0) {
        const double closing = std::arg(phi[base] / phi[prev]);
        const double turn = log_phi[prev].imag() + closing - log_phi[base].imag();
        out.winding[a] = static_cast<std::int64_t>(std::llround(turn / kTwoPi));
      }
    }
  }

  // Every edge of the grid, wrap-around ones included, must be a small step
  // of the same branch.
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t rem = i;
    for (std::size_t b = d; b-- > 0;) {
      idx[b] = rem % n;
      rem /= n;
    }
    for (std::size_t a = 0; a < d; ++a) {
      const bool wraps = idx[a] == n - 1;
      const std::size_t next = wraps ? i - (n - 1) * stride[a] : i + stride[a];
      double diff = log_phi[next].imag() - log_phi[i].imag();
      if (wraps) diff += kTwoPi * static_cast<double>(out.winding[a]);
      out.max_jump = std::max(out.max_jump, std::abs(diff));
    }
  }
  out.phase_ok = out.max_jump < kJumpLimit;
  if (!out.phase_ok) return out;

  std::vector<cplx> h(total);
  const double dtheta = kTwoPi / static_cast<double>(n);
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t rem = i;
    double linear = 0.0;
    for (std::size_t b = d; b-- > 0;) {
      linear += static_cast<double>(out.winding[b]) * dtheta * static_cast<double>(rem % n);
      rem /= n;
    }
    h[i] = log_phi[i] - cplx{0.0, linear};
  }
  const std::vector<std::size_t> shape(d, n);
  fft::transform_nd(h, shape, false);
  const double inv_total = 1.0 / static_cast<double>(total);
  const auto outer_edge = static_cast<std::int64_t>(3 * n / 8);

  Coords l(d);
  for (std::size_t i = 1; i < total; ++i) {
    const cplx c = h[i] * inv_total;
    std::size_t rem = i;
    bool outer = false;
    for (std::size_t b = d; b-- > 0;) {
      l[b] = signed_index(rem % n, n);
      rem /= n;
      outer = outer || std::abs(l[b]) > outer_edge;
    }
    out.max_imag = std::max(out.max_imag, std::abs(c.imag()));
    if (outer) out.outer += std::abs(c);
    const double v = c.real();
    if (std::abs(v) < drop_below) {
      out.dropped += std::abs(v);
      continue;
    }
    out.lambdas.emplace(l, v);
  }
  return out;
}

double reconstruction_residual(const QuasiTriplet& triplet, const DiscreteLaw& law, const ExpSeriesParams& series) {
  CompoundExp ce = compound_exp(triplet, series);
  return total_variation(subtract(ce.measure, law.as_measure()));
}

[[noreturn]] void not_separated(const SeparationCertificate& cert) {
  throw Error(Errc::NotSeparated, "separation from zero not certified (verdict: " + cert.label() +
                                      ", best infimum estimate " + std::to_string(cert.best_inf_estimate) + ")");
}

// Shared refinement loop. `make_triplet` maps a grid outcome to a triplet of
// the target law; `atoms` are the exponents sampled on the torus.
template <class MakeTriplet>
void refine(TripletReport& report, const std::vector<std::pair<Coords, double>>& atoms, std::size_t d,
            const TripletParams& params, MakeTriplet make_triplet) {
  std::size_t n = params.n_init ? params.n_init : default_n_init(d);
  const std::size_t n_max = params.n_max ? params.n_max : default_n_max(d);
  if (!fft::is_pow2(n) || !fft::is_pow2(n_max) || n > n_max)
    throw Error(Errc::InvalidArgument, "grid sizes must be powers of two with n_init <= n_max");

  std::string last;
  for (int refinements = 0;; ++refinements, n *= 2) {
    if (n > n_max)
      throw Error(Errc::NonConvergent, "no admissible grid up to N = " + std::to_string(n_max) + " (" + last + ")");
    const GridOutcome g = analyse_grid(sample_grid(atoms, d, n), d, n, params.separation.zero_tol, params.drop_below);
    report.grid = n;
    report.refinements = refinements;
    report.max_phase_jump = g.max_jump;
    if (!g.phase_ok) {
      last = "phase jump " + std::to_string(g.max_jump);
      continue;
    }
    report.outer_mass = g.outer;
    report.max_imag = g.max_imag;
    report.dropped = g.dropped;
    if (g.outer >= params.tol || g.max_imag >= params.tol) {
      last = "outer mass " + std::to_string(g.outer) + ", imaginary part " + std::to_string(g.max_imag);
      continue;
    }
    QuasiTriplet t = make_triplet(g);
    try {
      report.residual = reconstruction_residual(t, report.law, params.series);
    } catch (const Error& e) {
      if (e.code() != Errc::Diverged) throw;
      throw Error(Errc::NonConvergent, std::string("reconstruction check failed: ") + e.what());
    }
    if (report.residual >= params.residual_tol) {
      last = "reconstruction residual " + std::to_string(report.residual);
      continue;
    }
    report.triplet = std::move(t);
    return;
  }
}

}  // namespace

std::vector<cplx> distinguished_log(std::span<const cplx> values, double step_guard, double zero_tol) {
  std::vector<cplx> out;
  if (values.empty()) return out;
  if (std::abs(values[0] - cplx{1.0, 0.0}) > 1e-9)
    throw Error(Errc::InvalidArgument, "a distinguished log path must start at 1");
  out.reserve(values.size());
  out.emplace_back(0.0, 0.0);
  for (std::size_t j = 1; j < values.size(); ++j) {
    if (std::abs(values[j]) <= zero_tol)
      throw Error(Errc::ZeroOnPath, "path value below the zero tolerance at index " + std::to_string(j));
    const double step = std::arg(values[j] / values[j - 1]);
    if (std::abs(step) >= step_guard)
      throw Error(Errc::StepTooCoarse, "phase step " + std::to_string(step) + " at index " + std::to_string(j));
    out.emplace_back(std::log(std::abs(values[j])), out.back().imag() + step);
  }
  return out;
}

TripletReport triplet_lattice_report(const DiscreteLaw& law, const TripletParams& params) {
  const DiscreteLaw lattice = to_lattice_form(law);
  const LatticeForm& lf = *lattice.lattice_form();
  const auto masses = lattice_masses(lattice);

  std::vector<Atom> poly_atoms;
  std::vector<std::pair<Coords, double>> atoms;
  for (const auto& [l, q] : masses) {
    poly_atoms.push_back({{l}, q});
    atoms.emplace_back(Coords{l}, q);
  }
  const DiscreteLaw poly(FrequencyBasis::integers(), poly_atoms);
  SeparationCertificate cert = certify_separation(poly, params.separation);
  cert.basis_declared_independent = law.basis().declared_independent();
  if (!cert.certified()) not_separated(cert);

  TripletReport report{QuasiTriplet(lattice.basis(), {lf.coord_offset}, {}), cert, lattice};
  if (masses.size() == 1) return report;

  refine(report, atoms, 1, params, [&](const GridOutcome& g) {
    std::map<Coords, double> lambdas;
    for (const auto& [k, v] : g.lambdas) lambdas.emplace(Coords{lf.coord_step * k[0]}, v);
    return QuasiTriplet(lattice.basis(), {lf.coord_offset + lf.coord_step * g.winding[0]}, std::move(lambdas),
                        g.dropped + g.outer);
  });
  return report;
}

QuasiTriplet triplet_lattice(const DiscreteLaw& law, const TripletParams& params) {
  return triplet_lattice_report(law, params).triplet;
}

TripletReport triplet_torus(const DiscreteLaw& law, const SeparationCertificate& certificate,
                            const TripletParams& params) {
  if (!certificate.certified()) not_separated(certificate);
  const std::size_t d = law.dim();
  TripletReport report{QuasiTriplet(law.basis(), Coords(d, 0), {}), certificate, law};
  std::vector<std::pair<Coords, double>> atoms(law.atoms().begin(), law.atoms().end());
  if (atoms.size() == 1) {
    report.triplet = QuasiTriplet(law.basis(), atoms.front().first, {});
    return report;
  }
  refine(report, atoms, d, params, [&](const GridOutcome& g) {
    return QuasiTriplet(law.basis(), g.winding, g.lambdas, g.dropped + g.outer);
  });
  return report;
}

TripletReport triplet_multibasis_report(const DiscreteLaw& law, const TripletParams& params) {
  if (law.dim() == 1 || law.basis().is_exact()) return triplet_lattice_report(law, params);
  SeparationCertificate cert = certify_separation(law, params.separation);
  if (!cert.certified()) not_separated(cert);
  return triplet_torus(law, cert, params);
}

QuasiTriplet triplet_multibasis(const DiscreteLaw& law, const TripletParams& params) {
  return triplet_multibasis_report(law, params).triplet;
}

TruncatedLaw truncate_law(const DiscreteLaw& law, std::size_t n) {
  if (n == 0) throw Error(Errc::InvalidArgument, "truncation must keep at least one atom");
  std::vector<Atom> atoms = law.atom_list();
  std::stable_sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.mass > b.mass; });
  double discarded = 0.0;
  for (std::size_t k = n; k < atoms.size(); ++k) discarded += atoms[k].mass;
  if (atoms.size() > n) atoms.resize(n);
  const double kept = std::accumulate(atoms.begin(), atoms.end(), 0.0,
                                      [](double s, const Atom& a) { return s + a.mass; });
  for (auto& a : atoms) a.mass /= kept;
  return {DiscreteLaw(law.basis(), std::move(atoms)), discarded, 2.0 * discarded};
}

QuasiTriplet triplet_truncated(const TruncatedLaw& truncated, const TripletParams& params) {
  const QuasiTriplet t = triplet_multibasis(truncated.law, params);
  return QuasiTriplet(t.basis(), t.gamma_coords(), t.lambdas(), t.tail_bound() + truncated.cf_sup_bound);
}

cplx cf_from_triplet(const QuasiTriplet& triplet, double t) {
  cplx exponent{0.0, t * triplet.gamma()};
  for (const auto& [l, v] : triplet.lambdas()) exponent += v * (std::polar(1.0, t * triplet.frequency(l)) - 1.0);
  return std::exp(exponent);
}

cplx cf_centered(const QuasiTriplet& triplet, double tau) {
  cplx exponent{0.0, tau * gamma_tau(triplet, tau)};
  for (const auto& [l, v] : triplet.lambdas()) {
    const double x = tau * triplet.frequency(l);
    exponent += v * cplx{std::cos(x) - 1.0, 0.0};
  }
  return std::exp(exponent);
}

MeanMotion mean_motion(const DiscreteLaw& law, const QuasiTriplet& triplet, std::span<const double> horizons,
                       const SeparationParams& separation) {
  static constexpr double kDefault[] = {10.0, 100.0, 1000.0};
  if (horizons.empty()) horizons = kDefault;

  MeanMotion out;
  out.exact = triplet.gamma();
  double speed = 0.0;  // bound on |f'|
  for (const auto& [c, p] : law.atoms()) speed += p * std::abs(law.basis().value(c));

  double h = 0.0;
  if (speed > 0.0) {
    const SeparationCertificate cert = certify_separation(law, separation);
    if (!cert.certified()) not_separated(cert);
    h = kPi / 4.0 * cert.mu / speed;  // phase moves at most pi/4 per step
  }
  const double spread = triplet.l1_norm() + triplet.tail_bound();

  for (double horizon : horizons) {
    if (!(horizon > 0.0)) throw Error(Errc::InvalidArgument, "horizons must be positive");
    double phase = 0.0;
    if (h > 0.0) {
      const auto steps = static_cast<std::size_t>(std::ceil(horizon / h));
      const double dt = horizon / static_cast<double>(steps);
      cplx prev{1.0, 0.0};
      for (std::size_t s = 1; s <= steps; ++s) {
        const cplx cur = cf_eval(law, dt * static_cast<double>(s));
        phase += std::arg(cur / prev);
        prev = cur;
      }
    }
    out.samples.push_back({horizon, phase / horizon, spread / horizon});
  }
  return out;
}

double gamma_tau(const QuasiTriplet& triplet, double tau) {
  if (!(tau > 0.0)) throw Error(Errc::NonpositiveTau, "tau must be positive");
  double s = 0.0;
  for (const auto& [l, v] : triplet.lambdas()) s += v * std::sin(tau * triplet.frequency(l));
  return triplet.gamma() + s / tau;
}

SpectralFunction::SpectralFunction(std::vector<Jump> jumps) : jumps_(std::move(jumps)) {
  std::sort(jumps_.begin(), jumps_.end(), [](const Jump& a, const Jump& b) { return a.u < b.u; });
}

double SpectralFunction::operator()(double u) const {
  double s = 0.0;
  if (u > 0.0) {
    for (const Jump& j : jumps_)
      if (j.u > u) s -= j.lambda;
  } else if (u < 0.0) {
    for (const Jump& j : jumps_)
      if (j.u <= u) s += j.lambda;
  }
  return s;
}

double SpectralFunction::variation_outside(double r) const {
  double s = 0.0;
  for (const Jump& j : jumps_)
    if (std::abs(j.u) >= r) s += std::abs(j.lambda);
  return s;
}

SpectralFunction levy_spectral_function(const QuasiTriplet& triplet) {
  std::vector<SpectralFunction::Jump> jumps;
  for (const auto& [l, v] : triplet.lambdas()) jumps.push_back({triplet.frequency(l), v});
  return SpectralFunction(std::move(jumps));
}

}  // namespace qlevy
