#include "qlevy/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "dense_box.hpp"
#include "qlevy/errors.hpp"

namespace qlevy {
namespace {

void check_coords(const FrequencyBasis& basis, const Coords& c) {
  if (c.size() != basis.dim())
    throw Error(Errc::InvalidArgument, "coordinate vector of length " + std::to_string(c.size()) +
                                           " for a basis of dimension " + std::to_string(basis.dim()));
}

void require_same_basis(const FrequencyBasis& a, const FrequencyBasis& b) {
  if (!(a == b)) throw Error(Errc::BasisMismatch, "measures are expressed over different bases");
}

std::int64_t lcm_checked(std::int64_t a, std::int64_t b) {
  const std::int64_t l = std::lcm(a, b);
  if (l <= 0) throw Error(Errc::InvalidArgument, "denominator lcm overflow");
  return l;
}

}  // namespace

// ---------------------------------------------------------------- basis

FrequencyBasis::FrequencyBasis(std::vector<double> alphas, bool declared_independent)
    : alphas_(std::move(alphas)), declared_independent_(declared_independent) {
  if (alphas_.empty()) throw Error(Errc::InvalidBasis, "basis must have at least one element");
  for (double a : alphas_)
    if (!std::isfinite(a)) throw Error(Errc::InvalidBasis, "basis elements must be finite");
  if (alphas_.size() == 1 && alphas_[0] == 0.0) return;
  std::set<double> seen;
  for (double a : alphas_) {
    if (a == 0.0) throw Error(Errc::InvalidBasis, "zero basis element in a nontrivial basis");
    if (!seen.insert(a).second) throw Error(Errc::InvalidBasis, "basis elements must be distinct");
  }
}

FrequencyBasis::FrequencyBasis(std::vector<Rational> exact) : exact_(std::move(exact)) {
  if (exact_.empty()) throw Error(Errc::InvalidBasis, "basis must have at least one element");
  alphas_.reserve(exact_.size());
  for (const auto& r : exact_) alphas_.push_back(r.to_double());
  if (exact_.size() == 1 && exact_[0].is_zero()) return;
  std::set<Rational> seen;
  for (const auto& r : exact_) {
    if (r.is_zero()) throw Error(Errc::InvalidBasis, "zero basis element in a nontrivial basis");
    if (!seen.insert(r).second) throw Error(Errc::InvalidBasis, "basis elements must be distinct");
  }
}

FrequencyBasis FrequencyBasis::integers() { return FrequencyBasis(std::vector<Rational>{Rational(1)}); }

double FrequencyBasis::value(std::span<const std::int64_t> coords) const {
  double v = 0.0;
  for (std::size_t j = 0; j < alphas_.size(); ++j) v += static_cast<double>(coords[j]) * alphas_[j];
  return v;
}

std::optional<Rational> FrequencyBasis::exact_value(std::span<const std::int64_t> coords) const {
  if (!is_exact()) return std::nullopt;
  Rational v(0);
  for (std::size_t j = 0; j < exact_.size(); ++j) v = v + coords[j] * exact_[j];
  return v;
}

SupportPoint support_point(const FrequencyBasis& basis, Coords coords) {
  check_coords(basis, coords);
  const double v = basis.value(coords);
  return {std::move(coords), v};
}

// ---------------------------------------------------------------- measures

SignedAtomicMeasure::SignedAtomicMeasure(FrequencyBasis basis, AtomMap atoms)
    : basis_(std::move(basis)), atoms_(std::move(atoms)) {
  for (const auto& [c, w] : atoms_) {
    check_coords(basis_, c);
    if (!std::isfinite(w)) throw Error(Errc::InvalidArgument, "non-finite weight");
  }
}

double SignedAtomicMeasure::weight(const Coords& c) const {
  auto it = atoms_.find(c);
  return it == atoms_.end() ? 0.0 : it->second;
}

double SignedAtomicMeasure::total_weight() const {
  double s = 0.0;
  for (const auto& [c, w] : atoms_) s += w;
  return s;
}

// ---------------------------------------------------------------- laws

DiscreteLaw::DiscreteLaw(FrequencyBasis basis, std::vector<Atom> atoms, std::optional<LatticeForm> lattice)
    : basis_(std::move(basis)), lattice_(std::move(lattice)) {
  if (atoms.empty()) throw Error(Errc::EmptyLaw, "a law needs at least one atom");
  double total = 0.0;
  for (auto& a : atoms) {
    check_coords(basis_, a.coords);
    if (!std::isfinite(a.mass)) throw Error(Errc::InvalidArgument, "non-finite mass");
    if (a.mass < 0.0) throw Error(Errc::NegativeMass, "negative mass " + std::to_string(a.mass));
    if (!atoms_.try_emplace(a.coords, a.mass).second)
      throw Error(Errc::DuplicateAtom, "atom coordinates listed twice");
    total += a.mass;
  }
  if (std::abs(total - 1.0) > kMassSumTolerance)
    throw Error(Errc::MassSumNotOne, "masses sum to " + std::to_string(total));
  std::erase_if(atoms_, [](const auto& kv) { return kv.second == 0.0; });
  if (atoms_.empty()) throw Error(Errc::EmptyLaw, "all atoms have zero mass");

  if (lattice_) {
    if (basis_.dim() != 1) throw Error(Errc::InvalidArgument, "lattice form requires a one-element basis");
    if (lattice_->coord_step <= 0 || !(lattice_->span > 0.0))
      throw Error(Errc::InvalidArgument, "lattice span must be positive");
    for (const auto& [c, w] : atoms_)
      if ((c[0] - lattice_->coord_offset) % lattice_->coord_step != 0 || c[0] < lattice_->coord_offset)
        throw Error(Errc::InvalidArgument, "support point off the declared lattice");
  }
}

double DiscreteLaw::mass(const Coords& c) const {
  auto it = atoms_.find(c);
  return it == atoms_.end() ? 0.0 : it->second;
}

double DiscreteLaw::max_mass() const {
  double m = 0.0;
  for (const auto& [c, w] : atoms_) m = std::max(m, w);
  return m;
}

std::vector<Atom> DiscreteLaw::atom_list() const {
  std::vector<Atom> out;
  out.reserve(atoms_.size());
  for (const auto& [c, w] : atoms_) out.push_back({c, w});
  return out;
}

DiscreteLaw validate_law(FrequencyBasis basis, std::vector<Atom> atoms) {
  return DiscreteLaw(std::move(basis), std::move(atoms));
}

DiscreteLaw validate_law(const DiscreteLaw& law) {
  return DiscreteLaw(law.basis(), law.atom_list(), law.lattice_form());
}

// ---------------------------------------------------------------- algebra

SignedAtomicMeasure point_mass(const FrequencyBasis& basis, Coords coords, double weight) {
  check_coords(basis, coords);
  AtomMap atoms;
  if (weight != 0.0) atoms.emplace(std::move(coords), weight);
  return SignedAtomicMeasure(basis, std::move(atoms));
}

double total_variation(const SignedAtomicMeasure& m) {
  double s = 0.0;
  for (const auto& [c, w] : m.atoms()) s += std::abs(w);
  return s;
}

SignedAtomicMeasure convolve(const SignedAtomicMeasure& a, const SignedAtomicMeasure& b) {
  require_same_basis(a.basis(), b.basis());
  const std::size_t d = a.basis().dim();
  if (a.atoms().empty() || b.atoms().empty()) return SignedAtomicMeasure(a.basis());

  // Small products are summed pairwise, which keeps results exact whenever
  // the products are representable.
  if (static_cast<double>(a.size()) * static_cast<double>(b.size()) <= 2e5) {
    AtomMap out;
    Coords c(d);
    for (const auto& [ca, wa] : a.atoms()) {
      for (const auto& [cb, wb] : b.atoms()) {
        for (std::size_t j = 0; j < d; ++j) c[j] = ca[j] + cb[j];
        out[c] += wa * wb;
      }
    }
    std::erase_if(out, [](const auto& kv) { return kv.second == 0.0; });
    return SignedAtomicMeasure(a.basis(), std::move(out));
  }
  const auto box = detail::convolve(detail::DenseBox::from_atoms(a.atoms(), d),
                                    detail::DenseBox::from_atoms(b.atoms(), d));
  return SignedAtomicMeasure(a.basis(), box.to_atoms());
}

SignedAtomicMeasure add(const SignedAtomicMeasure& a, const SignedAtomicMeasure& b) {
  require_same_basis(a.basis(), b.basis());
  AtomMap out = a.atoms();
  for (const auto& [c, w] : b.atoms()) out[c] += w;
  std::erase_if(out, [](const auto& kv) { return kv.second == 0.0; });
  return SignedAtomicMeasure(a.basis(), std::move(out));
}

SignedAtomicMeasure subtract(const SignedAtomicMeasure& a, const SignedAtomicMeasure& b) {
  return add(a, scale(b, -1.0));
}

SignedAtomicMeasure scale(const SignedAtomicMeasure& m, double factor) {
  AtomMap out;
  if (factor != 0.0)
    for (const auto& [c, w] : m.atoms()) out.emplace(c, w * factor);
  return SignedAtomicMeasure(m.basis(), std::move(out));
}

SignedAtomicMeasure translate(const SignedAtomicMeasure& m, const Coords& shift) {
  check_coords(m.basis(), shift);
  AtomMap out;
  for (const auto& [c, w] : m.atoms()) {
    Coords moved = c;
    for (std::size_t j = 0; j < moved.size(); ++j) moved[j] += shift[j];
    out.emplace(std::move(moved), w);
  }
  return SignedAtomicMeasure(m.basis(), std::move(out));
}

// ---------------------------------------------------------------- modules

ModuleDescription module_generator(const DiscreteLaw& law) {
  if (!law.basis().is_exact())
    throw Error(Errc::IrrationalSupport, "support values are not exact rationals; declare a basis instead");
  Rational c(0);
  for (const auto& [coords, p] : law.atoms()) c = gcd(c, *law.basis().exact_value(coords));
  return {c, law.basis()};
}

DiscreteLaw rebase_exact(const DiscreteLaw& law) {
  const FrequencyBasis& basis = law.basis();
  if (!basis.is_exact()) throw Error(Errc::IrrationalSupport, "rebasing needs an exact rational basis");
  if (basis.dim() == 1) return law;
  std::int64_t l = 1;
  for (const auto& r : basis.exact()) l = lcm_checked(l, r.den());
  std::vector<Atom> atoms;
  for (const auto& [coords, p] : law.atoms()) {
    const Rational v = *basis.exact_value(coords) * Rational(l);
    atoms.push_back({Coords{v.num()}, p});
  }
  return DiscreteLaw(FrequencyBasis(std::vector<Rational>{Rational(1, l)}), std::move(atoms));
}

DiscreteLaw to_lattice_form(const DiscreteLaw& law) {
  if (law.lattice_form()) return law;
  if (law.dim() != 1) {
    if (!law.basis().is_exact())
      throw Error(Errc::IrrationalSupport,
                  "support over a multi-element irrational basis is not a lattice");
    return to_lattice_form(rebase_exact(law));
  }

  // Orient the basis so the span comes out positive.
  if (law.basis().alpha(0) < 0.0) {
    std::vector<Atom> flipped;
    for (const auto& [c, p] : law.atoms()) flipped.push_back({Coords{-c[0]}, p});
    FrequencyBasis pos = law.basis().is_exact()
                             ? FrequencyBasis(std::vector<Rational>{-law.basis().exact()[0]})
                             : FrequencyBasis(std::vector<double>{-law.basis().alpha(0)},
                                              law.basis().declared_independent());
    return to_lattice_form(DiscreteLaw(std::move(pos), std::move(flipped)));
  }

  const std::int64_t lo = law.atoms().begin()->first[0];
  std::int64_t step = 0;
  for (const auto& [c, p] : law.atoms()) step = std::gcd(step, c[0] - lo);
  if (step == 0) step = 1;  // single atom: any span works, use the basis element

  LatticeForm lf;
  lf.coord_offset = lo;
  lf.coord_step = step;
  const double alpha = law.basis().alpha(0);
  lf.offset = static_cast<double>(lo) * alpha;
  lf.span = alpha == 0.0 ? 1.0 : static_cast<double>(step) * alpha;
  if (law.basis().is_exact()) {
    const Rational a = law.basis().exact()[0];
    lf.offset_exact = lo * a;
    lf.span_exact = a.is_zero() ? Rational(1) : step * a;
  }
  return DiscreteLaw(law.basis(), law.atom_list(), lf);
}

std::vector<std::pair<std::int64_t, double>> lattice_masses(const DiscreteLaw& law) {
  if (!law.lattice_form()) throw Error(Errc::InvalidArgument, "law has no lattice form");
  const LatticeForm& lf = *law.lattice_form();
  std::vector<std::pair<std::int64_t, double>> out;
  out.reserve(law.size());
  for (const auto& [c, p] : law.atoms()) out.emplace_back((c[0] - lf.coord_offset) / lf.coord_step, p);
  return out;
}

}  // namespace qlevy
