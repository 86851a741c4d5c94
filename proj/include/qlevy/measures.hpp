#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qlevy/rational.hpp"

namespace qlevy {

/// Integer coordinates of a support point (or a frequency) over a basis.
using Coords = std::vector<std::int64_t>;

/// Ordered so that iteration (and every serialized output) is deterministic.
using AtomMap = std::map<Coords, double>;

inline constexpr double kMassSumTolerance = 1e-12;

/// Real numbers alpha_1..alpha_d through which support points are written
/// with integer coordinates. Z-linear independence is never verified: the
/// flag only records what the caller asserted.
class FrequencyBasis {
 public:
  explicit FrequencyBasis(std::vector<double> alphas, bool declared_independent = false);
  /// Exact rational basis. Doubles are derived from the fractions.
  explicit FrequencyBasis(std::vector<Rational> exact);

  /// The basis {1}: support points are plain integers.
  static FrequencyBasis integers();

  std::size_t dim() const noexcept { return alphas_.size(); }
  std::span<const double> alphas() const noexcept { return alphas_; }
  double alpha(std::size_t j) const { return alphas_.at(j); }
  bool declared_independent() const noexcept { return declared_independent_; }

  bool is_exact() const noexcept { return !exact_.empty(); }
  const std::vector<Rational>& exact() const noexcept { return exact_; }

  /// The degenerate basis {0}, used only by laws concentrated at zero.
  bool is_trivial() const noexcept { return alphas_.size() == 1 && alphas_[0] == 0.0; }

  double value(std::span<const std::int64_t> coords) const;
  std::optional<Rational> exact_value(std::span<const std::int64_t> coords) const;

  friend bool operator==(const FrequencyBasis&, const FrequencyBasis&) = default;

 private:
  std::vector<double> alphas_;
  std::vector<Rational> exact_;
  bool declared_independent_ = false;
};

/// A support point: coordinates plus the derived real value.
struct SupportPoint {
  Coords coords;
  double value = 0.0;
};

SupportPoint support_point(const FrequencyBasis& basis, Coords coords);

/// Finitely supported real-weighted atomic measure.
class SignedAtomicMeasure {
 public:
  explicit SignedAtomicMeasure(FrequencyBasis basis, AtomMap atoms = {});

  const FrequencyBasis& basis() const noexcept { return basis_; }
  const AtomMap& atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  double weight(const Coords& c) const;
  double total_weight() const;

  friend bool operator==(const SignedAtomicMeasure&, const SignedAtomicMeasure&) = default;

 private:
  FrequencyBasis basis_;
  AtomMap atoms_;
};

/// Lattice description of a one-dimensional law: every support point has
/// coordinate coord_offset + coord_step * l over the single basis element,
/// i.e. value offset + span * l.
struct LatticeForm {
  std::int64_t coord_offset = 0;
  std::int64_t coord_step = 1;
  double offset = 0.0;
  double span = 1.0;
  std::optional<Rational> offset_exact;
  std::optional<Rational> span_exact;

  friend bool operator==(const LatticeForm&, const LatticeForm&) = default;
};

struct Atom {
  Coords coords;
  double mass = 0.0;
};

/// Finitely supported probability law. Construction validates: masses are
/// nonnegative, sum to one within 1e-12, coordinates are distinct; zero-mass
/// atoms are dropped so the stored atoms are exactly the growth points.
class DiscreteLaw {
 public:
  DiscreteLaw(FrequencyBasis basis, std::vector<Atom> atoms,
              std::optional<LatticeForm> lattice = std::nullopt);

  const FrequencyBasis& basis() const noexcept { return basis_; }
  const AtomMap& atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  std::size_t dim() const noexcept { return basis_.dim(); }
  const std::optional<LatticeForm>& lattice_form() const noexcept { return lattice_; }
  double mass(const Coords& c) const;
  double max_mass() const;

  std::vector<Atom> atom_list() const;
  SignedAtomicMeasure as_measure() const { return SignedAtomicMeasure(basis_, atoms_); }

  friend bool operator==(const DiscreteLaw&, const DiscreteLaw&) = default;

 private:
  FrequencyBasis basis_;
  AtomMap atoms_;
  std::optional<LatticeForm> lattice_;
};

/// Z-module generated by the support. For rational support `generator` is
/// the c >= 0 with <X> = cZ; otherwise the module is the integer span of
/// `basis` and `generator` is empty.
struct ModuleDescription {
  std::optional<Rational> generator;
  FrequencyBasis basis;
};

DiscreteLaw validate_law(FrequencyBasis basis, std::vector<Atom> atoms);
DiscreteLaw validate_law(const DiscreteLaw& law);

SignedAtomicMeasure point_mass(const FrequencyBasis& basis, Coords coords, double weight = 1.0);

double total_variation(const SignedAtomicMeasure& m);

SignedAtomicMeasure convolve(const SignedAtomicMeasure& a, const SignedAtomicMeasure& b);
SignedAtomicMeasure add(const SignedAtomicMeasure& a, const SignedAtomicMeasure& b);
SignedAtomicMeasure subtract(const SignedAtomicMeasure& a, const SignedAtomicMeasure& b);
SignedAtomicMeasure scale(const SignedAtomicMeasure& m, double factor);
SignedAtomicMeasure translate(const SignedAtomicMeasure& m, const Coords& shift);

ModuleDescription module_generator(const DiscreteLaw& law);

/// Rewrites a law over an exact rational basis of any dimension onto the
/// single-element basis {1/L}, L the lcm of the basis denominators.
DiscreteLaw rebase_exact(const DiscreteLaw& law);

/// Returns the law (rebased when needed, see rebase_exact) with its lattice
/// form filled in: offset = smallest support value, span = generator of the
/// support differences.
DiscreteLaw to_lattice_form(const DiscreteLaw& law);

/// (l, q_l) pairs of a law that carries a lattice form, sorted by l >= 0.
std::vector<std::pair<std::int64_t, double>> lattice_masses(const DiscreteLaw& law);

}  // namespace qlevy
