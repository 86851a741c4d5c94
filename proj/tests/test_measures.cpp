#include <doctest.h>

#include <random>

#include "qlevy/errors.hpp"
#include "qlevy/fft.hpp"
#include "qlevy/measures.hpp"
#include "qlevy/rational.hpp"
#include "support.hpp"

using namespace qlevy;

namespace {

FrequencyBasis Z() { return FrequencyBasis::integers(); }

DiscreteLaw on_z(std::vector<std::pair<std::int64_t, double>> pts) {
  std::vector<Atom> atoms;
  for (auto [x, p] : pts) atoms.push_back({{x}, p});
  return DiscreteLaw(Z(), atoms);
}

DiscreteLaw on_rationals(std::vector<std::pair<Rational, double>> pts) {
  // Common basis 1/L over all denominators.
  std::int64_t l = 1;
  for (auto& [r, p] : pts) l = std::lcm(l, r.den());
  std::vector<Atom> atoms;
  for (auto& [r, p] : pts) atoms.push_back({{(r * Rational(l)).num()}, p});
  return DiscreteLaw(FrequencyBasis(std::vector<Rational>{Rational(1, l)}), atoms);
}

Errc code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::InvalidArgument;
}

}  // namespace

TEST_CASE("rational arithmetic stays reduced") {
  const Rational a(4, 6), b(-1, 3);
  CHECK(a == Rational(2, 3));
  CHECK(a + b == Rational(1, 3));
  CHECK(a * b == Rational(-2, 9));
  CHECK(a / b == Rational(-2));
  CHECK(gcd(Rational(2, 3), Rational(1, 2)) == Rational(1, 6));
  CHECK(gcd(Rational(0), Rational(0)) == Rational(0));
  CHECK(divides(Rational(1, 6), Rational(7, 6)));
  CHECK_FALSE(divides(Rational(1, 3), Rational(1, 2)));
  CHECK_THROWS(Rational(1, 0));
}

TEST_CASE("validate_law") {
  SUBCASE("degenerate law") {
    const auto law = on_z({{0, 1.0}});
    CHECK(law.size() == 1);
    CHECK(validate_law(law) == law);
  }
  SUBCASE("zero-mass atoms are dropped") {
    const auto law = on_z({{0, 0.5}, {1, 0.5}, {2, 0.0}});
    CHECK(law.size() == 2);
  }
  SUBCASE("errors") {
    CHECK(code_of([] { on_z({{0, 0.6}, {1, 0.5}}); }) == Errc::MassSumNotOne);
    CHECK(code_of([] { on_z({{0, 1.2}, {1, -0.2}}); }) == Errc::NegativeMass);
    CHECK(code_of([] { on_z({{0, 0.5}, {0, 0.5}}); }) == Errc::DuplicateAtom);
    CHECK(code_of([] { on_z({}); }) == Errc::EmptyLaw);
  }
  SUBCASE("idempotent") {
    const auto law = on_z({{-2, 0.25}, {3, 0.75}});
    CHECK(validate_law(validate_law(law)) == validate_law(law));
  }
}

TEST_CASE("basis validation") {
  CHECK_THROWS_AS(FrequencyBasis(std::vector<double>{}), Error);
  CHECK_THROWS_AS(FrequencyBasis(std::vector<double>{1.0, 1.0}), Error);
  CHECK_THROWS_AS(FrequencyBasis(std::vector<double>{0.0, 1.0}), Error);
  CHECK_NOTHROW(FrequencyBasis(std::vector<double>{0.0}));
  const FrequencyBasis b(std::vector<double>{1.0, std::sqrt(2.0)});
  const auto sp = support_point(b, {2, -1});
  CHECK(sp.value == doctest::Approx(2.0 - std::sqrt(2.0)));
}

TEST_CASE("total variation") {
  CHECK(total_variation(SignedAtomicMeasure(Z())) == 0.0);
  CHECK(total_variation(on_z({{0, 0.3}, {5, 0.7}}).as_measure()) == doctest::Approx(1.0));
  const auto g2 = on_z({{0, 0.75}, {1, 0.25}});
  const auto g = on_z({{0, 0.5}, {1, 0.5}});
  CHECK(total_variation(subtract(g2.as_measure(), g.as_measure())) == doctest::Approx(0.5));
}

TEST_CASE("convolution") {
  const auto m = on_z({{0, 0.2}, {3, 0.8}}).as_measure();
  CHECK(convolve(point_mass(Z(), {0}), m) == m);
  CHECK(convolve(point_mass(Z(), {2}), point_mass(Z(), {5})) == point_mass(Z(), {7}));
  const auto half = on_z({{0, 0.5}, {1, 0.5}}).as_measure();
  const auto b2 = convolve(half, half);
  CHECK(b2.weight({0}) == doctest::Approx(0.25));
  CHECK(b2.weight({1}) == doctest::Approx(0.5));
  CHECK(b2.weight({2}) == doctest::Approx(0.25));

  const SignedAtomicMeasure other(FrequencyBasis(std::vector<double>{2.0}), {{{0}, 1.0}});
  CHECK_THROWS_AS(convolve(m, other), Error);
}

TEST_CASE("convolution properties on random signed measures") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> coord(-5, 5);
  // Dyadic weights keep every sum and product exact.
  std::uniform_int_distribution<int> wnum(-8, 8);
  auto random_measure = [&] {
    AtomMap m;
    for (int k = 0; k < 6; ++k) m[{coord(rng)}] = wnum(rng) / 8.0;
    return SignedAtomicMeasure(Z(), m);
  };
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_measure(), b = random_measure(), c = random_measure();
    CHECK(total_variation(add(a, b)) <= total_variation(a) + total_variation(b) + 1e-15);
    CHECK(total_variation(convolve(a, b)) <= total_variation(a) * total_variation(b) + 1e-12);
    CHECK(convolve(a, b) == convolve(b, a));
    CHECK(convolve(convolve(a, b), c) == convolve(a, convolve(b, c)));
  }
}

TEST_CASE("large convolutions agree with brute force") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  AtomMap a, b;
  oracle::Pmf pa, pb;
  for (int k = 0; k < 700; ++k) pa[k] = a[{k}] = u(rng);
  for (int k = 0; k < 500; ++k) pb[k - 200] = b[{k - 200}] = u(rng);
  const auto fast = convolve(SignedAtomicMeasure(Z(), a), SignedAtomicMeasure(Z(), b));
  CHECK(oracle::l1(support::pmf_of(fast), oracle::convolve(pa, pb)) < 1e-9);
}

TEST_CASE("fft matches the defining sum") {
  std::vector<fft::cplx> x(16);
  for (std::size_t j = 0; j < x.size(); ++j) x[j] = {std::cos(0.3 * j), std::sin(1.1 * j * j)};
  auto y = x;
  fft::transform(y, false);
  for (std::size_t k = 0; k < x.size(); ++k) {
    fft::cplx s{0, 0};
    for (std::size_t j = 0; j < x.size(); ++j) s += x[j] * std::polar(1.0, -2.0 * std::numbers::pi * j * k / 16.0);
    CHECK(std::abs(s - y[k]) < 1e-12);
  }
}

TEST_CASE("module generator") {
  CHECK(module_generator(on_z({{0, 1.0}})).generator == Rational(0));
  CHECK(module_generator(on_z({{3, 0.5}, {5, 0.5}})).generator == Rational(1));
  const auto law = on_rationals({{Rational(2, 3), 0.5}, {Rational(1, 2), 0.5}});
  const auto g = module_generator(law).generator;
  REQUIRE(g);
  CHECK(*g == Rational(1, 6));
  for (const auto& [c, p] : law.atoms()) CHECK(divides(*g, *law.basis().exact_value(c)));

  const DiscreteLaw irr(FrequencyBasis(std::vector<double>{1.0, std::sqrt(2.0)}, true), {{{0, 0}, 0.5}, {{0, 1}, 0.5}});
  CHECK(code_of([&] { module_generator(irr); }) == Errc::IrrationalSupport);
}

TEST_CASE("module generator divides every support value on random rational laws") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> num(-30, 30), den(1, 12);
  for (int trial = 0; trial < 100; ++trial) {
    std::map<Rational, double> pts;
    for (int k = 0; k < 4; ++k) pts[Rational(num(rng), den(rng))] = 0.25;
    std::vector<std::pair<Rational, double>> v;
    for (auto& [r, p] : pts) v.emplace_back(r, 1.0 / pts.size());
    const auto law = on_rationals(v);
    const auto g = *module_generator(law).generator;
    for (const auto& [c, p] : law.atoms()) CHECK(divides(g, *law.basis().exact_value(c)));
  }
}

TEST_CASE("lattice form") {
  SUBCASE("integers") {
    const auto lf = *to_lattice_form(on_z({{0, 0.5}, {1, 0.5}})).lattice_form();
    CHECK(lf.offset == 0.0);
    CHECK(lf.span == 1.0);
  }
  SUBCASE("rational offsets") {
    const auto law = to_lattice_form(on_rationals({{Rational(1, 2), 0.5}, {Rational(7, 6), 0.5}}));
    const auto lf = *law.lattice_form();
    CHECK(*lf.offset_exact == Rational(1, 2));
    CHECK(*lf.span_exact == Rational(2, 3));
    const auto masses = lattice_masses(law);
    REQUIRE(masses.size() == 2);
    CHECK(masses[0].first == 0);
    CHECK(masses[1].first == 1);
  }
  SUBCASE("multi-element rational basis is rebased") {
    const DiscreteLaw law(FrequencyBasis(std::vector<Rational>{Rational(1, 2), Rational(1, 3)}),
                          {{{1, 0}, 0.5}, {{0, 1}, 0.5}});
    const auto lf = *to_lattice_form(law).lattice_form();
    CHECK(*lf.offset_exact == Rational(1, 3));
    CHECK(*lf.span_exact == Rational(1, 6));
  }
  SUBCASE("irrational") {
    const DiscreteLaw law(FrequencyBasis(std::vector<double>{1.0, std::sqrt(2.0)}, true), {{{0, 0}, 0.5}, {{0, 1}, 0.5}});
    CHECK(code_of([&] { to_lattice_form(law); }) == Errc::IrrationalSupport);
  }
}
