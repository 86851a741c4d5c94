#include <doctest.h>

#include <random>

#include "qlevy/calculus.hpp"
#include "qlevy/errors.hpp"
#include "qlevy/spectral.hpp"
#include "support.hpp"

using namespace qlevy;
using support::law_of;
using support::pmf_of;

namespace {

QuasiTriplet integer_triplet(std::int64_t gamma, std::map<std::int64_t, double> lambdas, double tail = 0.0) {
  std::map<Coords, double> m;
  for (auto [k, v] : lambdas) m[{k}] = v;
  return QuasiTriplet(FrequencyBasis::integers(), {gamma}, m, tail);
}

double tv(const SignedAtomicMeasure& a, const SignedAtomicMeasure& b) { return total_variation(subtract(a, b)); }

}  // namespace

TEST_CASE("compound exponential") {
  SUBCASE("pure shift") {
    const auto ce = compound_exp(integer_triplet(5, {}));
    CHECK(ce.measure == point_mass(FrequencyBasis::integers(), {5}));
  }
  SUBCASE("Poisson(1)") {
    const auto ce = compound_exp(integer_triplet(0, {{1, 1.0}}));
    CHECK(ce.measure.weight({0}) == doctest::Approx(0.3678794).epsilon(1e-7));
    for (int k = 0; k < 20; ++k) CHECK(std::abs(ce.measure.weight({k}) - oracle::poisson(1.0, k)) < 1e-13);
    CHECK(std::abs(ce.measure.total_weight() - 1.0) < 1e-12);
    CHECK(ce.residual <= 1e-12);
  }
  SUBCASE("signed exponent against a direct series") {
    const auto ce = compound_exp(integer_triplet(0, {{1, 1.0}, {2, -0.1}}));
    // exp(-0.9) * sum_n (delta_1 - 0.1 delta_2)^n / n!, expanded by brute force.
    oracle::Pmf n1 = {{1, 1.0}, {2, -0.1}};
    oracle::Pmf term = {{0, 1.0}}, sum = {{0, 1.0}};
    for (int n = 1; n < 60; ++n) {
      term = oracle::convolve(term, n1);
      for (auto& [k, v] : term) v /= n;
      for (auto [k, v] : term) sum[k] += v;
    }
    for (auto& [k, v] : sum) v *= std::exp(-0.9);
    CHECK(oracle::l1(pmf_of(ce.measure), sum) < 1e-12);
    CHECK(std::abs(ce.measure.total_weight() - 1.0) < 1e-12);
  }
  SUBCASE("diverged") {
    ExpSeriesParams p;
    p.max_terms = 5;
    CHECK_THROWS_AS(compound_exp(integer_triplet(0, {{1, 3.0}}), p), Error);
  }
}

TEST_CASE("total weight of compound exponentials is one") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  std::uniform_int_distribution<int> k(-6, 6);
  for (int i = 0; i < 50; ++i) {
    std::map<std::int64_t, double> l;
    for (int j = 0; j < 4; ++j) {
      const int f = k(rng);
      if (f != 0) l[f] = u(rng);
    }
    const auto ce = compound_exp(integer_triplet(k(rng), l));
    CHECK(std::abs(ce.measure.total_weight() - 1.0) <= 1e-12 + ce.residual);
  }
}

TEST_CASE("reconstruct") {
  CHECK(reconstruct_law(integer_triplet(3, {})).law == law_of({{3, 1.0}}));

  const auto geo = law_of(support::geometric(0.5, 60));
  const auto t = triplet_lattice(geo);
  const auto r = reconstruct_law(t);
  const double d = tv(r.law.as_measure(), geo.as_measure());
  CHECK(d <= 1e-8);
  CHECK(d <= exponent_perturbation_bound(t.tail_bound() + ExpSeriesParams{}.tol) + 1e-12);

  try {
    reconstruct_law(integer_triplet(0, {{1, -1.0}}));
    FAIL("expected NegativeMassBeyondTolerance");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NegativeMassBeyondTolerance);
  }
}

TEST_CASE("exp/log inversion on random triplets") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  for (int i = 0; i < 60; ++i) {
    std::map<std::int64_t, double> l;
    double budget = 2.0 * u(rng);
    for (int f = 1; f <= 5 && budget > 0.0; ++f) {
      const double v = std::min(budget, u(rng)) * (u(rng) < 0.8 ? 1.0 : -0.2);
      budget -= std::abs(v);
      l[f] = v;
    }
    const auto t = integer_triplet(0, l);
    const auto ce = compound_exp(t);
    bool probability = true;
    for (const auto& [c, w] : ce.measure.atoms()) probability = probability && w >= -1e-12;
    if (!probability) continue;
    const auto law = reconstruct_law(t).law;
    QuasiTriplet back = integer_triplet(0, {});
    try {
      back = triplet_lattice(law);
    } catch (const Error& e) {
      CHECK(e.code() == Errc::NotSeparated);  // reconstructions may touch zero
      continue;
    }
    ++checked;
    CHECK(back.gamma_coords() == t.gamma_coords());
    for (const auto& [f, v] : t.lambdas()) CHECK(std::abs(back.lambda(f) - v) < 1e-9);
  }
  CHECK(checked >= 20);
}

TEST_CASE("convolution powers") {
  const auto bern = law_of(support::two_point(0.8));
  const auto t = triplet_lattice(bern);

  const auto p1 = conv_power(t, 1.0);
  CHECK(tv(p1.measure, bern.as_measure()) < 1e-10);
  CHECK(p1.classification == PowerClass::Probability);

  const auto p0 = conv_power(t, 0.0);
  CHECK(p0.measure == point_mass(FrequencyBasis::integers(), {0}));

  const auto half = conv_power(t, 0.5);
  CHECK(half.classification == PowerClass::Signed);
  const double ref = oracle::binomial_series(0.8, 0.2, 0.5, 2);
  CHECK(ref == doctest::Approx(-0.0069877).epsilon(1e-4));
  CHECK(std::abs(half.measure.weight({2}) - ref) < 1e-7);
  for (int k = 0; k < 12; ++k) CHECK(std::abs(half.measure.weight({k}) - oracle::binomial_series(0.8, 0.2, 0.5, k)) < 1e-10);

  CHECK_FALSE(is_infinitely_divisible(t));
}

TEST_CASE("semigroup and integer powers") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 10; ++i) {
    const auto pmf = oracle::random_dominant_law(rng, 6, 0.6, 0.9);
    const auto t = triplet_lattice(law_of(pmf));
    const double s1 = u(rng), s2 = u(rng);
    const auto a = conv_power(t, s1), b = conv_power(t, s2), ab = conv_power(t, s1 + s2);
    CHECK(tv(convolve(a, b).measure, ab.measure) < 1e-8);

    oracle::Pmf brute = {{0, 1.0}};
    for (int n = 1; n <= 5; ++n) {
      brute = oracle::convolve(brute, pmf);
      CHECK(oracle::l1(pmf_of(conv_power(t, n).measure), brute) < 1e-9);
    }
  }
}

TEST_CASE("powers with a shift outside the module") {
  const auto law = law_of({{0, 0.1}, {1, 0.8}, {2, 0.1}});
  const auto t = triplet_lattice(law);
  REQUIRE(t.gamma_coords() == Coords{1});
  const auto a = conv_power(t, 0.3), b = conv_power(t, 0.7);
  CHECK_FALSE(a.in_module);
  CHECK(a.residual_shift[0] == doctest::Approx(0.3));
  const auto ab = convolve(a, b);
  CHECK(ab.in_module);
  CHECK(tv(ab.measure, law.as_measure()) < 1e-8);
}

TEST_CASE("infinite divisibility") {
  CHECK(is_infinitely_divisible(integer_triplet(0, {{1, 0.7}})));
  CHECK(is_infinitely_divisible(triplet_lattice(law_of(support::geometric(0.5, 60)))));
  CHECK_FALSE(is_infinitely_divisible(integer_triplet(0, {{1, 0.7}}, 1e-3)));
}
