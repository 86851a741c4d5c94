#include <doctest.h>

#include <random>

#include "qlevy/charfn.hpp"
#include "support.hpp"

using namespace qlevy;
using support::law_of;

namespace {

constexpr double kPi = std::numbers::pi;

DiscreteLaw h_law(double p_alpha, double p_one) {
  const double alpha = std::sqrt(2.0) - 1.0;
  return DiscreteLaw(FrequencyBasis(std::vector<double>{alpha, 1.0}, true),
                     {{{0, 0}, 1.0 - p_alpha - p_one}, {{1, 0}, p_alpha}, {{0, 1}, p_one}});
}

}  // namespace

TEST_CASE("cf_eval") {
  const auto d3 = law_of({{3, 1.0}});
  for (double t : {0.0, 0.4, 2.5}) CHECK(std::abs(cf_eval(d3, t) - std::polar(1.0, 3.0 * t)) < 1e-15);
  CHECK(std::abs(cf_eval(law_of(support::two_point(0.5)), kPi)) < 1e-15);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> t(-50.0, 50.0);
  for (int i = 0; i < 1000; ++i) {
    const auto law = law_of(oracle::random_dominant_law(rng, 10, 0.1, 0.9));
    CHECK(std::abs(cf_eval(law, 0.0) - 1.0) < 1e-12);
    CHECK(std::abs(cf_eval(law, t(rng))) <= 1.0 + 1e-12);
  }
}

TEST_CASE("torus lift") {
  SUBCASE("lattice law: f(t) = e^{ita} phi(bt)") {
    const DiscreteLaw law(FrequencyBasis(std::vector<double>{0.5}), {{{3}, 0.4}, {{5}, 0.6}});
    const auto phi = torus_lift(law);
    for (double t : {0.3, 1.7, 9.1}) {
      const double theta = 0.5 * t;
      const double th[] = {std::fmod(theta, 2 * kPi)};
      CHECK(std::abs(phi(th) - cf_eval(law, t)) < 1e-10);
    }
  }
  SUBCASE("H-law") {
    const auto h = h_law(0.25, 0.25);
    const auto phi = torus_lift(h);
    CHECK(phi.dim() == 2);
    const double pp[] = {kPi, kPi};
    CHECK(std::abs(phi(pp)) < 1e-15);
    const double th[] = {0.7, 2.1};
    const cplx expect = 0.5 + 0.25 * std::polar(1.0, 0.7) + 0.25 * std::polar(1.0, 2.1);
    CHECK(std::abs(phi(th) - expect) < 1e-15);
    for (double t : {0.3, 1.7, 9.1}) CHECK(std::abs(phi(phi.diagonal_point(t)) - cf_eval(h, t)) < 1e-10);
  }
  SUBCASE("diagonal identity on random times") {
    const DiscreteLaw law(FrequencyBasis(std::vector<double>{1.0, std::sqrt(2.0), std::sqrt(3.0)}, true),
                          {{{0, 0, 0}, 0.5}, {{2, -1, 0}, 0.2}, {{1, 1, 1}, 0.3}});
    const auto phi = torus_lift(law);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> t(-100.0, 100.0);
    for (int i = 0; i < 200; ++i) {
      const double x = t(rng);
      CHECK(std::abs(phi(phi.diagonal_point(x)) - cf_eval(law, x)) < 1e-10);
    }
    CHECK(phi.lipschitz()[0] == doctest::Approx(0.7));
    CHECK(phi.lipschitz()[1] == doctest::Approx(0.5));
  }
}

TEST_CASE("dominant mass bound") {
  CHECK(*dominant_mass_bound(law_of({{0, 0.6}, {1, 0.4}})) == doctest::Approx(0.2));
  CHECK_FALSE(dominant_mass_bound(law_of({{0, 0.5}, {1, 0.5}})));
  CHECK(*dominant_mass_bound(law_of({{0, 0.9}, {1, 0.05}, {2, 0.05}})) == doctest::Approx(0.8));

  std::mt19937_64 rng(1);
  for (int i = 0; i < 100; ++i) {
    const auto pmf = oracle::random_dominant_law(rng, 12, 0.55, 0.95);
    const auto b = dominant_mass_bound(law_of(pmf));
    REQUIRE(b);
    CHECK(*b <= oracle::sampled_min_modulus(pmf, 4096) + 1e-12);
  }
}

TEST_CASE("separation: fair coin has a zero at pi") {
  const auto c = certify_separation(law_of(support::two_point(0.5)));
  CHECK(c.verdict == SeparationVerdict::ZeroFound);
  CHECK(c.label() == "zero");
  REQUIRE(c.t_star);
  CHECK(std::abs(*c.t_star - kPi) < 1e-6);
}

TEST_CASE("separation: H-law infimum is zero on the torus") {
  const auto c = certify_separation(h_law(0.25, 0.25));
  CHECK(c.verdict == SeparationVerdict::ZeroFound);
  CHECK(c.label() == "infimum zero (torus)");
  CHECK(c.basis_declared_independent);
  REQUIRE(c.theta_star.size() == 2);
  CHECK(std::abs(c.theta_star[0] - kPi) < 1e-4);
  CHECK(std::abs(c.theta_star[1] - kPi) < 1e-4);
}

TEST_CASE("separation: truncated Poisson") {
  oracle::Pmf pmf;
  double s = 0.0;
  for (int k = 0; k <= 20; ++k) s += pmf[k] = oracle::poisson(0.7, k);
  for (auto& [k, v] : pmf) v /= s;
  SeparationParams params;
  params.target_gap = 0.999;
  const auto c = certify_separation(law_of(pmf), params);
  REQUIRE(c.certified());
  const double truncation = 2.0 * (1.0 - s);
  const double gap = (1.0 - params.target_gap) * std::exp(-1.4);
  CHECK(c.mu >= std::exp(-1.4) - truncation - gap);
  CHECK(c.mu <= oracle::sampled_min_modulus(pmf, 1 << 14) + 1e-12);
}

TEST_CASE("separation: closed-form infima") {
  SeparationParams tight;
  tight.target_gap = 1.0 - 1e-10;
  tight.max_depth = 60;
  for (double q0 : {0.55, 0.7, 0.9}) {
    const auto c = certify_separation(law_of(support::two_point(q0)), tight);
    REQUIRE(c.certified());
    CHECK(std::abs(c.mu - (2.0 * q0 - 1.0)) < 1e-9);
  }
  SeparationParams geo = tight;
  geo.target_gap = 1.0 - 1e-9;
  const auto g = certify_separation(law_of(support::geometric(0.5, 60)), geo);
  REQUIRE(g.certified());
  CHECK(std::abs(g.mu - 1.0 / 3.0) < 1e-9);
}

TEST_CASE("separation is sound on random laws") {
  std::mt19937_64 rng(17);
  int certified = 0;
  for (int i = 0; i < 60; ++i) {
    const auto pmf = oracle::random_dominant_law(rng, 8, 0.3, 0.8);
    const auto c = certify_separation(law_of(pmf));
    const double sampled = oracle::sampled_min_modulus(pmf, 1 << 13);
    CHECK(std::abs(c.best_inf_estimate - sampled) < 1e-3);
    if (c.certified()) {
      ++certified;
      CHECK(c.mu <= sampled + 1e-9);
    }
  }
  CHECK(certified > 20);
}

TEST_CASE("separation on a genuine two-frequency law") {
  const DiscreteLaw law(FrequencyBasis(std::vector<double>{1.0, std::sqrt(2.0)}, true), {{{0, 0}, 0.7}, {{1, 0}, 0.2}, {{0, 1}, 0.1}});
  const auto c = certify_separation(law);
  REQUIRE(c.certified());
  CHECK(c.mu >= 0.9 * 0.4 - 1e-12);
  // Dense sampling on a long window never goes below mu.
  double lo = 2.0;
  for (int j = 0; j < 200000; ++j) lo = std::min(lo, std::abs(cf_eval(law, 0.005 * j)));
  CHECK(lo >= c.mu - 1e-9);
}
