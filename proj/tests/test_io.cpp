#include <doctest.h>

#include "qlevy/errors.hpp"
#include "qlevy/io.hpp"
#include "support.hpp"

using namespace qlevy;
using io::json;

namespace {

constexpr double kPi = std::numbers::pi;

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

TEST_CASE("law round trip") {
  const auto check = [](const DiscreteLaw& law) {
    const auto back = io::law_from_json(json::parse(io::dump(io::to_json(law))));
    CHECK(back == law);
  };
  check(support::law_of({{0, 0.1}, {3, 0.9}}));
  check(support::law_of(support::geometric(0.3, 20)));
  check(to_lattice_form(support::law_of({{2, 0.25}, {6, 0.75}})));
  check(DiscreteLaw(FrequencyBasis(std::vector<double>{1.0, std::sqrt(2.0)}, true), {{{0, 0}, 0.7}, {{1, 0}, 0.2}, {{0, 1}, 0.1}}));
  check(DiscreteLaw(FrequencyBasis(std::vector<Rational>{Rational(1, 2), Rational(2, 3)}), {{{1, 1}, 1.0}}));
}

TEST_CASE("triplet and measure round trip") {
  const QuasiTriplet t(FrequencyBasis(std::vector<double>{0.5, std::sqrt(3.0)}), {1, -2}, {{{1, 0}, 0.1 / 3.0}, {{0, 1}, -1e-7}}, 3e-14);
  CHECK(io::triplet_from_json(json::parse(io::dump(io::to_json(t)))) == t);
  const SignedAtomicMeasure m(FrequencyBasis::integers(), {{{-1}, -0.125}, {{4}, 1.0 / 7.0}});
  CHECK(io::measure_from_json(json::parse(io::dump(io::to_json(m)))) == m);
}

TEST_CASE("lattice shorthand") {
  const auto law = io::law_from_json(json::parse(R"({"offset": {"num": 1, "den": 2}, "span": {"num": 2, "den": 3},
                                                     "masses": {"0": 0.5, "1": 0.5}})"));
  const auto lf = *law.lattice_form();
  CHECK(*lf.offset_exact == Rational(1, 2));
  CHECK(*lf.span_exact == Rational(2, 3));

  const auto real = io::law_from_json(json::parse(R"({"offset": 1.5, "span": 0.5, "masses": {"0": 0.25, "2": 0.75}})"));
  CHECK(real.lattice_form()->offset == doctest::Approx(1.5));
  CHECK(real.lattice_form()->span == doctest::Approx(1.0));

  CHECK(code_of([] { io::law_from_json(json::parse(R"({"offset": 0.3, "span": 1.0, "masses": {"0": 1}})")); }) ==
        Errc::SchemaViolation);
}

TEST_CASE("schema errors") {
  CHECK(code_of([] { io::law_from_json(json::parse(R"({"atoms": []})")); }) == Errc::SchemaViolation);
  CHECK(code_of([] { io::law_from_json(json::parse(R"({"basis": [1], "atoms": [{"coords": [0.5], "mass": 1}]})")); }) ==
        Errc::SchemaViolation);
  CHECK(code_of([] { io::law_from_json(json::parse(R"({"basis": [1], "atoms": [{"coords": [0], "mass": "x"}]})")); }) ==
        Errc::SchemaViolation);
  CHECK(code_of([] { io::law_from_json(json::parse(R"({"basis": [1], "atoms": [{"coords": [0], "mass": 0.4}]})")); }) ==
        Errc::MassSumNotOne);
  CHECK(code_of([] { io::read_json("/nonexistent/law.json"); }) == Errc::ParseError);
}

TEST_CASE("curves") {
  const auto d0 = support::law_of({{0, 1.0}});
  for (const auto& r : io::emit_curves(d0, -3.0, 5.0, 17)) {
    CHECK(std::abs(std::abs(r.value) - 1.0) < 1e-15);
    CHECK(r.arg == 0.0);
  }
  const auto d3 = support::law_of({{3, 1.0}});
  const auto rows = io::emit_curves(d3, 0.0, 2.0 * kPi, 9);
  CHECK(rows.back().arg == doctest::Approx(6.0 * kPi));

  const auto geo = support::law_of(support::geometric(0.5, 60));
  const auto g = io::emit_curves(geo, 0.0, 2.0 * kPi, 257);
  double lo = 2.0, at = 0.0;
  for (const auto& r : g)
    if (std::abs(r.value) < lo) lo = std::abs(r.value), at = r.t;
  CHECK(lo == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(at == doctest::Approx(kPi));
  CHECK(std::abs(g.back().arg) < 1e-12);

  const auto csv = io::curves_csv(rows);
  CHECK(csv.rfind("t,re,im,abs,arg\n", 0) == 0);

  CHECK(code_of([] { io::emit_curves(support::law_of(support::two_point(0.5)), 0.0, 2.0 * kPi, 3); }) ==
        Errc::ZeroOnPath);
}
