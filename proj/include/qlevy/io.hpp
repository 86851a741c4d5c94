#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "qlevy/calculus.hpp"
#include "qlevy/charfn.hpp"
#include "qlevy/limits.hpp"
#include "qlevy/measures.hpp"
#include "qlevy/spectral.hpp"
#include "qlevy/triplet.hpp"

namespace qlevy::io {

using json = nlohmann::ordered_json;

// Laws: {"basis": [...], "atoms": [{"coords": [...], "mass": p}, ...]} or the
// lattice shorthand {"offset": a, "span": b, "masses": {"l": p, ...}}.
// Rationals are written {"num": n, "den": m}. A basis given entirely by
// integers and rationals is exact.
DiscreteLaw law_from_json(const json& j);
json to_json(const DiscreteLaw& law);

SignedAtomicMeasure measure_from_json(const json& j);
json to_json(const SignedAtomicMeasure& m);

QuasiTriplet triplet_from_json(const json& j);
json to_json(const QuasiTriplet& t);

json to_json(const SeparationCertificate& c);
json to_json(const TripletReport& r);
json to_json(const PowerResult& p);
json to_json(const MeanMotion& m);
json to_json(const ConvergenceVerdict& v);
json to_json(const RelativeCompactnessReport& r);
json to_json(const StochasticCompactnessReport& r);
json to_json(const SeparationProbe& p);

/// Parses a file; ParseError on malformed JSON.
json read_json(const std::filesystem::path& path);
DiscreteLaw read_law(const std::filesystem::path& path);
QuasiTriplet read_triplet(const std::filesystem::path& path);

/// Pretty-printed with a trailing newline; numbers in shortest round-trip form.
std::string dump(const json& j);

struct CurveRow {
  double t = 0.0;
  cplx value;
  /// Continuous phase, 0 at t = 0.
  double arg = 0.0;
};

/// `samples` equally spaced points of [t0, t1]. The phase is carried from
/// t = 0 with adaptive refinement between samples. Throws ZeroOnPath when
/// |f| drops to zero_tol.
std::vector<CurveRow> emit_curves(const DiscreteLaw& law, double t0, double t1, std::size_t samples,
                                  double zero_tol = 1e-10);

/// Header t,re,im,abs,arg; values with 17 significant digits.
std::string curves_csv(const std::vector<CurveRow>& rows);

}  // namespace qlevy::io
