#include "qlevy/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qlevy/errors.hpp"

namespace qlevy::io {
namespace {

[[noreturn]] void schema(const std::string& what) { throw Error(Errc::SchemaViolation, what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) schema(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

bool is_rational(const json& v) { return v.is_number_integer() || (v.is_object() && v.contains("num")); }

Rational rational_from(const json& v) {
  if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
  if (!v.is_object() || !v.contains("num") || !v.contains("den")) schema("expected a rational {\"num\", \"den\"}");
  const json& n = v.at("num");
  const json& d = v.at("den");
  if (!n.is_number_integer() || !d.is_number_integer()) schema("rational parts must be integers");
  if (d.get<std::int64_t>() == 0) schema("rational with zero denominator");
  return Rational(n.get<std::int64_t>(), d.get<std::int64_t>());
}

double real_from(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_object()) return rational_from(v).to_double();
  schema("expected a number or a rational");
}

json rational_json(const Rational& r) {
  if (r.is_integer()) return r.num();
  return json{{"num", r.num()}, {"den", r.den()}};
}

FrequencyBasis basis_from(const json& j) {
  const json& b = field(j, "basis");
  if (!b.is_array() || b.empty()) schema("\"basis\" must be a nonempty array");
  const bool independent = j.value("declared_independent", false);
  bool exact = !independent;
  for (const auto& v : b) exact = exact && is_rational(v);
  if (exact) {
    std::vector<Rational> r;
    for (const auto& v : b) r.push_back(rational_from(v));
    return FrequencyBasis(std::move(r));
  }
  std::vector<double> a;
  for (const auto& v : b) a.push_back(real_from(v));
  return FrequencyBasis(std::move(a), independent);
}

void put_basis(json& j, const FrequencyBasis& basis) {
  json b = json::array();
  if (basis.is_exact()) {
    for (const auto& r : basis.exact()) b.push_back(rational_json(r));
  } else {
    for (double a : basis.alphas()) b.push_back(a);
  }
  j["basis"] = std::move(b);
  if (basis.declared_independent()) j["declared_independent"] = true;
}

Coords coords_from(const json& v, std::size_t d) {
  if (!v.is_array() || v.size() != d) schema("coordinate vector must have one integer per basis element");
  Coords c;
  for (const auto& x : v) {
    if (!x.is_number_integer()) schema("coordinates must be integers");
    c.push_back(x.get<std::int64_t>());
  }
  return c;
}

DiscreteLaw lattice_shorthand(const json& j) {
  const json& off = field(j, "offset");
  const json& spn = field(j, "span");
  const json& masses = field(j, "masses");
  if (!masses.is_object() || masses.empty()) schema("\"masses\" must be a nonempty object");

  std::vector<std::pair<std::int64_t, double>> ml;
  for (const auto& [key, v] : masses.items()) {
    std::size_t used = 0;
    std::int64_t l = 0;
    try {
      l = std::stoll(key, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != key.size() || key.empty()) schema("lattice index \"" + key + "\" is not an integer");
    ml.emplace_back(l, real_from(v));
  }

  std::optional<FrequencyBasis> basis;
  std::int64_t base = 0;
  std::int64_t step = 1;
  if (is_rational(off) && is_rational(spn)) {
    const Rational a = rational_from(off);
    const Rational b = rational_from(spn);
    if (!(b > Rational(0))) schema("\"span\" must be positive");
    const Rational g = gcd(a, b);
    basis.emplace(std::vector<Rational>{g});
    base = (a / g).num();
    step = (b / g).num();
  } else {
    const double a = real_from(off);
    const double b = real_from(spn);
    if (!(b > 0.0) || !std::isfinite(b) || !std::isfinite(a)) schema("\"span\" must be positive and finite");
    const double ratio = a / b;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, std::abs(ratio)))
      schema("with a real span the offset must be an integer multiple of it; use rationals or a basis");
    basis.emplace(std::vector<double>{b});
    base = static_cast<std::int64_t>(std::llround(ratio));
  }
  std::vector<Atom> atoms;
  for (const auto& [l, p] : ml) atoms.push_back({{base + step * l}, p});
  return to_lattice_form(DiscreteLaw(*basis, std::move(atoms)));
}

template <class F>
auto guarded(F f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error&) {
    throw;
  } catch (const json::exception& e) {
    throw Error(Errc::SchemaViolation, e.what());
  }
}

const char* verdict_kind(SeparationVerdict v) {
  switch (v) {
    case SeparationVerdict::Certified: return "Certified";
    case SeparationVerdict::ZeroFound: return "ZeroFound";
    case SeparationVerdict::Undecided: return "Undecided";
  }
  return "Undecided";
}

json coords_list(const std::vector<Coords>& v) {
  json a = json::array();
  for (const auto& c : v) a.push_back(c);
  return a;
}

}  // namespace

DiscreteLaw law_from_json(const json& j) {
  return guarded([&] {
    if (!j.is_object()) schema("a law must be a JSON object");
    if (j.contains("masses")) return lattice_shorthand(j);
    FrequencyBasis basis = basis_from(j);
    const json& atoms = field(j, "atoms");
    if (!atoms.is_array()) schema("\"atoms\" must be an array");
    std::vector<Atom> list;
    for (const auto& a : atoms) list.push_back({coords_from(field(a, "coords"), basis.dim()), real_from(field(a, "mass"))});
    DiscreteLaw law(std::move(basis), std::move(list));
    return j.contains("lattice") ? to_lattice_form(law) : law;
  });
}

json to_json(const DiscreteLaw& law) {
  json j;
  put_basis(j, law.basis());
  json atoms = json::array();
  for (const auto& [c, p] : law.atoms()) atoms.push_back({{"coords", c}, {"mass", p}});
  j["atoms"] = std::move(atoms);
  if (const auto& lf = law.lattice_form()) {
    json l;
    l["offset"] = lf->offset_exact ? rational_json(*lf->offset_exact) : json(lf->offset);
    l["span"] = lf->span_exact ? rational_json(*lf->span_exact) : json(lf->span);
    j["lattice"] = std::move(l);
  }
  return j;
}

SignedAtomicMeasure measure_from_json(const json& j) {
  return guarded([&] {
    FrequencyBasis basis = basis_from(j);
    const json& atoms = field(j, "atoms");
    if (!atoms.is_array()) schema("\"atoms\" must be an array");
    AtomMap m;
    for (const auto& a : atoms) {
      const double w = real_from(field(a, "weight"));
      if (!std::isfinite(w)) schema("weights must be finite");
      if (!m.emplace(coords_from(field(a, "coords"), basis.dim()), w).second)
        throw Error(Errc::DuplicateAtom, "repeated coordinates in a measure");
    }
    return SignedAtomicMeasure(std::move(basis), std::move(m));
  });
}

json to_json(const SignedAtomicMeasure& m) {
  json j;
  put_basis(j, m.basis());
  json atoms = json::array();
  for (const auto& [c, w] : m.atoms()) atoms.push_back({{"coords", c}, {"weight", w}});
  j["atoms"] = std::move(atoms);
  return j;
}

QuasiTriplet triplet_from_json(const json& j) {
  return guarded([&] {
    FrequencyBasis basis = basis_from(j);
    Coords gamma = coords_from(field(j, "gamma_coords"), basis.dim());
    std::map<Coords, double> lambdas;
    const json& ls = field(j, "lambdas");
    if (!ls.is_array()) schema("\"lambdas\" must be an array");
    for (const auto& e : ls)
      if (!lambdas.emplace(coords_from(field(e, "freq"), basis.dim()), real_from(field(e, "value"))).second)
        schema("repeated frequency in \"lambdas\"");
    const double tail = j.contains("tail_bound") ? real_from(j.at("tail_bound")) : 0.0;
    return QuasiTriplet(std::move(basis), std::move(gamma), std::move(lambdas), tail);
  });
}

json to_json(const QuasiTriplet& t) {
  json j;
  put_basis(j, t.basis());
  j["gamma_coords"] = t.gamma_coords();
  j["gamma"] = t.gamma();
  json ls = json::array();
  for (const auto& [l, v] : t.lambdas()) ls.push_back({{"freq", l}, {"u", t.frequency(l)}, {"value", v}});
  j["lambdas"] = std::move(ls);
  j["tail_bound"] = t.tail_bound();
  return j;
}

json to_json(const SeparationCertificate& c) {
  json j;
  j["verdict"] = verdict_kind(c.verdict);
  j["label"] = c.label();
  j["dim"] = c.dim;
  if (c.certified()) j["mu"] = c.mu;
  j["best_inf_estimate"] = c.best_inf_estimate;
  j["theta_star"] = c.theta_star;
  if (c.t_star) j["t_star"] = *c.t_star;
  j["depth"] = c.depth;
  j["cells"] = c.cells;
  j["basis_declared_independent"] = c.basis_declared_independent;
  json log = json::array();
  for (const auto& e : c.search_log) log.push_back({e.step, e.leaves, e.depth, e.lower, e.upper});
  j["search_log_columns"] = {"step", "leaves", "depth", "lower", "upper"};
  j["search_log"] = std::move(log);
  return j;
}

json to_json(const TripletReport& r) {
  json j = to_json(r.triplet);
  json d;
  d["separation"] = r.certificate.label();
  if (r.certificate.certified()) d["mu"] = r.certificate.mu;
  d["grid"] = r.grid;
  d["refinements"] = r.refinements;
  d["max_phase_jump"] = r.max_phase_jump;
  d["outer_mass"] = r.outer_mass;
  d["max_imag"] = r.max_imag;
  d["dropped"] = r.dropped;
  d["reconstruction_residual"] = r.residual;
  j["diagnostics"] = std::move(d);
  return j;
}

json to_json(const PowerResult& p) {
  json j = to_json(p.measure);
  j["classification"] = p.classification == PowerClass::Probability ? "Probability" : "Signed";
  j["s"] = p.s;
  j["in_module"] = p.in_module;
  j["residual_shift"] = p.residual_shift;
  j["residual"] = p.residual;
  return j;
}

json to_json(const MeanMotion& m) {
  json j;
  j["exact"] = m.exact;
  json s = json::array();
  for (const auto& e : m.samples) s.push_back({{"horizon", e.horizon}, {"estimate", e.estimate}, {"bound", e.bound}});
  j["samples"] = std::move(s);
  return j;
}

json to_json(const ConvergenceVerdict& v) {
  json j;
  j["verdict"] = verdict_name(v.verdict);
  j["reason"] = v.reason;
  j["gamma_stable_from"] = v.gamma_stable_from ? json(*v.gamma_stable_from) : json(nullptr);
  j["limit_gamma"] = v.limit_gamma;
  j["gammas"] = coords_list(v.gammas);
  j["ell1_distances"] = v.ell1_distances;
  j["tv_distances"] = v.tv_distances;
  j["ell1_norms"] = v.ell1_norms;
  j["ell1_to_zero"] = v.ell1_to_zero;
  j["tv_to_zero"] = v.tv_to_zero;
  j["trend_agreement"] = v.trend_agreement;
  j["evidence"] = "finite prefix";
  return j;
}

json to_json(const RelativeCompactnessReport& r) {
  json j;
  j["evidence"] = "finite prefix";
  j["members"] = r.members;
  j["gamma_values"] = {{"distinct", coords_list(r.distinct_gammas)}, {"pass", r.gamma_pass}};
  json sup;
  sup["ell1_norms"] = r.ell1_norms;
  sup["running_sup"] = r.running_sup;
  sup["growth_ratio"] = r.growth_ratio ? json(*r.growth_ratio) : json(nullptr);
  sup["note"] = r.sup_note;
  sup["pass"] = r.sup_pass;
  j["bounded_norms"] = std::move(sup);
  json tails = json::array();
  for (const auto& t : r.tails) tails.push_back({{"N", t.n}, {"sup_tail", t.sup_tail}});
  j["uniform_tails"] = {{"frequency_count", r.frequency_count}, {"tails", std::move(tails)}, {"pass", r.tail_pass}};
  j["pass"] = r.pass;
  return j;
}

json to_json(const StochasticCompactnessReport& r) {
  json j;
  j["relative"] = to_json(r.relative);
  j["running_min"] = r.running_min;
  j["trailing_min"] = r.trailing_min;
  j["degenerate"] = r.degenerate;
  j["note"] = r.note;
  j["pass"] = r.pass;
  return j;
}

json to_json(const SeparationProbe& p) {
  json j;
  json m = json::array();
  for (const auto& e : p.members) {
    json x{{"verdict", verdict_kind(e.verdict)}, {"label", e.label}, {"best_inf_estimate", e.best_inf_estimate}};
    if (e.verdict == SeparationVerdict::Certified) x["mu"] = e.mu;
    m.push_back(std::move(x));
  }
  j["members"] = std::move(m);
  j["certified_from"] = p.certified_from ? json(*p.certified_from) : json(nullptr);
  return j;
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ParseError, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(Errc::ParseError, path.string() + ": " + e.what());
  }
}

DiscreteLaw read_law(const std::filesystem::path& path) { return law_from_json(read_json(path)); }

QuasiTriplet read_triplet(const std::filesystem::path& path) { return triplet_from_json(read_json(path)); }

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::vector<CurveRow> emit_curves(const DiscreteLaw& law, double t0, double t1, std::size_t samples,
                                  double zero_tol) {
  if (samples < 2) throw Error(Errc::InvalidArgument, "at least two samples are needed");
  if (!std::isfinite(t0) || !std::isfinite(t1) || !(t1 > t0)) throw Error(Errc::InvalidArgument, "bad t range");

  auto eval = [&](double t) {
    const cplx v = cf_eval(law, t);
    if (std::abs(v) <= zero_tol)
      throw Error(Errc::ZeroOnPath, "characteristic function vanishes near t = " + std::to_string(t));
    return v;
  };
  // Phase increment from a to b, bisecting until every piece turns by less
  // than pi/4.
  auto advance = [&](auto&& self, double a, cplx fa, double b, cplx fb, int depth) -> double {
    const double step = std::arg(fb / fa);
    if (std::abs(step) < std::numbers::pi / 4.0 || depth >= 48) return step;
    const double m = 0.5 * (a + b);
    const cplx fm = eval(m);
    return self(self, a, fa, m, fm, depth + 1) + self(self, m, fm, b, fb, depth + 1);
  };
  auto walk = [&](double a, cplx fa, double b, cplx fb) {
    // Coarse pieces first so long runs do not depend on the bisection depth.
    const double speed = [&] {
      double s = 0.0;
      for (const auto& [c, p] : law.atoms()) s += p * std::abs(law.basis().value(c));
      return s;
    }();
    const auto pieces = static_cast<std::size_t>(std::ceil(std::abs(b - a) * speed / 0.5)) + 1;
    double phase = 0.0;
    double x = a;
    cplx fx = fa;
    for (std::size_t k = 1; k <= pieces; ++k) {
      const double y = k == pieces ? b : a + (b - a) * static_cast<double>(k) / static_cast<double>(pieces);
      const cplx fy = k == pieces ? fb : eval(y);
      phase += advance(advance, x, fx, y, fy, 0);
      x = y;
      fx = fy;
    }
    return phase;
  };

  std::vector<CurveRow> rows;
  rows.reserve(samples);
  const double dt = (t1 - t0) / static_cast<double>(samples - 1);
  cplx f_prev = eval(t0);
  double phase = t0 == 0.0 ? 0.0 : walk(0.0, cplx{1.0, 0.0}, t0, f_prev);
  rows.push_back({t0, f_prev, phase});
  for (std::size_t i = 1; i < samples; ++i) {
    const double t = i + 1 == samples ? t1 : t0 + dt * static_cast<double>(i);
    const cplx f = eval(t);
    phase += walk(rows.back().t, f_prev, t, f);
    rows.push_back({t, f, phase});
    f_prev = f;
  }
  return rows;
}

std::string curves_csv(const std::vector<CurveRow>& rows) {
  std::string out = "t,re,im,abs,arg\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", r.t, r.value.real(), r.value.imag(),
                  std::abs(r.value), r.arg);
    out += buf;
  }
  return out;
}

}  // namespace qlevy::io
