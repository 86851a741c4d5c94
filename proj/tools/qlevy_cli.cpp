// qlevy: command-line front end.
//
// Exit codes: 0 success / certified / criterion holds / check passes,
//             1 errors and definitive negative verdicts,
//             2 undecided or inconclusive verdicts.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qlevy/calculus.hpp"
#include "qlevy/charfn.hpp"
#include "qlevy/errors.hpp"
#include "qlevy/io.hpp"
#include "qlevy/limits.hpp"
#include "qlevy/spectral.hpp"

namespace {

using namespace qlevy;
using io::json;

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kUndecided = 2;

struct Options {
  std::string output;
  std::string format;  // empty: csv for curves, json otherwise
  double tol = 1e-10;
  double zero_tol = 1e-10;
  std::size_t n_init = 0;
  int max_depth = 40;
  double target_gap = 0.9;
  unsigned threads = 1;
};

template <class T>
void env_override(const char* name, T& slot) {
  const char* v = std::getenv(name);
  if (!v || !*v) return;
  std::istringstream in(v);
  T parsed{};
  if (!(in >> parsed) || !in.eof())
    throw Error(Errc::InvalidArgument, std::string("environment variable ") + name + " is not a valid number");
  slot = parsed;
}

void write_out(const Options& o, const std::string& text) {
  if (o.output.empty() || o.output == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(o.output, std::ios::binary);
  if (!out) throw Error(Errc::InvalidArgument, "cannot write " + o.output);
  out << text;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::InvalidArgument, "cannot write " + path);
  out << text;
}

TripletParams triplet_params(const Options& o) {
  TripletParams p;
  p.tol = o.tol;
  p.n_init = o.n_init;
  p.separation.zero_tol = o.zero_tol;
  p.separation.max_depth = o.max_depth;
  p.separation.target_gap = o.target_gap;
  return p;
}

LimitParams limit_params(const Options& o) {
  LimitParams p;
  p.triplet = triplet_params(o);
  p.threads = o.threads;
  return p;
}

// A file holding either a triplet or a law; laws are analysed first.
QuasiTriplet triplet_input(const std::string& path, const Options& o) {
  const json j = io::read_json(path);
  if (j.is_object() && j.contains("gamma_coords")) return io::triplet_from_json(j);
  return triplet_multibasis(io::law_from_json(j), triplet_params(o));
}

std::vector<DiscreteLaw> read_laws(const std::vector<std::string>& paths) {
  std::vector<DiscreteLaw> laws;
  for (const auto& p : paths) laws.push_back(io::read_law(p));
  return laws;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string trends_csv(const std::vector<double>& ell1, const std::vector<double>& tv,
                       const std::vector<double>& norms) {
  std::string out = "n,ell1_distance,tv_distance,ell1_norm\n";
  for (std::size_t i = 0; i < norms.size(); ++i) {
    out += std::to_string(i + 1) + ",";
    out += (i < ell1.size() ? fmt(ell1[i]) : "") + ",";
    out += (i < tv.size() ? fmt(tv[i]) : "") + ",";
    out += fmt(norms[i]) + "\n";
  }
  return out;
}

void print_table(const std::vector<double>& ell1, const std::vector<double>& tv, const std::vector<double>& norms) {
  std::fprintf(stderr, "%6s %22s %22s %22s\n", "n", "l1 distance", "TV distance", "sum |lambda|");
  for (std::size_t i = 0; i < norms.size(); ++i) {
    std::fprintf(stderr, "%6zu %22s %22s %22.12g\n", i + 1, i < ell1.size() ? fmt(ell1[i]).c_str() : "-",
                 i < tv.size() ? fmt(tv[i]).c_str() : "-", norms[i]);
  }
}

int emit_report(const Options& o, const json& report, const std::string& csv) {
  if (o.format == "csv") {
    write_out(o, csv);
  } else {
    write_out(o, io::dump(report));
  }
  return kOk;
}

int run(int argc, char** argv) {
  Options o;
  env_override("QLEVY_TOL", o.tol);
  env_override("QLEVY_ZERO_TOL", o.zero_tol);
  env_override("QLEVY_N_INIT", o.n_init);
  env_override("QLEVY_MAX_DEPTH", o.max_depth);
  env_override("QLEVY_THREADS", o.threads);

  CLI::App app{"Spectral representation of discrete laws separated from zero"};
  app.require_subcommand(1);
  app.add_option("-o,--output", o.output, "Output file (default: stdout)");
  app.add_option("--format", o.format, "Output format: json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--tol", o.tol, "Coefficient tolerance (QLEVY_TOL)")->check(CLI::PositiveNumber);
  app.add_option("--zero-tol", o.zero_tol, "Zero tolerance (QLEVY_ZERO_TOL)")->check(CLI::PositiveNumber);
  app.add_option("--n-init", o.n_init, "Initial grid size, a power of two (QLEVY_N_INIT)");
  app.add_option("--max-depth", o.max_depth, "Subdivision depth limit (QLEVY_MAX_DEPTH)")->check(CLI::PositiveNumber);
  app.add_option("--target-gap", o.target_gap, "Certification gap")->check(CLI::Range(0.0, 1.0));
  app.add_option("--threads", o.threads, "Worker threads (QLEVY_THREADS)")->check(CLI::PositiveNumber);
  app.fallthrough();

  std::string law_path, other_path, limit_path, curves_path, trends_path;
  std::vector<std::string> members;
  double s = 1.0;
  double t0 = 0.0, t1 = 2.0 * std::numbers::pi;
  std::size_t samples = 512;

  auto* check_s = app.add_subcommand("check-s", "Certify or refute separation from zero");
  check_s->add_option("law", law_path)->required()->check(CLI::ExistingFile);
  check_s->add_option("--emit-curves", curves_path, "Also write a CSV of f over [t0, t1]");

  auto* triplet = app.add_subcommand("triplet", "Compute the spectral triplet of a law");
  triplet->add_option("law", law_path)->required()->check(CLI::ExistingFile);
  triplet->add_option("--emit-curves", curves_path, "Also write a CSV of f over [t0, t1]");

  auto* reconstruct = app.add_subcommand("reconstruct", "Rebuild the law of a triplet");
  reconstruct->add_option("triplet", law_path)->required()->check(CLI::ExistingFile);

  auto* power = app.add_subcommand("power", "Convolution power of a law or triplet");
  power->add_option("input", law_path)->required()->check(CLI::ExistingFile);
  power->add_option("--s", s, "Exponent s >= 0")->required()->check(CLI::NonNegativeNumber);

  auto* classify = app.add_subcommand("classify-id", "Infinite divisibility of a law or triplet");
  classify->add_option("input", law_path)->required()->check(CLI::ExistingFile);

  auto* tv = app.add_subcommand("tv", "Total variation distance of two laws");
  tv->add_option("a", law_path)->required()->check(CLI::ExistingFile);
  tv->add_option("b", other_path)->required()->check(CLI::ExistingFile);

  auto* converge = app.add_subcommand("converge-check", "Convergence criterion on a prefix");
  converge->add_option("--limit", limit_path, "Limit law")->required()->check(CLI::ExistingFile);
  converge->add_option("members", members)->required()->check(CLI::ExistingFile);
  converge->add_option("--emit-trends", trends_path, "Also write the trend CSV");

  auto* compact = app.add_subcommand("compact-check", "Relative compactness conditions on a prefix");
  compact->add_option("members", members)->required()->check(CLI::ExistingFile);
  compact->add_option("--emit-trends", trends_path, "Also write the trend CSV");

  auto* stoch = app.add_subcommand("stoch-check", "Stochastic compactness condition on a prefix");
  stoch->add_option("members", members)->required()->check(CLI::ExistingFile);
  stoch->add_option("--emit-trends", trends_path, "Also write the trend CSV");

  auto* curves = app.add_subcommand("curves", "CSV of f(t) with continuous phase");
  curves->add_option("law", law_path)->required()->check(CLI::ExistingFile);

  for (auto* sub : {check_s, triplet, curves}) {
    sub->add_option("--t0", t0, "Start of the t range");
    sub->add_option("--t1", t1, "End of the t range");
    sub->add_option("--samples", samples, "Number of samples")->check(CLI::Range(2, 100000000));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kNegative;
  }
  if (!(o.tol > 0.0) || !(o.zero_tol > 0.0)) throw Error(Errc::InvalidArgument, "tolerances must be positive");

  auto curves_of = [&](const DiscreteLaw& law) {
    return io::curves_csv(io::emit_curves(law, t0, t1, samples, o.zero_tol));
  };

  if (*check_s) {
    const DiscreteLaw law = io::read_law(law_path);
    const SeparationCertificate c = certify_separation(law, triplet_params(o).separation);
    json j = io::to_json(c);
    if (auto b = dominant_mass_bound(law)) j["dominant_mass_bound"] = *b;
    write_out(o, io::dump(j));
    if (!curves_path.empty() && c.verdict != SeparationVerdict::ZeroFound) write_file(curves_path, curves_of(law));
    switch (c.verdict) {
      case SeparationVerdict::Certified: return kOk;
      case SeparationVerdict::ZeroFound: return kNegative;
      case SeparationVerdict::Undecided: return kUndecided;
    }
  }
  if (*triplet) {
    const DiscreteLaw law = io::read_law(law_path);
    const TripletReport r = triplet_multibasis_report(law, triplet_params(o));
    write_out(o, io::dump(io::to_json(r)));
    if (!curves_path.empty()) write_file(curves_path, curves_of(law));
    return kOk;
  }
  if (*reconstruct) {
    const Reconstruction r = reconstruct_law(io::read_triplet(law_path));
    json j = io::to_json(r.law);
    j["reconstruction_residual"] = r.residual;
    write_out(o, io::dump(j));
    return kOk;
  }
  if (*power) {
    const PowerResult p = conv_power(triplet_input(law_path, o), s);
    write_out(o, io::dump(io::to_json(p)));
    return kOk;
  }
  if (*classify) {
    const QuasiTriplet t = triplet_input(law_path, o);
    json j;
    j["infinitely_divisible"] = is_infinitely_divisible(t);
    double lo = 0.0;
    for (const auto& [l, v] : t.lambdas()) lo = std::min(lo, v);
    j["min_lambda"] = lo;
    j["tail_bound"] = t.tail_bound();
    write_out(o, io::dump(j));
    return kOk;
  }
  if (*tv) {
    json j;
    j["tv"] = tv_distance(io::read_law(law_path), io::read_law(other_path));
    write_out(o, io::dump(j));
    return kOk;
  }
  if (*converge) {
    const LawSequence seq(read_laws(members), io::read_law(limit_path));
    const ConvergenceVerdict v = check_convergence(seq, limit_params(o));
    const std::string csv = trends_csv(v.ell1_distances, v.tv_distances, v.ell1_norms);
    print_table(v.ell1_distances, v.tv_distances, v.ell1_norms);
    emit_report(o, io::to_json(v), csv);
    if (!trends_path.empty()) write_file(trends_path, csv);
    switch (v.verdict) {
      case Verdict::CriterionHolds: return kOk;
      case Verdict::CriterionFails: return kNegative;
      case Verdict::Inconclusive: return kUndecided;
    }
  }
  if (*compact || *stoch) {
    const LawSequence seq(read_laws(members));
    const LimitParams params = limit_params(o);
    RelativeCompactnessReport rel = check_relative_compactness(seq, params);
    const std::string csv = trends_csv({}, {}, rel.ell1_norms);
    print_table({}, {}, rel.ell1_norms);
    bool pass = rel.pass;
    if (*stoch) {
      const StochasticCompactnessReport r = check_stochastic_compactness(std::move(rel), params);
      pass = r.pass;
      emit_report(o, io::to_json(r), csv);
    } else {
      emit_report(o, io::to_json(rel), csv);
    }
    if (!trends_path.empty()) write_file(trends_path, csv);
    return pass ? kOk : kNegative;
  }
  if (*curves) {
    const DiscreteLaw law = io::read_law(law_path);
    const auto rows = io::emit_curves(law, t0, t1, samples, o.zero_tol);
    if (o.format == "json") {
      json a = json::array();
      for (const auto& r : rows)
        a.push_back({{"t", r.t}, {"re", r.value.real()}, {"im", r.value.imag()}, {"abs", std::abs(r.value)}, {"arg", r.arg}});
      write_out(o, io::dump(a));
    } else {
      write_out(o, io::curves_csv(rows));
    }
    return kOk;
  }
  return kNegative;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const qlevy::Error& e) {
    std::fprintf(stderr, "error: %s: %s\n", std::string(e.name()).c_str(), e.what());
    return kNegative;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kNegative;
  }
}
