#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qlevy/calculus.hpp"
#include "qlevy/charfn.hpp"
#include "qlevy/errors.hpp"
#include "qlevy/io.hpp"
#include "qlevy/limits.hpp"
#include "qlevy/spectral.hpp"

namespace py = pybind11;
using namespace qlevy;
using io::json;

namespace {

// Objects cross the boundary as JSON text in the file formats of the CLI.
DiscreteLaw law(const std::string& s) { return io::law_from_json(json::parse(s)); }
QuasiTriplet triplet_of(const std::string& s) { return io::triplet_from_json(json::parse(s)); }

std::vector<DiscreteLaw> laws(const std::vector<std::string>& v) {
  std::vector<DiscreteLaw> out;
  for (const auto& s : v) out.push_back(law(s));
  return out;
}

SeparationParams separation(double zero_tol, int max_depth, double target_gap) {
  SeparationParams p;
  p.zero_tol = zero_tol;
  p.max_depth = max_depth;
  p.target_gap = target_gap;
  return p;
}

TripletParams triplet_params(double tol, std::size_t n_init) {
  TripletParams p;
  p.tol = tol;
  p.n_init = n_init;
  return p;
}

LimitParams limit_params(unsigned threads) {
  LimitParams p;
  p.threads = threads;
  return p;
}

}  // namespace

PYBIND11_MODULE(_qlevy, m) {
  m.doc() = "Spectral representation of discrete laws separated from zero";

  static py::exception<Error> exc(m, "QlevyError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(exc, (std::string(e.name()) + ": " + e.what()).c_str());
    }
  });

  m.def("validate_law", [](const std::string& s) { return io::to_json(law(s)).dump(); });
  m.def("cf_eval", [](const std::string& s, double t) { return cf_eval(law(s), t); });
  m.def("dominant_mass_bound", [](const std::string& s) { return dominant_mass_bound(law(s)); });
  m.def(
      "certify_separation",
      [](const std::string& s, double zero_tol, int max_depth, double target_gap) {
        return io::to_json(certify_separation(law(s), separation(zero_tol, max_depth, target_gap))).dump();
      },
      py::arg("law"), py::arg("zero_tol") = 1e-10, py::arg("max_depth") = 40, py::arg("target_gap") = 0.9);
  m.def(
      "triplet",
      [](const std::string& s, double tol, std::size_t n_init) {
        return io::to_json(triplet_multibasis_report(law(s), triplet_params(tol, n_init))).dump();
      },
      py::arg("law"), py::arg("tol") = 1e-10, py::arg("n_init") = 0);
  m.def("reconstruct", [](const std::string& t) {
    const Reconstruction r = reconstruct_law(triplet_of(t));
    json j = io::to_json(r.law);
    j["reconstruction_residual"] = r.residual;
    return j.dump();
  });
  m.def("conv_power", [](const std::string& t, double s) { return io::to_json(conv_power(triplet_of(t), s)).dump(); });
  m.def(
      "is_infinitely_divisible", [](const std::string& t, double tol) { return is_infinitely_divisible(triplet_of(t), tol); },
      py::arg("triplet"), py::arg("tol") = 1e-9);
  m.def("gamma_tau", [](const std::string& t, double tau) { return gamma_tau(triplet_of(t), tau); });
  m.def("spectral_function", [](const std::string& t, const std::vector<double>& u) {
    const SpectralFunction f = levy_spectral_function(triplet_of(t));
    std::vector<double> out;
    for (double x : u) out.push_back(f(x));
    return out;
  });
  m.def("tv_distance", [](const std::string& a, const std::string& b) { return tv_distance(law(a), law(b)); });
  m.def(
      "curves",
      [](const std::string& s, double t0, double t1, std::size_t samples) {
        return io::curves_csv(io::emit_curves(law(s), t0, t1, samples));
      },
      py::arg("law"), py::arg("t0"), py::arg("t1"), py::arg("samples") = 512);
  m.def(
      "check_convergence",
      [](const std::vector<std::string>& members, const std::string& limit, unsigned threads) {
        return io::to_json(check_convergence(LawSequence(laws(members), law(limit)), limit_params(threads))).dump();
      },
      py::arg("members"), py::arg("limit"), py::arg("threads") = 1);
  m.def(
      "check_relative_compactness",
      [](const std::vector<std::string>& members, unsigned threads) {
        return io::to_json(check_relative_compactness(LawSequence(laws(members)), limit_params(threads))).dump();
      },
      py::arg("members"), py::arg("threads") = 1);
  m.def(
      "check_stochastic_compactness",
      [](const std::vector<std::string>& members, unsigned threads) {
        return io::to_json(check_stochastic_compactness(LawSequence(laws(members)), limit_params(threads))).dump();
      },
      py::arg("members"), py::arg("threads") = 1);
}
