#include "qlevy/charfn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

#include "qlevy/errors.hpp"

namespace qlevy {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Cell {
  std::vector<double> center;
  double half_width = 0.0;
  double bound = 0.0;
  double modulus = 0.0;
  int depth = 0;
};

struct CellOrder {
  bool operator()(const Cell& a, const Cell& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    if (a.depth != b.depth) return a.depth > b.depth;
    return a.center > b.center;  // total order keeps the search reproducible
  }
};

}  // namespace

cplx cf_eval(const DiscreteLaw& law, double t) {
  cplx acc{0.0, 0.0};
  for (const auto& [c, p] : law.atoms()) {
    const double x = law.basis().value(c);
    acc += p * std::polar(1.0, t * x);
  }
  return acc;
}

TorusFunction::TorusFunction(const DiscreteLaw& law) : law_(law), dim_(law.dim()) {
  masses_.reserve(law.size());
  coords_.reserve(law.size() * dim_);
  lipschitz_.assign(dim_, 0.0);
  for (const auto& [c, p] : law.atoms()) {
    masses_.push_back(p);
    for (std::size_t j = 0; j < dim_; ++j) {
      coords_.push_back(static_cast<double>(c[j]));
      lipschitz_[j] += p * std::abs(static_cast<double>(c[j]));
    }
  }
}

cplx TorusFunction::operator()(std::span<const double> theta) const {
  cplx acc{0.0, 0.0};
  for (std::size_t k = 0; k < masses_.size(); ++k) {
    double phase = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) phase += coords_[k * dim_ + j] * theta[j];
    acc += masses_[k] * std::polar(1.0, phase);
  }
  return acc;
}

std::vector<double> TorusFunction::diagonal_point(double t) const {
  std::vector<double> theta(dim_);
  for (std::size_t j = 0; j < dim_; ++j) {
    double v = std::fmod(t * law_.basis().alpha(j), kTwoPi);
    if (v < 0.0) v += kTwoPi;
    theta[j] = v;
  }
  return theta;
}

TorusFunction torus_lift(const DiscreteLaw& law) { return TorusFunction(law); }

std::optional<double> dominant_mass_bound(const DiscreteLaw& law) {
  const double p = law.max_mass();
  if (p > 0.5) return 2.0 * p - 1.0;
  return std::nullopt;
}

std::string SeparationCertificate::label() const {
  switch (verdict) {
    case SeparationVerdict::Certified: return "certified";
    case SeparationVerdict::ZeroFound: return dim == 1 ? "zero" : "infimum zero (torus)";
    case SeparationVerdict::Undecided: return "undecided";
  }
  return "undecided";
}

SeparationCertificate certify_separation(const TorusFunction& phi, const SeparationParams& params) {
  if (params.max_depth < 0 || !(params.zero_tol > 0.0) || !(params.target_gap > 0.0) ||
      params.target_gap > 1.0)
    throw Error(Errc::InvalidArgument, "invalid separation parameters");

  const std::size_t d = phi.dim();
  const auto lip = phi.lipschitz();
  double lip_sum = 0.0;
  for (double l : lip) lip_sum += l;
  // Floating-point slack on |phi(center)|: each term contributes a few ulps.
  const double eval_slack = 64.0 * std::numeric_limits<double>::epsilon() *
                            static_cast<double>(phi.law().size() + d);

  SeparationCertificate cert;
  cert.dim = d;
  cert.basis_declared_independent = phi.law().basis().declared_independent();

  auto make_cell = [&](std::vector<double> center, double half_width, int depth) {
    Cell cell;
    cell.modulus = std::abs(phi(center));
    cell.bound = cell.modulus - lip_sum * half_width - eval_slack;
    cell.center = std::move(center);
    cell.half_width = half_width;
    cell.depth = depth;
    return cell;
  };

  double best = std::numeric_limits<double>::infinity();
  std::vector<double> best_theta;
  auto observe = [&](const Cell& c) {
    if (c.modulus < best) {
      best = c.modulus;
      best_theta = c.center;
    }
  };

  auto finish = [&](SeparationVerdict v, double mu, int depth) {
    cert.verdict = v;
    cert.mu = mu;
    cert.depth = depth;
    cert.best_inf_estimate = best;
    cert.theta_star = best_theta;
    if (d == 1 && phi.law().basis().alpha(0) != 0.0)
      cert.t_star = best_theta[0] / std::abs(phi.law().basis().alpha(0));
    return cert;
  };

  std::priority_queue<Cell, std::vector<Cell>, CellOrder> queue;
  queue.push(make_cell(std::vector<double>(d, std::numbers::pi), std::numbers::pi, 0));
  observe(queue.top());
  if (lip_sum == 0.0 || phi.law().size() == 1) {
    // A single atom: |phi| is identically one.
    cert.cells = 1;
    return finish(SeparationVerdict::Certified, 1.0 - eval_slack, 0);
  }

  std::size_t step = 0;
  int max_seen_depth = 0;
  while (true) {
    if (best <= params.zero_tol) {
      cert.cells = queue.size();
      return finish(SeparationVerdict::ZeroFound, 0.0, max_seen_depth);
    }
    const Cell top = queue.top();
    if (step % params.log_every == 0)
      cert.search_log.push_back({step, queue.size(), max_seen_depth, top.bound, best});
    if (top.bound > 0.0 && top.bound >= params.target_gap * best) {
      cert.cells = queue.size();
      cert.search_log.push_back({step, queue.size(), max_seen_depth, top.bound, best});
      return finish(SeparationVerdict::Certified, top.bound, max_seen_depth);
    }
    if (top.depth >= params.max_depth || queue.size() + (std::size_t{1} << d) > params.max_cells) {
      cert.cells = queue.size();
      cert.search_log.push_back({step, queue.size(), max_seen_depth, top.bound, best});
      return finish(SeparationVerdict::Undecided, 0.0, max_seen_depth);
    }
    queue.pop();
    ++step;

    const double h = 0.5 * top.half_width;
    const int depth = top.depth + 1;
    max_seen_depth = std::max(max_seen_depth, depth);
    for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
      std::vector<double> c = top.center;
      for (std::size_t j = 0; j < d; ++j) c[j] += (mask >> j & 1U) ? h : -h;
      Cell child = make_cell(std::move(c), h, depth);
      observe(child);
      queue.push(std::move(child));
    }
  }
}

SeparationCertificate certify_separation(const DiscreteLaw& law, const SeparationParams& params) {
  return certify_separation(TorusFunction(law), params);
}

}  // namespace qlevy
