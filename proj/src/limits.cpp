#include "qlevy/limits.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <set>
#include <thread>

#include "qlevy/errors.hpp"

namespace qlevy {
namespace {

// Evaluates fn(i) for i < n on up to `threads` workers. Results are stored by
// index and the error of the lowest failing index is rethrown, so the outcome
// never depends on scheduling.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t n, unsigned threads, Fn fn) {
  std::vector<std::optional<T>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<T> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

std::vector<QuasiTriplet> member_triplets(const LawSequence& seq, const LimitParams& params) {
  return parallel_map<QuasiTriplet>(seq.size(), params.threads, [&](std::size_t i) {
    try {
      return triplet_multibasis(seq.laws()[i], params.triplet);
    } catch (const Error& e) {
      throw TripletFailed(i, e);
    }
  });
}

std::size_t trailing_start(std::size_t n, const TrendParams& trend) {
  const auto len = static_cast<std::size_t>(std::ceil(trend.trailing_fraction * static_cast<double>(n)));
  return n - std::min(n, std::max<std::size_t>(len, 1));
}

bool non_increasing_tail(const std::vector<double>& v, const TrendParams& trend) {
  for (std::size_t i = trailing_start(v.size(), trend) + 1; i < v.size(); ++i)
    if (v[i] > v[i - 1] + trend.monotone_slack) return false;
  return true;
}

bool tends_to_zero(const std::vector<double>& v, const TrendParams& trend) {
  return !v.empty() && v.back() < trend.zero_threshold && non_increasing_tail(v, trend);
}

std::size_t reference_index(std::size_t n, const TrendParams& trend) {
  const auto k = static_cast<std::size_t>(std::ceil(trend.growth_reference * static_cast<double>(n)));
  return std::min(n - 1, k == 0 ? 0 : k - 1);
}

}  // namespace

double tv_distance(const DiscreteLaw& f, const DiscreteLaw& g) {
  if (!(f.basis() == g.basis())) throw Error(Errc::BasisMismatch, "laws are written over different bases");
  return total_variation(subtract(f.as_measure(), g.as_measure()));
}

LawSequence::LawSequence(std::vector<DiscreteLaw> laws, std::optional<DiscreteLaw> limit)
    : laws_(std::move(laws)), limit_(std::move(limit)) {
  if (laws_.empty()) throw Error(Errc::InvalidArgument, "a law sequence needs at least one member");
  const FrequencyBasis& basis = laws_.front().basis();
  for (const auto& law : laws_)
    if (!(law.basis() == basis)) throw Error(Errc::BasisMismatch, "sequence members use different bases");
  if (limit_ && !(limit_->basis() == basis)) throw Error(Errc::BasisMismatch, "the limit uses a different basis");
}

std::vector<Coords> enumerate_frequencies(const FrequencyBasis& basis, std::vector<Coords> freqs) {
  auto key = [&](const Coords& c) {
    const double v = basis.value(c);
    return std::make_tuple(std::abs(v), v < 0.0, c);
  };
  std::sort(freqs.begin(), freqs.end(), [&](const Coords& a, const Coords& b) { return key(a) < key(b); });
  freqs.erase(std::unique(freqs.begin(), freqs.end()), freqs.end());
  return freqs;
}

double lambda_distance(const QuasiTriplet& a, const QuasiTriplet& b) {
  double s = 0.0;
  for (const auto& [l, v] : a.lambdas()) s += std::abs(v - b.lambda(l));
  for (const auto& [l, v] : b.lambdas())
    if (!a.lambdas().contains(l)) s += std::abs(v);
  return s;
}

const char* verdict_name(Verdict v) noexcept {
  switch (v) {
    case Verdict::CriterionHolds: return "CriterionHolds";
    case Verdict::CriterionFails: return "CriterionFails";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

ConvergenceVerdict check_convergence(const LawSequence& seq, const LimitParams& params) {
  if (!seq.limit()) throw Error(Errc::InvalidArgument, "convergence check needs a limit law");
  const DiscreteLaw& limit = *seq.limit();
  const TrendParams& trend = params.trend;

  const SeparationCertificate cert = certify_separation(limit, params.triplet.separation);
  if (!cert.certified())
    throw Error(Errc::LimitNotSeparated, "the limit law is not certified separated from zero (verdict: " +
                                             cert.label() + ")");
  const QuasiTriplet limit_triplet = triplet_multibasis(limit, params.triplet);
  const std::vector<QuasiTriplet> triplets = member_triplets(seq, params);

  ConvergenceVerdict out;
  out.limit_gamma = limit_triplet.gamma_coords();
  const std::size_t n = seq.size();
  for (std::size_t i = 0; i < n; ++i) {
    out.gammas.push_back(triplets[i].gamma_coords());
    out.ell1_distances.push_back(lambda_distance(triplets[i], limit_triplet));
    out.ell1_norms.push_back(triplets[i].l1_norm());
    out.tv_distances.push_back(tv_distance(seq.laws()[i], limit));
  }
  for (std::size_t i = n; i-- > 0;) {
    if (out.gammas[i] != out.limit_gamma) break;
    out.gamma_stable_from = i + 1;
  }

  out.ell1_to_zero = tends_to_zero(out.ell1_distances, trend);
  out.tv_to_zero = tends_to_zero(out.tv_distances, trend);
  out.trend_agreement = out.ell1_to_zero == out.tv_to_zero;

  const std::size_t start = trailing_start(n, trend);
  const bool decreasing = out.ell1_distances.back() < out.ell1_distances[start] - trend.monotone_slack;
  if (!out.gamma_stable_from) {
    out.verdict = Verdict::CriterionFails;
    out.reason = "gamma of the last member differs from the gamma of the limit";
  } else if (out.ell1_to_zero) {
    out.verdict = Verdict::CriterionHolds;
    out.reason = "gamma stable and spectral distance below threshold with a decreasing trend";
  } else if (!decreasing && out.ell1_distances.back() >= trend.zero_threshold) {
    out.verdict = Verdict::CriterionFails;
    out.reason = "spectral distance above threshold and not decreasing over the trailing part";
  } else {
    out.verdict = Verdict::Inconclusive;
    out.reason = "spectral distance decreasing but still above threshold";
  }
  return out;
}

RelativeCompactnessReport check_relative_compactness(const LawSequence& seq, const LimitParams& params) {
  const TrendParams& trend = params.trend;
  RelativeCompactnessReport r;
  r.triplets = member_triplets(seq, params);
  const std::size_t n = seq.size();
  r.members = n;

  // (i)
  const std::size_t start = std::max<std::size_t>(1, trailing_start(n, trend));
  for (std::size_t i = 0; i < n; ++i) {
    const Coords& g = r.triplets[i].gamma_coords();
    r.gammas.push_back(g);
    if (std::find(r.distinct_gammas.begin(), r.distinct_gammas.end(), g) == r.distinct_gammas.end()) {
      r.distinct_gammas.push_back(g);
      if (i >= start) r.gamma_pass = false;
    }
  }

  // (ii)
  double sup = 0.0;
  for (const auto& t : r.triplets) {
    r.ell1_norms.push_back(t.l1_norm());
    sup = std::max(sup, t.l1_norm());
    r.running_sup.push_back(sup);
  }
  if (n >= trend.min_trend_length) {
    const double ref = r.running_sup[reference_index(n, trend)];
    const double last = r.running_sup.back();
    if (ref > 0.0) {
      r.growth_ratio = last / ref;
      r.sup_pass = *r.growth_ratio <= trend.growth_factor;
    } else {
      r.sup_pass = last == 0.0;
    }
    r.sup_note = r.sup_pass ? "no growth beyond the factor" : "running sup grows beyond the factor";
  } else {
    r.sup_note = "trend not assessed: prefix shorter than " + std::to_string(trend.min_trend_length);
  }

  // (iii)
  std::vector<Coords> all;
  for (const auto& t : r.triplets)
    for (const auto& [l, v] : t.lambdas()) all.push_back(l);
  const FrequencyBasis& basis = r.triplets.front().basis();
  std::vector<Coords> order = enumerate_frequencies(basis, std::move(all));
  order.insert(order.begin(), Coords(basis.dim(), 0));  // u_0 = 0
  r.frequency_count = order.size();
  std::map<Coords, std::size_t> rank;
  for (std::size_t k = 0; k < order.size(); ++k) rank.emplace(order[k], k);

  std::vector<std::size_t> schedule = trend.tail_schedule;
  if (schedule.empty())
    for (std::size_t m = 1; m < order.size(); m *= 2) schedule.push_back(m);
  for (std::size_t m : schedule) {
    double worst = 0.0;
    for (const auto& t : r.triplets) {
      double s = 0.0;
      for (const auto& [l, v] : t.lambdas())
        if (rank.at(l) > m) s += std::abs(v);
      worst = std::max(worst, s);
    }
    r.tails.push_back({m, worst});
  }
  r.tail_pass = r.tails.empty() || r.tails.back().sup_tail < trend.zero_threshold;
  r.pass = r.gamma_pass && r.sup_pass && r.tail_pass;
  return r;
}

StochasticCompactnessReport check_stochastic_compactness(RelativeCompactnessReport relative,
                                                         const LimitParams& params) {
  const TrendParams& trend = params.trend;
  StochasticCompactnessReport s;
  s.relative = std::move(relative);
  const auto& norms = s.relative.ell1_norms;
  const std::size_t n = norms.size();
  if (n == 0) throw Error(Errc::InvalidArgument, "empty compactness report");

  double lo = norms.front();
  for (double v : norms) s.running_min.push_back(lo = std::min(lo, v));
  const std::size_t start = trailing_start(n, trend);
  s.trailing_min = *std::min_element(norms.begin() + static_cast<std::ptrdiff_t>(start), norms.end());

  if (s.trailing_min < trend.degenerate_threshold) {
    s.degenerate = true;
    s.note = "trailing minimum of sum |lambda_n| is below the threshold";
  } else if (n >= 3) {
    const double ref = norms[reference_index(n, trend)];
    const bool halved = norms.back() < 0.5 * ref;
    const bool falling = non_increasing_tail(norms, trend) && norms.back() < norms[start];
    if (halved && falling) {
      s.degenerate = true;
      s.note = "sum |lambda_n| keeps decreasing and has halved";
    }
  }
  if (!s.degenerate) s.note = "sum |lambda_n| stays away from zero";
  s.pass = s.relative.pass && !s.degenerate;
  return s;
}

StochasticCompactnessReport check_stochastic_compactness(const LawSequence& seq, const LimitParams& params) {
  return check_stochastic_compactness(check_relative_compactness(seq, params), params);
}

SeparationProbe eventually_in_DS_probe(const LawSequence& seq, const LimitParams& params) {
  SeparationProbe out;
  out.members = parallel_map<MemberSeparation>(seq.size(), params.threads, [&](std::size_t i) {
    const SeparationCertificate c = certify_separation(seq.laws()[i], params.triplet.separation);
    return MemberSeparation{c.verdict, c.label(), c.mu, c.best_inf_estimate};
  });
  for (std::size_t i = out.members.size(); i-- > 0;) {
    if (out.members[i].verdict != SeparationVerdict::Certified) break;
    out.certified_from = i + 1;
  }
  return out;
}

}  // namespace qlevy
