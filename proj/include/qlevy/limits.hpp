#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qlevy/charfn.hpp"
#include "qlevy/measures.hpp"
#include "qlevy/spectral.hpp"
#include "qlevy/triplet.hpp"

namespace qlevy {

/// sum over the union support of |p_F - p_G|.
double tv_distance(const DiscreteLaw& f, const DiscreteLaw& g);

/// A finite prefix F_1..F_n over one shared basis, optionally with a limit.
class LawSequence {
 public:
  explicit LawSequence(std::vector<DiscreteLaw> laws, std::optional<DiscreteLaw> limit = std::nullopt);

  const std::vector<DiscreteLaw>& laws() const noexcept { return laws_; }
  const std::optional<DiscreteLaw>& limit() const noexcept { return limit_; }
  std::size_t size() const noexcept { return laws_.size(); }

 private:
  std::vector<DiscreteLaw> laws_;
  std::optional<DiscreteLaw> limit_;
};

/// Frequencies ordered by (|value|, positive first, coordinates), with the
/// zero frequency first when present.
std::vector<Coords> enumerate_frequencies(const FrequencyBasis& basis, std::vector<Coords> freqs);

/// sum_u |a_u - b_u| with missing frequencies read as 0.
double lambda_distance(const QuasiTriplet& a, const QuasiTriplet& b);

/// How the asymptotic statements are read on a finite prefix.
struct TrendParams {
  /// "-> 0": the final value is below this ...
  double zero_threshold = 1e-6;
  /// ... and the values are non-increasing (up to this slack) over the
  /// trailing fraction of the prefix.
  double trailing_fraction = 1.0 / 3.0;
  double monotone_slack = 1e-9;
  /// "sup < inf": the final running sup is at most growth_factor times the
  /// running sup at growth_reference * n. Only assessed for prefixes of at
  /// least min_trend_length members.
  double growth_factor = 2.0;
  double growth_reference = 0.2;
  std::size_t min_trend_length = 20;
  /// "liminf > 0": degenerate when the trailing minimum is below this, or
  /// the l1 norms halve from growth_reference * n while decreasing over the
  /// trailing fraction.
  double degenerate_threshold = 1e-6;
  /// Frequency counts N at which condition (iii) tails are reported; empty
  /// means 1, 2, 4, ... up to the size of the frequency set.
  std::vector<std::size_t> tail_schedule;
};

struct LimitParams {
  TripletParams triplet;
  TrendParams trend;
  /// Worker threads for per-member computations; results do not depend on it.
  unsigned threads = 1;
};

enum class Verdict { CriterionHolds, CriterionFails, Inconclusive };
const char* verdict_name(Verdict v) noexcept;

struct ConvergenceVerdict {
  Verdict verdict = Verdict::Inconclusive;
  std::string reason;
  /// 1-based n_0 with gamma_n = gamma for all n >= n_0 in the prefix.
  std::optional<std::size_t> gamma_stable_from;
  Coords limit_gamma;
  std::vector<Coords> gammas;
  std::vector<double> ell1_distances;
  std::vector<double> tv_distances;
  std::vector<double> ell1_norms;
  bool ell1_to_zero = false;
  bool tv_to_zero = false;
  /// The l1 and TV readings point the same way.
  bool trend_agreement = false;
};

/// Finite-sample evaluation of: gamma_n = gamma eventually and
/// sum_u |lambda_{n,u} - lambda_u| -> 0. Throws LimitNotSeparated when the
/// limit is not certified and TripletFailed for a failing member.
ConvergenceVerdict check_convergence(const LawSequence& seq, const LimitParams& params = {});

struct TailEntry {
  std::size_t n = 0;
  double sup_tail = 0.0;
};

struct RelativeCompactnessReport {
  std::size_t members = 0;
  std::vector<Coords> gammas;
  /// (i) distinct gamma values, and whether none is new in the trailing part.
  std::vector<Coords> distinct_gammas;
  bool gamma_pass = true;
  /// (ii) running sup of sum |lambda_n|.
  std::vector<double> ell1_norms;
  std::vector<double> running_sup;
  std::optional<double> growth_ratio;
  bool sup_pass = true;
  std::string sup_note;
  /// (iii) sup over members of sum_{k > N} |lambda_{n, u_k}|.
  std::size_t frequency_count = 0;
  std::vector<TailEntry> tails;
  bool tail_pass = true;
  bool pass = true;
  std::vector<QuasiTriplet> triplets;
};

RelativeCompactnessReport check_relative_compactness(const LawSequence& seq, const LimitParams& params = {});

struct StochasticCompactnessReport {
  RelativeCompactnessReport relative;
  std::vector<double> running_min;
  double trailing_min = 0.0;
  bool degenerate = false;
  std::string note;
  bool pass = true;
};

StochasticCompactnessReport check_stochastic_compactness(RelativeCompactnessReport relative,
                                                         const LimitParams& params = {});
StochasticCompactnessReport check_stochastic_compactness(const LawSequence& seq, const LimitParams& params = {});

struct MemberSeparation {
  SeparationVerdict verdict = SeparationVerdict::Undecided;
  std::string label;
  double mu = 0.0;
  double best_inf_estimate = 0.0;
};

struct SeparationProbe {
  std::vector<MemberSeparation> members;
  /// 1-based index from which every member of the prefix is certified.
  std::optional<std::size_t> certified_from;
};

SeparationProbe eventually_in_DS_probe(const LawSequence& seq, const LimitParams& params = {});

}  // namespace qlevy
