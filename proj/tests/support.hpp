#pragma once

#include <vector>

#include "oracles.hpp"
#include "qlevy/measures.hpp"

namespace support {

inline qlevy::DiscreteLaw law_of(const oracle::Pmf& pmf) {
  std::vector<qlevy::Atom> atoms;
  for (const auto& [x, p] : pmf) atoms.push_back({{x}, p});
  return qlevy::DiscreteLaw(qlevy::FrequencyBasis::integers(), std::move(atoms));
}

inline oracle::Pmf pmf_of(const qlevy::SignedAtomicMeasure& m) {
  oracle::Pmf out;
  for (const auto& [c, w] : m.atoms()) out[c.at(0)] = w;
  return out;
}

inline oracle::Pmf pmf_of(const qlevy::DiscreteLaw& law) { return pmf_of(law.as_measure()); }

inline oracle::Pmf geometric(double p, int kmax) {
  oracle::Pmf out;
  double s = 0.0;
  for (int k = 0; k <= kmax; ++k) s += out[k] = (1.0 - p) * std::pow(p, k);
  for (auto& [k, v] : out) v /= s;
  return out;
}

inline oracle::Pmf two_point(double q0) { return {{0, q0}, {1, 1.0 - q0}}; }

}  // namespace support
