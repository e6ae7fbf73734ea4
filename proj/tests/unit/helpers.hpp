#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "twomode/dicke.hpp"

namespace testing_util {

using twomode::cplx;

inline twomode::DickeVector random_state(twomode::ParticleNumber n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<cplx> c(n.dim());
  for (auto& x : c) x = {g(rng), g(rng)};
  return {n, std::move(c)};
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline const std::vector<twomode::Term>& all_terms() {
  using twomode::Term;
  static const std::vector<Term> t = {Term::Dephasing, Term::Self0,   Term::Self1,     Term::Contact,
                                      Term::Tunnel1,   Term::Pair,    Term::Weighted0, Term::Weighted1};
  return t;
}

// exp(i alpha Jz) A exp(-i alpha Jz) entrywise: <j|.|k> picks exp(i alpha (j-k)).
inline twomode::CMatrix conjugate_by_jz(const twomode::CMatrix& a, double alpha) {
  twomode::CMatrix out(a.size());
  for (int j = 0; j < a.size(); ++j)
    for (int k = 0; k < a.size(); ++k) out(j, k) = a(j, k) * std::polar(1.0, alpha * (j - k));
  return out;
}

}  // namespace testing_util
