#pragma once

#include "resolv/core_prob.hpp"
#include "resolv/rng.hpp"

#include <cmath>
#include <vector>

namespace resolv::testing {

// Strictly positive random pmf; `floor` keeps every letter away from zero.
inline Pmf random_pmf(Rng& rng, Index k, double floor = 0.02) {
  Vector v(k);
  for (Index i = 0; i < k; ++i) v[i] = floor + rng.uniform01();
  return Pmf(Vector(v / v.sum()));
}

// Binary input, |V| in {2, 3}, full support.
inline JointPmf random_joint(Rng& rng) {
  const Index nv = 2 + static_cast<Index>(rng.next() % 2);
  Matrix t(2, nv);
  for (Index u = 0; u < 2; ++u)
    for (Index v = 0; v < nv; ++v) t(u, v) = 0.02 + rng.uniform01();
  return JointPmf(Matrix(t / t.sum()));
}

inline std::vector<JointPmf> random_joints(std::uint64_t seed, int count) {
  Rng rng(seed);
  std::vector<JointPmf> out;
  for (int i = 0; i < count; ++i) out.push_back(random_joint(rng));
  return out;
}

// Crossover c in (0, 1/2) with 1 - H2(c) = info, by bisection.
inline double bsc_crossover_for(double info) {
  double lo = 1e-12;
  double hi = 0.5;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double h = -mid * std::log2(mid) - (1 - mid) * std::log2(1 - mid);
    if (1.0 - h > info)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace resolv::testing
