#pragma once

// Letter-typical sets: x^n is typical for P when |N(a|x^n)/n - P(a)| <= eps * P(a)
// for every letter a, where N(a|x^n) counts occurrences of a.

#include "resolv/core_prob.hpp"

#include <span>
#include <vector>

namespace resolv {

struct TypicalityParams {
  double epsilon = 0.0;
  int n = 1;

  TypicalityParams() = default;
  TypicalityParams(double epsilon_, int n_);
};

/// Letter counts of `x` over an alphabet of size k.
std::vector<Index> letter_counts(std::span<const Symbol> x, Index k);

/// Typicality test on a type (count vector summing to params.n).
bool is_typical_type(std::span<const Index> counts, const Pmf& p, const TypicalityParams& params);

bool is_letter_typical(std::span<const Symbol> x, const Pmf& p, const TypicalityParams& params);

/// Letter-typicality of the paired sequence over U x V (pair letter u*|V| + v).
bool jointly_typical(std::span<const Symbol> u, std::span<const Symbol> v, const JointPmf& joint,
                     const TypicalityParams& params);

/// Exact P^n-mass of the typical set, summed over types.
double typical_mass(const Pmf& p, const TypicalityParams& params);

/// Hoeffding/union bound on the atypical mass: 2|X| exp(-2 n eps^2 mu^2), mu = min over supp(P).
double atypical_mass_bound(const Pmf& p, const TypicalityParams& params);

struct MuConstants {
  double mu_v;
  double mu_uv;
};

/// Minima of Q_V and Q_UV over their supports.
MuConstants mu_constants(const JointPmf& joint);

}  // namespace resolv
