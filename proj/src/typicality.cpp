#include "resolv/typicality.hpp"

#include "resolv/error.hpp"

#include <cmath>
#include <functional>

namespace resolv {
namespace {

// Absolute slack on |N - nP| so that boundary types (equality in the defining
// inequality) are not lost to rounding of n * P(a).
constexpr double kBoundarySlack = 1e-12;

}  // namespace

TypicalityParams::TypicalityParams(double epsilon_, int n_) : epsilon(epsilon_), n(n_) {
  if (!(epsilon_ >= 0.0)) throw DomainError("TypicalityParams: epsilon must be non-negative");
  if (n_ < 1) throw DomainError("TypicalityParams: n must be positive");
}

std::vector<Index> letter_counts(std::span<const Symbol> x, Index k) {
  std::vector<Index> counts(static_cast<std::size_t>(k), 0);
  for (Symbol s : x) {
    if (s < 0 || s >= k) throw DimensionError("letter_counts: symbol outside alphabet");
    ++counts[static_cast<std::size_t>(s)];
  }
  return counts;
}

bool is_typical_type(std::span<const Index> counts, const Pmf& p, const TypicalityParams& params) {
  if (static_cast<Index>(counts.size()) != p.size()) throw DimensionError("is_typical_type: alphabet mismatch");
  const double n = params.n;
  for (Index a = 0; a < p.size(); ++a) {
    const double deviation = std::abs(static_cast<double>(counts[static_cast<std::size_t>(a)]) - n * p[a]);
    if (deviation > params.epsilon * n * p[a] + kBoundarySlack * n) return false;
  }
  return true;
}

bool is_letter_typical(std::span<const Symbol> x, const Pmf& p, const TypicalityParams& params) {
  if (static_cast<int>(x.size()) != params.n) throw DimensionError("is_letter_typical: sequence length != n");
  const auto counts = letter_counts(x, p.size());
  return is_typical_type(counts, p, params);
}

bool jointly_typical(std::span<const Symbol> u, std::span<const Symbol> v, const JointPmf& joint,
                     const TypicalityParams& params) {
  if (u.size() != v.size()) throw DimensionError("jointly_typical: sequence lengths differ");
  if (static_cast<int>(u.size()) != params.n) throw DimensionError("jointly_typical: sequence length != n");
  const Index nv = joint.output_size();
  std::vector<Index> counts(static_cast<std::size_t>(joint.input_size() * nv), 0);
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] < 0 || u[i] >= joint.input_size() || v[i] < 0 || v[i] >= nv)
      throw DimensionError("jointly_typical: symbol outside alphabet");
    ++counts[static_cast<std::size_t>(u[i] * nv + v[i])];
  }
  return is_typical_type(counts, joint.flattened(), params);
}

double typical_mass(const Pmf& p, const TypicalityParams& params) {
  checked_power(p.size(), params.n);
  const Index k = p.size();
  const int n = params.n;
  const double log_n_factorial = std::lgamma(n + 1.0);
  std::vector<Index> counts(static_cast<std::size_t>(k), 0);
  double mass = 0.0;

  // Compositions of n into k parts, last coordinate fastest.
  std::function<void(Index, int)> visit = [&](Index letter, int remaining) {
    if (letter == k - 1) {
      counts[static_cast<std::size_t>(letter)] = remaining;
      if (!is_typical_type(counts, p, params)) return;
      double log_weight = log_n_factorial;
      for (Index a = 0; a < k; ++a) {
        const Index c = counts[static_cast<std::size_t>(a)];
        if (c == 0) continue;
        if (p[a] <= 0.0) return;
        log_weight += static_cast<double>(c) * std::log(p[a]) - std::lgamma(static_cast<double>(c) + 1.0);
      }
      mass += std::exp(log_weight);
      return;
    }
    for (int c = 0; c <= remaining; ++c) {
      counts[static_cast<std::size_t>(letter)] = c;
      visit(letter + 1, remaining - c);
    }
  };
  visit(0, n);
  return mass;
}

double atypical_mass_bound(const Pmf& p, const TypicalityParams& params) {
  const double mu = p.min_on_support();
  return 2.0 * static_cast<double>(p.size()) *
         std::exp(-2.0 * params.n * params.epsilon * params.epsilon * mu * mu);
}

MuConstants mu_constants(const JointPmf& joint) {
  return {joint.output_marginal().min_on_support(), joint.flattened().min_on_support()};
}

}  // namespace resolv
