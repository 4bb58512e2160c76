#pragma once

// Minimal resolvability rate for a fixed channel: minimize I(U;V) over input laws x
// with x W = Q_V. Mutual information is concave in x for a fixed channel, so the
// minimum sits at a vertex of the feasibility polytope {x >= 0, x W = Q_V}.

#include "resolv/core_prob.hpp"
#include "resolv/engine.hpp"

#include <span>
#include <string>
#include <vector>

namespace resolv {

inline constexpr double kFeasibilityTolerance = 1e-9;
inline constexpr double kBoundaryBand = 1e-6;
/// Largest input alphabet handled by exhaustive basis enumeration.
inline constexpr Index kMaxEnumeratedInputs = 12;

struct Feasibility {
  bool feasible = false;
  /// Least-squares non-negative input law (normalized when feasible).
  Vector witness;
  /// max_v |(x W)(v) - Q_V(v)| at the witness.
  double residual = 0.0;
  /// Output letter attaining the residual.
  Index worst_output = 0;
};

Feasibility feasibility(const ChannelMatrix& channel, const Pmf& target);

/// Vertices of the feasibility polytope (basic feasible solutions), deduplicated and
/// sorted lexicographically. Requires |U| <= kMaxEnumeratedInputs.
std::vector<Pmf> feasible_vertices(const ChannelMatrix& channel, const Pmf& target);

struct RateCertificate {
  double min_mutual_information = 0.0;
  Pmf argmin_input = Pmf::point_mass(1, 0);
  bool feasible = false;
  Index support_size = 0;
};

/// Exhaustive vertex search for |U| <= 12 (ties within 1e-10 go to the lexicographically
/// smallest vertex); otherwise support-reducing descent from the feasibility witness.
/// Throws InfeasibleTarget naming the violated output letter.
RateCertificate min_rate(const ChannelMatrix& channel, const Pmf& target);

enum class Verdict { Achievable, NotAchievable, Boundary };

std::string to_string(Verdict v);

struct AchievabilityReport {
  Verdict verdict = Verdict::Boundary;
  /// R - threshold, bits per symbol.
  double margin = 0.0;
  double threshold = 0.0;
};

/// Compares R with the certificate threshold (divided by H2(p) for bit streams).
/// The band is applied to R H2(p) - I, so a bit-stream verdict at R equals the
/// uniform verdict at R H2(p).
AchievabilityReport achievability_report(const ChannelMatrix& channel, const Pmf& target, double rate,
                                         const MessageSource& source, double band = kBoundaryBand);
AchievabilityReport achievability_report(const RateCertificate& certificate, double rate, const MessageSource& source,
                                         double band = kBoundaryBand);

struct DecayPoint {
  int n = 0;
  double mean = 0.0;
  double std_error = 0.0;
};

/// Sub-exponential weight alpha(n): n^degree, or 2^(gamma n) when exponential.
struct ScalingFamily {
  enum class Kind { Polynomial, Exponential };
  Kind kind = Kind::Polynomial;
  int degree = 0;
  double gamma = 0.0;

  static ScalingFamily polynomial(int m) { return {Kind::Polynomial, m, 0.0}; }
  static ScalingFamily exponential(double gamma) { return {Kind::Exponential, 0, gamma}; }
  double operator()(int n) const;
  std::string describe() const;
};

/// RMS residual (bits) above which a fit makes no decay claim.
inline constexpr double kDecayResidualThreshold = 0.5;

struct DecayFit {
  /// Decay exponent in bits per symbol: mean_D ~ c 2^(-beta n).
  double beta_hat = 0.0;
  double c_hat = 0.0;
  /// RMS of log2(mean_D) about the fitted line.
  double residual = 0.0;
  std::string alpha_family;
  /// alpha(n) * mean_D strictly decreasing over the sampled n.
  bool alpha_scaled_decreasing = false;
  /// residual <= kDecayResidualThreshold.
  bool claim = false;
};

/// Least squares of log2(mean_D) on n. Needs >= 4 points with distinct n; throws
/// DomainError on a non-positive mean (the divergence is then exactly achieved).
DecayFit fit_decay(std::span<const DecayPoint> points, const ScalingFamily& alpha);

}  // namespace resolv
