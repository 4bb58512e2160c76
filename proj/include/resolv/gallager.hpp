#pragma once

// Gallager-type exponents on -1/2 <= rho <= 0, in bits:
//   E0(rho)   = log2 sum_v { sum_u Q(u) Q(v|u)^(1/(1+rho)) }^(1+rho)
//   E0^n(rho) = log2 sum_{v^n} { E[P(v^n)^(1/(1+rho))] }^(1+rho)   (expectation over codebooks)
//   E_G(R)    = inf_{-1/2 <= rho < 0} E0(rho) + rho R

#include "resolv/core_prob.hpp"
#include "resolv/engine.hpp"

#include <span>
#include <vector>

namespace resolv {

inline constexpr double kRhoMin = -0.5;

/// Sampled exponent curve; the grid is strictly increasing inside [-1/2, 0].
class ExponentCurve {
 public:
  ExponentCurve(std::vector<double> rho_grid, std::vector<double> values);

  const std::vector<double>& rho_grid() const { return rho_grid_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return rho_grid_.size(); }

 private:
  std::vector<double> rho_grid_;
  std::vector<double> values_;
};

/// `points` equally spaced values from -1/2 to 0 inclusive (points >= 2).
std::vector<double> rho_grid(int points);

double e0_single_letter(double rho, const JointPmf& joint);
/// dE0/drho, analytic.
double e0_single_letter_derivative(double rho, const JointPmf& joint);

double e0_blocklength(double rho, const Pmf& input, const ChannelMatrix& channel, int n, Index m,
                      const MessageSource& source);
/// E0^n on a whole grid with one pass over the codebook ensemble.
std::vector<double> e0_blocklength(std::span<const double> rhos, const Pmf& input, const ChannelMatrix& channel, int n,
                                   Index m, const MessageSource& source);

ExponentCurve single_letter_curve(const JointPmf& joint, std::span<const double> grid);
ExponentCurve blocklength_curve(const Pmf& input, const ChannelMatrix& channel, int n, Index m,
                                const MessageSource& source, std::span<const double> grid);

struct GallagerExponent {
  double value = 0.0;
  /// Minimizer; 0 when the infimum is approached as rho -> 0^- (R <= I(V;U)).
  double rho_star = 0.0;
};

/// Convex 1-D minimization: 64-point coarse grid on [-1/2, -1e-9] refined by golden
/// section to 1e-10 in rho. The open endpoint is decided by the sign of the analytic
/// slope E0'(rho) + R at rho = -1e-9.
GallagerExponent gallager_exponent(double rate, const JointPmf& joint);

/// log2(1 + 2^(n E_G(R))).
double lemma2_bound(double rate, const JointPmf& joint, int n);

/// log2(1 + 2^(n (E0(rho) + rho R))): the bound on E0^n(rho) the argument yields at a fixed rho.
double lemma2_pointwise_bound(double rho, double rate, const JointPmf& joint, int n);

/// log2(1 + 2^(n E_G(R))) / (-rho), for rho in [-1/2, 0).
double divergence_bound_via_exponent(double rate, const JointPmf& joint, int n, double rho);

struct CurveRow {
  double rho;
  double e0_single;
  double e0_block;
  /// rho * (-E[D]): the tangent of E0^n at rho = 0.
  double chord;
};

std::vector<CurveRow> exponent_curve_table(const Pmf& input, const ChannelMatrix& channel, int n, Index m,
                                           const MessageSource& source, std::span<const double> grid);

}  // namespace resolv
