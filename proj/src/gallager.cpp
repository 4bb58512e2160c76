#include "resolv/gallager.hpp"

#include "ensemble.hpp"
#include "resolv/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace resolv {
namespace {

constexpr double kRhoNearZero = -1e-9;
constexpr int kCoarsePoints = 64;
constexpr double kRhoTolerance = 1e-10;

void require_rho(double rho, const char* what) {
  if (!(rho >= kRhoMin && rho <= 0.0)) throw DomainError(std::string(what) + ": rho must lie in [-1/2, 0]");
}

// x^a for x >= 0, a > 0, through the log domain; 0^a = 0.
double power(double x, double a) { return x > 0.0 ? std::exp(a * std::log(x)) : 0.0; }

// log2(1 + 2^x) without overflow.
double log2_one_plus_exp2(double x) {
  if (x > 50.0) return x + std::log2(1.0 + std::exp2(-x));
  return std::log1p(std::exp2(x)) * std::numbers::log2e;
}

}  // namespace

ExponentCurve::ExponentCurve(std::vector<double> rho_grid, std::vector<double> values)
    : rho_grid_(std::move(rho_grid)), values_(std::move(values)) {
  if (rho_grid_.size() != values_.size()) throw DimensionError("ExponentCurve: grid and values differ in length");
  for (std::size_t i = 0; i < rho_grid_.size(); ++i) {
    require_rho(rho_grid_[i], "ExponentCurve");
    if (i > 0 && !(rho_grid_[i] > rho_grid_[i - 1]))
      throw DomainError("ExponentCurve: grid must be strictly increasing");
  }
}

std::vector<double> rho_grid(int points) {
  if (points < 2) throw DomainError("rho_grid: need at least two points");
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) grid[static_cast<std::size_t>(i)] = kRhoMin * (points - 1 - i) / (points - 1);
  return grid;
}

double e0_single_letter(double rho, const JointPmf& joint) {
  require_rho(rho, "e0_single_letter");
  const ChannelMatrix channel = joint.conditional();
  const Pmf qu = joint.input_marginal();
  const double s = 1.0 / (1.0 + rho);
  double total = 0.0;
  for (Index v = 0; v < channel.output_size(); ++v) {
    double inner = 0.0;
    for (Index u = 0; u < channel.input_size(); ++u)
      if (qu[u] > 0.0) inner += qu[u] * power(channel(u, v), s);
    total += power(inner, 1.0 + rho);
  }
  return std::log2(total);
}

double e0_single_letter_derivative(double rho, const JointPmf& joint) {
  require_rho(rho, "e0_single_letter_derivative");
  const ChannelMatrix channel = joint.conditional();
  const Pmf qu = joint.input_marginal();
  const double a = 1.0 + rho;
  const double s = 1.0 / a;
  double f = 0.0;
  double df = 0.0;
  for (Index v = 0; v < channel.output_size(); ++v) {
    double g = 0.0;
    double dg = 0.0;
    for (Index u = 0; u < channel.input_size(); ++u) {
      const double w = channel(u, v);
      if (qu[u] <= 0.0 || w <= 0.0) continue;
      const double term = qu[u] * power(w, s);
      g += term;
      dg += term * std::log(w) * (-1.0 / (a * a));
    }
    if (g <= 0.0) continue;
    const double ga = power(g, a);
    f += ga;
    df += ga * (std::log(g) + a * dg / g);
  }
  return df / f * std::numbers::log2e;
}

std::vector<double> e0_blocklength(std::span<const double> rhos, const Pmf& input, const ChannelMatrix& channel, int n,
                                   Index m, const MessageSource& source) {
  for (double rho : rhos) require_rho(rho, "e0_blocklength");
  if (source.size() != m) throw DimensionError("e0_blocklength: message source size differs from M");
  const detail::EnsembleEnumerator ensemble(input, channel, n, source);
  const std::size_t k = rhos.size();
  Matrix acc = Matrix::Zero(static_cast<Index>(k), ensemble.output_states());
  ensemble.for_each([&](double prob, std::span<const Index>, const Vector& induced) {
    for (Index v = 0; v < induced.size(); ++v) {
      const double p = induced[v];
      if (p <= 0.0) continue;
      const double log_p = std::log(p);
      for (std::size_t r = 0; r < k; ++r) acc(static_cast<Index>(r), v) += prob * std::exp(log_p / (1.0 + rhos[r]));
    }
  });
  std::vector<double> out(k);
  for (std::size_t r = 0; r < k; ++r) {
    double total = 0.0;
    for (Index v = 0; v < acc.cols(); ++v) total += power(acc(static_cast<Index>(r), v), 1.0 + rhos[r]);
    out[r] = std::log2(total);
  }
  return out;
}

double e0_blocklength(double rho, const Pmf& input, const ChannelMatrix& channel, int n, Index m,
                      const MessageSource& source) {
  const double rhos[] = {rho};
  return e0_blocklength(rhos, input, channel, n, m, source).front();
}

ExponentCurve single_letter_curve(const JointPmf& joint, std::span<const double> grid) {
  std::vector<double> values;
  for (double rho : grid) values.push_back(e0_single_letter(rho, joint));
  return ExponentCurve({grid.begin(), grid.end()}, std::move(values));
}

ExponentCurve blocklength_curve(const Pmf& input, const ChannelMatrix& channel, int n, Index m,
                                const MessageSource& source, std::span<const double> grid) {
  return ExponentCurve({grid.begin(), grid.end()}, e0_blocklength(grid, input, channel, n, m, source));
}

GallagerExponent gallager_exponent(double rate, const JointPmf& joint) {
  if (!(rate >= 0.0)) throw DomainError("gallager_exponent: rate must be non-negative");
  if (e0_single_letter_derivative(kRhoNearZero, joint) + rate <= 0.0) return {0.0, 0.0};

  const auto objective = [&](double rho) { return e0_single_letter(rho, joint) + rho * rate; };
  std::vector<double> grid(kCoarsePoints);
  std::size_t best = 0;
  double best_value = 0.0;
  for (int i = 0; i < kCoarsePoints; ++i) {
    grid[static_cast<std::size_t>(i)] = kRhoMin + (kRhoNearZero - kRhoMin) * i / (kCoarsePoints - 1);
    const double value = objective(grid[static_cast<std::size_t>(i)]);
    if (i == 0 || value < best_value) {
      best = static_cast<std::size_t>(i);
      best_value = value;
    }
  }

  double lo = grid[best == 0 ? 0 : best - 1];
  double hi = grid[std::min(best + 1, grid.size() - 1)];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = objective(x1);
  double f2 = objective(x2);
  while (hi - lo > kRhoTolerance) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = objective(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = objective(x2);
    }
  }
  GallagerExponent out{best_value, grid[best]};
  for (double rho : {lo, hi, 0.5 * (lo + hi)}) {
    const double value = objective(rho);
    if (value < out.value) out = {value, rho};
  }
  return out;
}

double lemma2_bound(double rate, const JointPmf& joint, int n) {
  if (n < 1) throw DomainError("lemma2_bound: n must be positive");
  return log2_one_plus_exp2(n * gallager_exponent(rate, joint).value);
}

double lemma2_pointwise_bound(double rho, double rate, const JointPmf& joint, int n) {
  if (n < 1) throw DomainError("lemma2_pointwise_bound: n must be positive");
  return log2_one_plus_exp2(n * (e0_single_letter(rho, joint) + rho * rate));
}

double divergence_bound_via_exponent(double rate, const JointPmf& joint, int n, double rho) {
  require_rho(rho, "divergence_bound_via_exponent");
  if (rho == 0.0) throw DomainError("divergence_bound_via_exponent: rho must be strictly negative");
  return lemma2_bound(rate, joint, n) / (-rho);
}

std::vector<CurveRow> exponent_curve_table(const Pmf& input, const ChannelMatrix& channel, int n, Index m,
                                           const MessageSource& source, std::span<const double> grid) {
  const JointPmf joint = joint_from(input, channel);
  const std::vector<double> block = e0_blocklength(grid, input, channel, n, m, source);
  const double expected = exact_expected_divergence(input, channel, output_marginal(input, channel), n, m, source);
  std::vector<CurveRow> rows;
  for (std::size_t i = 0; i < grid.size(); ++i)
    rows.push_back({grid[i], e0_single_letter(grid[i], joint), block[i], grid[i] * -expected});
  return rows;
}

}  // namespace resolv
