#include "resolv/rate_optimizer.hpp"

#include "resolv/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace resolv {
namespace {

constexpr double kClip = 1e-12;
constexpr double kTieTolerance = 1e-10;

// Lawson-Hanson active-set NNLS: argmin ||A x - b|| subject to x >= 0.
Vector nnls(const Eigen::MatrixXd& a, const Vector& b) {
  const Index cols = a.cols();
  Vector x = Vector::Zero(cols);
  std::vector<bool> passive(static_cast<std::size_t>(cols), false);
  const double tol = 1e-13 * std::max(1.0, a.cwiseAbs().maxCoeff()) * static_cast<double>(cols);

  const auto solve_passive = [&](Vector& z) {
    std::vector<Index> idx;
    for (Index j = 0; j < cols; ++j)
      if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
    Eigen::MatrixXd sub(a.rows(), static_cast<Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) sub.col(static_cast<Index>(k)) = a.col(idx[k]);
    const Vector zs = sub.colPivHouseholderQr().solve(b);
    z.setZero(cols);
    for (std::size_t k = 0; k < idx.size(); ++k) z[idx[k]] = zs[static_cast<Index>(k)];
  };

  for (int outer = 0; outer < 3 * cols + 10; ++outer) {
    const Vector gradient = a.transpose() * (b - a * x);
    Index enter = -1;
    double best = tol;
    for (Index j = 0; j < cols; ++j)
      if (!passive[static_cast<std::size_t>(j)] && gradient[j] > best) {
        best = gradient[j];
        enter = j;
      }
    if (enter < 0) break;
    passive[static_cast<std::size_t>(enter)] = true;

    Vector z;
    for (int inner = 0; inner < 3 * cols + 10; ++inner) {
      solve_passive(z);
      bool all_positive = true;
      for (Index j = 0; j < cols; ++j)
        if (passive[static_cast<std::size_t>(j)] && z[j] <= 0.0) all_positive = false;
      if (all_positive) break;
      double alpha = 1.0;
      for (Index j = 0; j < cols; ++j)
        if (passive[static_cast<std::size_t>(j)] && z[j] <= 0.0) alpha = std::min(alpha, x[j] / (x[j] - z[j]));
      x += alpha * (z - x);
      for (Index j = 0; j < cols; ++j)
        if (passive[static_cast<std::size_t>(j)] && x[j] <= kClip) {
          passive[static_cast<std::size_t>(j)] = false;
          x[j] = 0.0;
        }
    }
    x = z;
  }
  return x.cwiseMax(0.0);
}

Vector normalized(Vector x) {
  for (Index i = 0; i < x.size(); ++i)
    if (x[i] < kClip) x[i] = 0.0;
  const double s = x.sum();
  if (s > 0.0) x /= s;
  return x;
}

double information_at(const Vector& x, const ChannelMatrix& channel) {
  return mutual_information(joint_from(Pmf(x), channel));
}

bool lexicographically_less(const Vector& a, const Vector& b) {
  for (Index i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return false;
}

Index support_size(const Vector& x) { return (x.array() > 0.0).count(); }

// Moves along null-space directions of the active columns, keeping the endpoint with
// the lower mutual information, until the support columns are independent.
Vector descend_to_vertex(Vector x, const ChannelMatrix& channel) {
  const Eigen::MatrixXd a = channel.matrix().transpose();
  for (Index step = 0; step <= x.size(); ++step) {
    std::vector<Index> support;
    for (Index i = 0; i < x.size(); ++i)
      if (x[i] > 0.0) support.push_back(i);
    Eigen::MatrixXd sub(a.rows(), static_cast<Index>(support.size()));
    for (std::size_t k = 0; k < support.size(); ++k) sub.col(static_cast<Index>(k)) = a.col(support[k]);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
    lu.setThreshold(1e-10);
    if (lu.rank() == static_cast<Index>(support.size())) return x;
    const Vector d_sub = lu.kernel().col(0);

    double t_max = std::numeric_limits<double>::infinity();
    double t_min = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < support.size(); ++k) {
      const double d = d_sub[static_cast<Index>(k)];
      const double xi = x[support[k]];
      if (d < 0.0) t_max = std::min(t_max, -xi / d);
      if (d > 0.0) t_min = std::max(t_min, -xi / d);
    }
    Vector d = Vector::Zero(x.size());
    for (std::size_t k = 0; k < support.size(); ++k) d[support[k]] = d_sub[static_cast<Index>(k)];
    Vector forward = normalized((x + t_max * d).cwiseMax(0.0));
    Vector backward = normalized((x + t_min * d).cwiseMax(0.0));
    x = information_at(forward, channel) <= information_at(backward, channel) ? forward : backward;
  }
  return x;
}

}  // namespace

Feasibility feasibility(const ChannelMatrix& channel, const Pmf& target) {
  if (target.size() != channel.output_size()) throw DimensionError("feasibility: target alphabet mismatch");
  const Index nu = channel.input_size();
  const Index nv = channel.output_size();
  // x W = Q_V stacked with the normalization row sum(x) = 1.
  Eigen::MatrixXd a(nv + 1, nu);
  a.topRows(nv) = channel.matrix().transpose();
  a.row(nv).setOnes();
  Vector b(nv + 1);
  b.head(nv) = target.probs();
  b[nv] = 1.0;

  Feasibility out;
  out.witness = nnls(a, b);
  const Vector violation = (channel.matrix().transpose() * out.witness - target.probs()).cwiseAbs();
  out.residual = violation.maxCoeff(&out.worst_output);
  const double mass_error = std::abs(out.witness.sum() - 1.0);
  out.feasible = out.residual <= kFeasibilityTolerance && mass_error <= kFeasibilityTolerance;
  if (out.feasible) out.witness = normalized(out.witness);
  return out;
}

std::vector<Pmf> feasible_vertices(const ChannelMatrix& channel, const Pmf& target) {
  if (target.size() != channel.output_size()) throw DimensionError("feasible_vertices: target alphabet mismatch");
  const Index nu = channel.input_size();
  if (nu > kMaxEnumeratedInputs)
    throw CapExceeded("feasible_vertices: |U| = " + std::to_string(nu) + " exceeds the enumeration limit of " +
                      std::to_string(kMaxEnumeratedInputs));
  const Eigen::MatrixXd a = channel.matrix().transpose();
  Eigen::FullPivLU<Eigen::MatrixXd> full(a);
  full.setThreshold(1e-10);
  const Index rank = full.rank();

  std::vector<Vector> found;
  std::vector<bool> chosen(static_cast<std::size_t>(nu), false);
  std::fill(chosen.begin(), chosen.begin() + rank, true);
  do {
    std::vector<Index> cols;
    for (Index j = 0; j < nu; ++j)
      if (chosen[static_cast<std::size_t>(j)]) cols.push_back(j);
    Eigen::MatrixXd sub(a.rows(), rank);
    for (Index k = 0; k < rank; ++k) sub.col(k) = a.col(cols[static_cast<std::size_t>(k)]);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sub);
    qr.setThreshold(1e-10);
    if (qr.rank() < rank) continue;
    const Vector xs = qr.solve(target.probs());
    if ((sub * xs - target.probs()).cwiseAbs().maxCoeff() > kFeasibilityTolerance) continue;
    if (xs.minCoeff() < -kFeasibilityTolerance) continue;
    Vector x = Vector::Zero(nu);
    for (Index k = 0; k < rank; ++k) x[cols[static_cast<std::size_t>(k)]] = std::max(0.0, xs[k]);
    x = normalized(x);
    const bool duplicate = std::any_of(found.begin(), found.end(), [&](const Vector& y) {
      return (y - x).cwiseAbs().maxCoeff() <= kFeasibilityTolerance;
    });
    if (!duplicate) found.push_back(std::move(x));
  } while (std::prev_permutation(chosen.begin(), chosen.end()));

  std::sort(found.begin(), found.end(), lexicographically_less);
  std::vector<Pmf> out;
  for (auto& x : found) out.emplace_back(std::move(x));
  return out;
}

RateCertificate min_rate(const ChannelMatrix& channel, const Pmf& target) {
  const Feasibility feas = feasibility(channel, target);
  if (!feas.feasible) {
    std::ostringstream msg;
    msg << "target is not reachable through the channel: output letter " << feas.worst_output
        << " misses its target probability by " << feas.residual << " (tolerance " << kFeasibilityTolerance << ")";
    throw InfeasibleTarget(msg.str());
  }

  Vector best;
  double best_info = std::numeric_limits<double>::infinity();
  if (channel.input_size() <= kMaxEnumeratedInputs) {
    // Vertices arrive in lexicographic order; a later vertex must win by more than the tie band.
    for (const Pmf& vertex : feasible_vertices(channel, target)) {
      const double info = information_at(vertex.probs(), channel);
      if (info < best_info - kTieTolerance) {
        best_info = info;
        best = vertex.probs();
      }
    }
  }
  if (best.size() == 0) {
    best = descend_to_vertex(feas.witness, channel);
    best_info = information_at(best, channel);
  }

  RateCertificate cert;
  cert.min_mutual_information = best_info;
  cert.argmin_input = Pmf(best);
  cert.feasible = true;
  cert.support_size = support_size(best);
  return cert;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Achievable:
      return "ACHIEVABLE";
    case Verdict::NotAchievable:
      return "NOT_ACHIEVABLE";
    case Verdict::Boundary:
      return "BOUNDARY";
  }
  return "BOUNDARY";
}

AchievabilityReport achievability_report(const RateCertificate& certificate, double rate, const MessageSource& source,
                                         double band) {
  const double info = certificate.min_mutual_information;
  double effective = rate;
  AchievabilityReport out;
  out.threshold = info;
  if (source.kind() == MessageSource::Kind::BitStream) {
    const double h2 = binary_entropy(source.p());
    effective = rate * h2;
    out.threshold = info / h2;
  }
  out.margin = rate - out.threshold;
  if (effective > info + band)
    out.verdict = Verdict::Achievable;
  else if (effective < info - band)
    out.verdict = Verdict::NotAchievable;
  else
    out.verdict = Verdict::Boundary;
  return out;
}

AchievabilityReport achievability_report(const ChannelMatrix& channel, const Pmf& target, double rate,
                                         const MessageSource& source, double band) {
  return achievability_report(min_rate(channel, target), rate, source, band);
}

double ScalingFamily::operator()(int n) const {
  return kind == Kind::Polynomial ? std::pow(static_cast<double>(n), degree) : std::exp2(gamma * n);
}

std::string ScalingFamily::describe() const {
  std::ostringstream s;
  if (kind == Kind::Polynomial)
    s << "n^" << degree;
  else
    s << "2^(" << gamma << "n)";
  return s.str();
}

DecayFit fit_decay(std::span<const DecayPoint> points, const ScalingFamily& alpha) {
  if (points.size() < 4) throw DomainError("fit_decay: need at least 4 points");
  for (const auto& p : points)
    if (!(p.mean > 0.0))
      throw DomainError("fit_decay: mean divergence " + std::to_string(p.mean) + " at n = " + std::to_string(p.n) +
                        " is not positive; the target is achieved exactly there, so there is no decay to fit");

  std::vector<DecayPoint> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end(), [](const DecayPoint& a, const DecayPoint& b) { return a.n < b.n; });
  const Index k = static_cast<Index>(sorted.size());
  Eigen::MatrixXd design(k, 2);
  Vector y(k);
  for (Index i = 0; i < k; ++i) {
    design(i, 0) = 1.0;
    design(i, 1) = sorted[static_cast<std::size_t>(i)].n;
    y[i] = std::log2(sorted[static_cast<std::size_t>(i)].mean);
  }
  if (sorted.front().n == sorted.back().n) throw DomainError("fit_decay: all points share one block length");
  const Vector coef = design.colPivHouseholderQr().solve(y);

  DecayFit fit;
  fit.beta_hat = -coef[1];
  fit.c_hat = std::exp2(coef[0]);
  fit.residual = std::sqrt((design * coef - y).squaredNorm() / static_cast<double>(k));
  fit.alpha_family = alpha.describe();
  fit.alpha_scaled_decreasing = true;
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (!(alpha(sorted[i].n) * sorted[i].mean < alpha(sorted[i - 1].n) * sorted[i - 1].mean))
      fit.alpha_scaled_decreasing = false;
  fit.claim = fit.residual <= kDecayResidualThreshold;
  return fit;
}

}  // namespace resolv
