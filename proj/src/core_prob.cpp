#include "resolv/core_prob.hpp"

#include "resolv/error.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace resolv {
namespace {

constexpr double kIdempotentSlack = 1e-14;

Vector validated_simplex(Vector probs, const char* what) {
  if (probs.size() == 0) throw DimensionError(std::string(what) + ": empty alphabet");
  for (Index i = 0; i < probs.size(); ++i) {
    if (!std::isfinite(probs[i]) || probs[i] < 0.0)
      throw DomainError(std::string(what) + ": entry " + std::to_string(i) + " is negative or not finite");
  }
  const double total = probs.sum();
  if (std::abs(total - 1.0) > kSimplexTolerance)
    throw DomainError(std::string(what) + ": total mass " + std::to_string(total) + " is not 1");
  // Sums already within a few ulps of 1 are kept verbatim so that normalization is idempotent.
  if (std::abs(total - 1.0) > kIdempotentSlack) probs /= total;
  return probs;
}

// p * log2(p / q) with p > 0, q > 0, accumulated as a difference of logs.
double divergence_term(double p, double q) { return p * (std::log2(p) - std::log2(q)); }

}  // namespace

Pmf::Pmf(Vector probs) : probs_(validated_simplex(std::move(probs), "Pmf")) {}

Pmf::Pmf(std::initializer_list<double> probs)
    : Pmf(Vector(Eigen::Map<const Vector>(probs.begin(), static_cast<Index>(probs.size())))) {}

Pmf Pmf::uniform(Index k) {
  if (k <= 0) throw DimensionError("Pmf::uniform: alphabet must be non-empty");
  return Pmf(Vector::Constant(k, 1.0 / static_cast<double>(k)));
}

Pmf Pmf::point_mass(Index k, Index at) {
  if (at < 0 || at >= k) throw DimensionError("Pmf::point_mass: index outside alphabet");
  Vector v = Vector::Zero(k);
  v[at] = 1.0;
  return Pmf(std::move(v));
}

std::vector<Index> Pmf::support() const {
  std::vector<Index> out;
  for (Index i = 0; i < size(); ++i)
    if (probs_[i] > 0.0) out.push_back(i);
  return out;
}

double Pmf::min_on_support() const {
  double m = 1.0;
  for (Index i = 0; i < size(); ++i)
    if (probs_[i] > 0.0 && probs_[i] < m) m = probs_[i];
  return m;
}

ChannelMatrix::ChannelMatrix(Matrix rows) : rows_(std::move(rows)) {
  if (rows_.rows() == 0 || rows_.cols() == 0) throw DimensionError("ChannelMatrix: empty alphabet");
  for (Index u = 0; u < rows_.rows(); ++u) {
    try {
      rows_.row(u) = Pmf(Vector(rows_.row(u).transpose())).probs().transpose();
    } catch (const DomainError& e) {
      throw DomainError("ChannelMatrix row " + std::to_string(u) + ": " + e.what());
    }
  }
}

ChannelMatrix::ChannelMatrix(const std::vector<Pmf>& rows) {
  if (rows.empty()) throw DimensionError("ChannelMatrix: no rows");
  rows_.resize(static_cast<Index>(rows.size()), rows.front().size());
  for (std::size_t u = 0; u < rows.size(); ++u) {
    if (rows[u].size() != rows_.cols()) throw DimensionError("ChannelMatrix: ragged rows");
    rows_.row(static_cast<Index>(u)) = rows[u].probs().transpose();
  }
}

ChannelMatrix ChannelMatrix::identity(Index k) { return ChannelMatrix(Matrix(Matrix::Identity(k, k))); }

ChannelMatrix ChannelMatrix::bsc(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("bsc: crossover outside [0, 1]");
  Matrix m(2, 2);
  m << 1.0 - p, p, p, 1.0 - p;
  return ChannelMatrix(std::move(m));
}

ChannelMatrix ChannelMatrix::constant(Index inputs, const Pmf& row) {
  Matrix m(inputs, row.size());
  for (Index u = 0; u < inputs; ++u) m.row(u) = row.probs().transpose();
  return ChannelMatrix(std::move(m));
}

Pmf ChannelMatrix::row(Index u) const { return Pmf(Vector(rows_.row(u).transpose())); }

JointPmf::JointPmf(Matrix table) : table_(std::move(table)) {
  if (table_.size() == 0) throw DimensionError("JointPmf: empty table");
  Vector flat = Eigen::Map<const Vector>(table_.data(), table_.size());
  flat = validated_simplex(std::move(flat), "JointPmf");
  table_ = Eigen::Map<const Matrix>(flat.data(), table_.rows(), table_.cols());
}

Pmf JointPmf::input_marginal() const { return Pmf(Vector(table_.rowwise().sum())); }

Pmf JointPmf::output_marginal() const { return Pmf(Vector(table_.colwise().sum().transpose())); }

ChannelMatrix JointPmf::conditional() const {
  const Vector qu = table_.rowwise().sum();
  const Vector qv = table_.colwise().sum().transpose();
  Matrix rows(table_.rows(), table_.cols());
  for (Index u = 0; u < rows.rows(); ++u) {
    if (qu[u] > 0.0)
      rows.row(u) = table_.row(u) / qu[u];
    else
      rows.row(u) = qv.transpose();
  }
  return ChannelMatrix(std::move(rows));
}

Pmf JointPmf::flattened() const { return Pmf(Vector(Eigen::Map<const Vector>(table_.data(), table_.size()))); }

double entropy(const Pmf& p) {
  double h = 0.0;
  for (Index i = 0; i < p.size(); ++i)
    if (p[i] > 0.0) h -= p[i] * std::log2(p[i]);
  return h;
}

double binary_entropy(double p) {
  if (!(p > 0.0 && p <= 0.5)) throw DomainError("binary_entropy: p must lie in (0, 1/2]");
  if (p == 0.5) return 1.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double conditional_entropy(const JointPmf& joint) {
  const Vector qu = joint.table().rowwise().sum();
  double h = 0.0;
  for (Index u = 0; u < joint.input_size(); ++u)
    for (Index v = 0; v < joint.output_size(); ++v) {
      const double j = joint(u, v);
      if (j > 0.0) h -= divergence_term(j, qu[u]);
    }
  return h;
}

double mutual_information(const JointPmf& joint) {
  const Vector qu = joint.table().rowwise().sum();
  const Vector qv = joint.table().colwise().sum().transpose();
  double i = 0.0;
  for (Index u = 0; u < joint.input_size(); ++u)
    for (Index v = 0; v < joint.output_size(); ++v) {
      const double j = joint(u, v);
      if (j > 0.0) i += j * (std::log2(j) - std::log2(qu[u]) - std::log2(qv[v]));
    }
  return i > 0.0 ? i : 0.0;
}

double kl_divergence(const Pmf& p, const Pmf& q) {
  if (p.size() != q.size()) throw DimensionError("kl_divergence: alphabet sizes differ");
  double d = 0.0;
  for (Index i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) return std::numeric_limits<double>::infinity();
    d += divergence_term(p[i], q[i]);
  }
  return d > 0.0 ? d : 0.0;
}

double total_variation(const Pmf& p, const Pmf& q) {
  if (p.size() != q.size()) throw DimensionError("total_variation: alphabet sizes differ");
  return (p.probs() - q.probs()).cwiseAbs().sum();
}

Pmf output_marginal(const Pmf& input, const ChannelMatrix& channel) {
  if (input.size() != channel.input_size()) throw DimensionError("output_marginal: input alphabet mismatch");
  return Pmf(Vector(channel.matrix().transpose() * input.probs()));
}

JointPmf joint_from(const Pmf& input, const ChannelMatrix& channel) {
  if (input.size() != channel.input_size()) throw DimensionError("joint_from: input alphabet mismatch");
  return JointPmf(Matrix(input.probs().asDiagonal() * channel.matrix()));
}

Index checked_power(Index k, int n, Index cap) {
  if (n < 0) throw DomainError("checked_power: negative exponent");
  Index out = 1;
  for (int i = 0; i < n; ++i) {
    if (out > cap / k)
      throw CapExceeded(std::to_string(k) + "^" + std::to_string(n) + " states exceeds the cap of " +
                        std::to_string(cap));
    out *= k;
  }
  if (out > cap)
    throw CapExceeded(std::to_string(k) + "^" + std::to_string(n) + " states exceeds the cap of " +
                      std::to_string(cap));
  return out;
}

Pmf product_extension(const Pmf& p, int n) {
  if (n < 1) throw DomainError("product_extension: n must be positive");
  const Index k = p.size();
  checked_power(k, n);
  Vector out = p.probs();
  for (int step = 1; step < n; ++step) {
    Vector next(out.size() * k);
    for (Index i = 0; i < out.size(); ++i) next.segment(i * k, k) = out[i] * p.probs();
    out.swap(next);
  }
  return Pmf(std::move(out));
}

SequenceCodec::SequenceCodec(Index alphabet, int length)
    : alphabet_(alphabet), length_(length), size_(checked_power(alphabet, length)) {
  if (alphabet < 1) throw DimensionError("SequenceCodec: empty alphabet");
}

Index SequenceCodec::encode(std::span<const Symbol> x) const {
  if (static_cast<int>(x.size()) != length_) throw DimensionError("SequenceCodec::encode: length mismatch");
  Index index = 0;
  for (Symbol s : x) {
    if (s < 0 || s >= alphabet_) throw DimensionError("SequenceCodec::encode: symbol outside alphabet");
    index = index * alphabet_ + s;
  }
  return index;
}

std::vector<Symbol> SequenceCodec::decode(Index index) const {
  std::vector<Symbol> out(static_cast<std::size_t>(length_));
  decode_into(index, out);
  return out;
}

void SequenceCodec::decode_into(Index index, std::span<Symbol> out) const {
  if (index < 0 || index >= size_) throw DimensionError("SequenceCodec::decode: index out of range");
  for (int i = length_ - 1; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = static_cast<Symbol>(index % alphabet_);
    index /= alphabet_;
  }
}

Vector sequence_likelihood(std::span<const Symbol> word, const ChannelMatrix& channel) {
  const Index k = channel.output_size();
  checked_power(k, static_cast<int>(word.size()));
  Vector out = Vector::Ones(1);
  for (Symbol u : word) {
    if (u < 0 || u >= channel.input_size()) throw DimensionError("sequence_likelihood: symbol outside alphabet");
    Vector next(out.size() * k);
    const auto row = channel.matrix().row(u);
    for (Index i = 0; i < out.size(); ++i) next.segment(i * k, k) = out[i] * row.transpose();
    out.swap(next);
  }
  return out;
}

}  // namespace resolv
