#pragma once

// Finite-alphabet probability primitives. All information measures are in bits.

#include <Eigen/Dense>

#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace resolv {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Symbol = int;

/// Accepted deviation of the total mass from 1 before renormalizing.
inline constexpr double kSimplexTolerance = 1e-9;

/// Largest number of states a dense sequence distribution may hold (2^24).
inline constexpr Index kMaxDenseStates = Index{1} << 24;

/// Probability vector over {0, ..., k-1}. Immutable after construction.
class Pmf {
 public:
  /// Validates non-negativity and unit mass within kSimplexTolerance, then renormalizes.
  explicit Pmf(Vector probs);
  Pmf(std::initializer_list<double> probs);

  static Pmf uniform(Index k);
  static Pmf point_mass(Index k, Index at);

  Index size() const { return probs_.size(); }
  double operator[](Index i) const { return probs_[i]; }
  const Vector& probs() const { return probs_; }

  std::vector<Index> support() const;
  /// Smallest non-zero probability.
  double min_on_support() const;

  friend bool operator==(const Pmf& a, const Pmf& b) { return a.probs_ == b.probs_; }

 private:
  Vector probs_;
};

/// Row-stochastic conditional distribution W(v|u); row u is the output law for input u.
class ChannelMatrix {
 public:
  explicit ChannelMatrix(Matrix rows);
  explicit ChannelMatrix(const std::vector<Pmf>& rows);

  static ChannelMatrix identity(Index k);
  /// Binary symmetric channel with crossover probability p.
  static ChannelMatrix bsc(double p);
  /// Every input maps to the same output law.
  static ChannelMatrix constant(Index inputs, const Pmf& row);

  Index input_size() const { return rows_.rows(); }
  Index output_size() const { return rows_.cols(); }
  double operator()(Index u, Index v) const { return rows_(u, v); }
  Pmf row(Index u) const;
  const Matrix& matrix() const { return rows_; }

  friend bool operator==(const ChannelMatrix& a, const ChannelMatrix& b) { return a.rows_ == b.rows_; }

 private:
  Matrix rows_;
};

/// Joint distribution over U x V, stored as a |U| x |V| table.
class JointPmf {
 public:
  explicit JointPmf(Matrix table);

  Index input_size() const { return table_.rows(); }
  Index output_size() const { return table_.cols(); }
  double operator()(Index u, Index v) const { return table_(u, v); }
  const Matrix& table() const { return table_; }

  Pmf input_marginal() const;
  Pmf output_marginal() const;
  /// Q(v|u); rows of zero-mass inputs are set to the output marginal.
  ChannelMatrix conditional() const;
  /// The table flattened row-major as a Pmf over the product alphabet (index u*|V| + v).
  Pmf flattened() const;

  friend bool operator==(const JointPmf& a, const JointPmf& b) { return a.table_ == b.table_; }

 private:
  Matrix table_;
};

double entropy(const Pmf& p);
/// H2(p) for p in (0, 1/2]; throws DomainError elsewhere.
double binary_entropy(double p);
/// H(V|U) of a joint table.
double conditional_entropy(const JointPmf& joint);
double mutual_information(const JointPmf& joint);
/// D(P||Q) in bits; +infinity when supp(P) is not contained in supp(Q).
double kl_divergence(const Pmf& p, const Pmf& q);
/// Un-halved total variation: sum |P - Q|, in [0, 2].
double total_variation(const Pmf& p, const Pmf& q);

Pmf output_marginal(const Pmf& input, const ChannelMatrix& channel);
JointPmf joint_from(const Pmf& input, const ChannelMatrix& channel);
/// P^n over the length-n sequence alphabet in SequenceCodec order.
Pmf product_extension(const Pmf& p, int n);

/// k^n, or throws CapExceeded when it exceeds `cap`.
Index checked_power(Index k, int n, Index cap = kMaxDenseStates);

/// Lexicographic sequence indexing, symbol 0 most significant:
/// index(x) = sum_i x_i k^(n-1-i). Shared by every module.
class SequenceCodec {
 public:
  SequenceCodec(Index alphabet, int length);

  Index alphabet() const { return alphabet_; }
  int length() const { return length_; }
  Index size() const { return size_; }

  Index encode(std::span<const Symbol> x) const;
  std::vector<Symbol> decode(Index index) const;
  void decode_into(Index index, std::span<Symbol> out) const;

 private:
  Index alphabet_;
  int length_;
  Index size_;
};

/// Distribution of the length-n channel output given an input word: the Kronecker
/// product W(.|u_1) x ... x W(.|u_n), in SequenceCodec order.
Vector sequence_likelihood(std::span<const Symbol> word, const ChannelMatrix& channel);

}  // namespace resolv
