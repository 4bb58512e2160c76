#pragma once

// The random coding experiment: codebooks drawn i.i.d. from Q_U^n, messages
// mapped to codewords, codewords sent through a memoryless channel, and the
// divergence of the induced output law from the product target Q_V^n.

#include "resolv/core_prob.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace resolv {

/// Cap on |U|^(nM), the number of codebooks an exact expectation enumerates.
inline constexpr Index kMaxEnumeratedCodebooks = 1'000'000;

/// M words of length n over an alphabet of size k; word w is the encoder output for message w.
class Codebook {
 public:
  /// `symbols` holds the words back to back (M * n entries).
  Codebook(int n, Index alphabet, std::vector<Symbol> symbols);
  Codebook(Index alphabet, const std::vector<std::vector<Symbol>>& words);

  int block_length() const { return n_; }
  Index size() const { return static_cast<Index>(symbols_.size()) / n_; }
  Index alphabet() const { return alphabet_; }
  std::span<const Symbol> word(Index w) const;
  const std::vector<Symbol>& symbols() const { return symbols_; }

  friend bool operator==(const Codebook&, const Codebook&) = default;

 private:
  int n_;
  Index alphabet_;
  std::vector<Symbol> symbols_;
};

/// Distribution of the message index W.
class MessageSource {
 public:
  enum class Kind { Uniform, BitStream };

  /// P(w) = 1/M.
  static MessageSource uniform(Index m);
  /// M = 2^bits messages; message w reads its bits most significant first and
  /// P(w) = p^z (1-p)^(bits-z), z = number of zero bits. Requires p in (0, 1/2].
  static MessageSource bit_stream(int bits, double p);

  Kind kind() const { return kind_; }
  Index size() const { return size_; }
  int bits() const { return bits_; }
  /// P(bit = 0) for bit streams; 1/2 for uniform sources.
  double p() const { return p_; }
  double probability(Index w) const;
  Vector weights() const;
  std::string name() const;

 private:
  MessageSource(Kind kind, Index size, int bits, double p) : kind_(kind), size_(size), bits_(bits), p_(p) {}

  Kind kind_;
  Index size_;
  int bits_;
  double p_;
};

/// R = log2(M) / n, in bits per symbol.
double block_rate(int n, Index m);

Codebook sample_codebook(const Pmf& input, int n, Index m, std::uint64_t seed);

/// P(v^n) = sum_w P(w) prod_i W(v_i | u_i(w)), in SequenceCodec order.
Pmf induced_output_distribution(const Codebook& codebook, const ChannelMatrix& channel, const MessageSource& source);

/// D(P_{V^n} || Q_V^n) in bits; +infinity on a support violation.
double divergence_to_target(const Codebook& codebook, const ChannelMatrix& channel, const MessageSource& source,
                            const Pmf& target);

/// E[D(P_{V^n} || Q_V^n)] over all codebooks, averaged message by message:
/// sum_C P(C) sum_w P(w) sum_v W^n(v|u(w)) log2(P_C(v) / Q_V^n(v)).
double exact_expected_divergence(const Pmf& input, const ChannelMatrix& channel, const Pmf& target, int n, Index m,
                                 const MessageSource& source);

/// I(C; V^n) = H(V^n) - H(V^n | C) with the output law taken from the ensemble itself.
/// `target` must equal output_marginal(input, channel); throws DomainError otherwise.
double codebook_output_mutual_information(const Pmf& input, const ChannelMatrix& channel, const Pmf& target, int n,
                                          Index m, const MessageSource& source);

struct MonteCarloEstimate {
  double mean = 0.0;
  /// Standard error of the mean; NaN for a single trial.
  double std_error = 0.0;
  Index trials = 0;
  std::vector<double> samples;
};

/// Trial t draws its codebook with seed derive_seed(seed, t) and evaluates the
/// induced divergence exactly. Trials run concurrently; aggregation is in trial order.
/// Throws NumericalError if any trial diverges to +infinity.
MonteCarloEstimate monte_carlo_expected_divergence(const Pmf& input, const ChannelMatrix& channel, const Pmf& target,
                                                   int n, Index m, const MessageSource& source, Index trials,
                                                   std::uint64_t seed, bool keep_samples = false);

struct DecompositionBounds {
  double d1_bound = 0.0;
  double d2_bound = 0.0;
  double d3_bound = 0.0;
  /// Rate slack folded into d1_bound: 2 eps H(V) (uniform) or eps (2 H(V) + R H2(p)) (bit stream).
  double delta_eps = 0.0;
};

/// Split of E[log2(P(w) W^n(V|U) / Q_V^n(V) + 1)], the upper bound on E[D], into the
/// typical (d1), atypical (d2) and atypical-message (d3) parts. The terms bound E[D]
/// from above; they never sum to it.
struct DivergenceDecomposition {
  bool exact = false;
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;
  double total = 0.0;
  DecompositionBounds bounds;
};

DecompositionBounds decomposition_bounds(const JointPmf& joint, int n, Index m, double epsilon,
                                         const MessageSource& source);

/// Exact terms by enumerating (u^n, v^n) pairs when |U|^n |V|^n <= kMaxDenseStates;
/// otherwise `exact` is false and only the bounds are filled.
DivergenceDecomposition decompose_divergence_bound(const JointPmf& joint, int n, Index m, double epsilon,
                                                   const MessageSource& source);

/// I(V;U) for uniform sources, I(V;U) / H2(p) for bit streams (bits per symbol).
double achievability_threshold(const JointPmf& joint, const MessageSource& source);

}  // namespace resolv
