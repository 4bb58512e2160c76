#pragma once

// Exhaustive enumeration of the random-codebook ensemble. Internal to the library.

#include "resolv/core_prob.hpp"
#include "resolv/engine.hpp"

#include <span>
#include <vector>

namespace resolv::detail {

class EnsembleEnumerator {
 public:
  EnsembleEnumerator(const Pmf& input, const ChannelMatrix& channel, int n, const MessageSource& source);

  Index input_states() const { return likelihood_.rows(); }
  Index output_states() const { return likelihood_.cols(); }
  /// Row s is W^n(. | u^n = s).
  const Matrix& likelihood() const { return likelihood_; }
  const Vector& message_weights() const { return weights_; }

  /// visit(P(C), word indices of C, P_{V^n | C}) for every codebook C of positive probability.
  template <typename Visitor>
  void for_each(Visitor&& visit) const;

 private:
  Matrix likelihood_;
  Vector input_probs_;
  std::vector<Index> positive_;
  Vector weights_;
};

template <typename Visitor>
void EnsembleEnumerator::for_each(Visitor&& visit) const {
  const Index m = weights_.size();
  const std::size_t base = positive_.size();
  std::vector<std::size_t> digits(static_cast<std::size_t>(m), 0);
  std::vector<Index> words(static_cast<std::size_t>(m));
  Vector induced(output_states());
  while (true) {
    double prob = 1.0;
    induced.setZero();
    for (Index w = 0; w < m; ++w) {
      const Index s = positive_[digits[static_cast<std::size_t>(w)]];
      words[static_cast<std::size_t>(w)] = s;
      prob *= input_probs_[s];
      induced.noalias() += weights_[w] * likelihood_.row(s).transpose();
    }
    visit(prob, std::span<const Index>(words), static_cast<const Vector&>(induced));

    // Odometer, last message fastest.
    Index pos = m - 1;
    while (pos >= 0) {
      auto& d = digits[static_cast<std::size_t>(pos)];
      if (++d < base) break;
      d = 0;
      --pos;
    }
    if (pos < 0) return;
  }
}

}  // namespace resolv::detail
