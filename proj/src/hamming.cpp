#include "resolv/hamming.hpp"

#include <algorithm>
#include <cmath>

namespace resolv::hamming {

std::vector<std::uint32_t> codewords() {
  std::vector<std::uint32_t> out;
  for (std::uint32_t data = 0; data < 16; ++data) {
    const auto bit = [&](int i) { return (data >> i) & 1u; };
    const std::uint32_t p0 = bit(0) ^ bit(1) ^ bit(3);
    const std::uint32_t p1 = bit(0) ^ bit(2) ^ bit(3);
    const std::uint32_t p2 = bit(1) ^ bit(2) ^ bit(3);
    out.push_back(data | (p0 << 4) | (p1 << 5) | (p2 << 6));
  }
  return out;
}

ChannelMatrix ball_channel() {
  Matrix rows = Matrix::Zero(kTuples, kTuples);
  for (Index u = 0; u < kTuples; ++u) {
    rows(u, u) = 1.0 / 8.0;
    for (int i = 0; i < kTupleBits; ++i) rows(u, u ^ (Index{1} << i)) = 1.0 / 8.0;
  }
  return ChannelMatrix(std::move(rows));
}

Codebook codebook() {
  std::vector<Symbol> symbols;
  for (auto c : codewords()) symbols.push_back(static_cast<Symbol>(c));
  return Codebook(1, kTuples, std::move(symbols));
}

Pmf codeword_input() {
  Vector probs = Vector::Zero(kTuples);
  for (auto c : codewords()) probs[c] = 1.0 / 16.0;
  return Pmf(std::move(probs));
}

Report showcase() {
  const ChannelMatrix channel = ball_channel();
  const Codebook book = codebook();
  const MessageSource source = MessageSource::uniform(book.size());
  const Pmf induced = induced_output_distribution(book, channel, source);
  const Pmf uniform = Pmf::uniform(kTuples);

  Report r;
  r.codewords = book.size();
  r.outputs = induced.size();
  r.min_probability = induced.probs().minCoeff();
  r.max_probability = induced.probs().maxCoeff();
  r.max_deviation = (induced.probs() - uniform.probs()).cwiseAbs().maxCoeff();
  r.divergence_bits = kl_divergence(induced, uniform);
  r.mutual_information_bits = mutual_information(joint_from(codeword_input(), channel));
  return r;
}

}  // namespace resolv::hamming
