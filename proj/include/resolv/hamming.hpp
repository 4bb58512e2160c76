#pragma once

// The (7,4) Hamming code through the radius-1 ball channel on 7-bit tuples.
// Each 7-tuple is one letter of a 128-letter alphabet; bit i of the letter is
// coordinate i of the tuple.

#include "resolv/core_prob.hpp"
#include "resolv/engine.hpp"

#include <cstdint>
#include <vector>

namespace resolv::hamming {

inline constexpr int kTupleBits = 7;
inline constexpr Index kTuples = 128;

/// The 16 codewords, systematic form: data bits 0-3, parity bits 4-6.
std::vector<std::uint32_t> codewords();

/// Every input maps with probability 1/8 to itself or to one of its 7 single-bit flips.
ChannelMatrix ball_channel();

/// Block length 1 over the 128-letter alphabet, one word per codeword.
Codebook codebook();

/// Uniform input over the 16 codewords.
Pmf codeword_input();

struct Report {
  Index codewords = 0;
  Index outputs = 0;
  double min_probability = 0.0;
  double max_probability = 0.0;
  /// max_v |P(v) - 1/128|
  double max_deviation = 0.0;
  double divergence_bits = 0.0;
  double mutual_information_bits = 0.0;
};

Report showcase();

}  // namespace resolv::hamming
