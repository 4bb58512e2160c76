#pragma once

#include "resolv/core_prob.hpp"

#include <cstdint>
#include <random>

namespace resolv {

/// Version tag of the generator contract below. Bump it if any derivation changes.
inline constexpr const char* kRngVersion = "resolv-rng-v1";

/// SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x);

/// Sub-seed for stream `index` under `master`:
/// splitmix64(splitmix64(master) ^ (index + 1) * 0x9E3779B97F4A7C15).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// std::mt19937_64 seeded with splitmix64(seed). Uniforms use the top 53 bits;
/// categorical draws use inverse-CDF search so results are platform independent.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  static Rng for_stream(std::uint64_t master, std::uint64_t index) { return Rng(derive_seed(master, index)); }

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1).
  double uniform01();
  /// One draw from `p`; never returns a zero-probability letter.
  Symbol sample(const Pmf& p);

 private:
  std::mt19937_64 engine_;
};

}  // namespace resolv
