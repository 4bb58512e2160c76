#pragma once

// Experiment configuration and the command implementations behind the CLI.
//
// Config schema (JSON):
//   channel  {"rows": [[...], ...]}
//   input    {"probs": [...]} | "optimize"     (optimize: argmin of the rate certificate)
//   target   {"probs": [...]} | "induced"      (induced: output marginal of the input)
//   source   {"kind": "uniform"} | {"kind": "bitstream", "p": 0.11}
//   sweep    {"n": [...], "M": [...]} | {"n": [...], "R": [...]}
//   epsilon  typicality slack (default 0.1)
//   trials   Monte Carlo trials (default 1000)
//   seed     optional unsigned 64-bit seed
//   rho      rho for the exponent-based divergence bound (default -0.5)

#include "resolv/core_prob.hpp"
#include "resolv/engine.hpp"
#include "resolv/hamming.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace resolv {

struct SourceSpec {
  MessageSource::Kind kind = MessageSource::Kind::Uniform;
  double p = 0.5;

  friend bool operator==(const SourceSpec&, const SourceSpec&) = default;
};

struct ExperimentConfig {
  ChannelMatrix channel = ChannelMatrix::identity(2);
  /// nullopt means "optimize".
  std::optional<Pmf> input;
  /// nullopt means "induced".
  std::optional<Pmf> target;
  SourceSpec source;
  std::vector<int> n_values;
  std::vector<Index> m_values;
  std::vector<double> r_values;
  double epsilon = 0.1;
  Index trials = 1000;
  std::optional<std::uint64_t> seed;
  double rho = -0.5;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Throws ConfigError with a JSON-pointer style location on any violation.
ExperimentConfig parse_config(const nlohmann::json& j);
/// Parse errors report the line and column of the offending byte.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);
nlohmann::json to_json(const ExperimentConfig& config);

/// Seed precedence: explicit override, then the config's seed, then the
/// RESOLV_SEED environment variable, then 0.
std::uint64_t resolve_seed(const ExperimentConfig& config, std::optional<std::uint64_t> override_seed);

struct SweepPoint {
  int n;
  Index m;
  MessageSource source;
};

/// n-major expansion of the sweep. R sweeps require n R to be an integer (M = 2^(nR));
/// bit-stream sources require M to be a power of two.
std::vector<SweepPoint> expand_sweep(const ExperimentConfig& config);

/// The concrete input, target, and joint a config denotes.
struct ResolvedInstance {
  ChannelMatrix channel;
  Pmf input;
  Pmf target;
  JointPmf joint;
};

ResolvedInstance resolve_instance(const ExperimentConfig& config);

std::string cmd_bounds(const ExperimentConfig& config);
std::string cmd_simulate(const ExperimentConfig& config, std::uint64_t seed);
std::string cmd_exact(const ExperimentConfig& config);

/// Exponent curves for every sweep point: (n, M, curve CSV).
struct CurveExport {
  int n;
  Index m;
  std::string csv;
};
std::vector<CurveExport> exact_curves(const ExperimentConfig& config, int grid_points = 21);

nlohmann::json to_json(const hamming::Report& report);
nlohmann::json cmd_hamming();
nlohmann::json cmd_optimize(const ExperimentConfig& config);

}  // namespace resolv
