#include "resolv/workbench.hpp"

#include "resolv/error.hpp"
#include "resolv/gallager.hpp"
#include "resolv/io.hpp"
#include "resolv/rate_optimizer.hpp"

#include <bit>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace resolv {
namespace {

constexpr double kIntegerBits = 1e-9;

template <typename T>
std::vector<T> integer_list(const nlohmann::json& j, const std::string& where, T min_value) {
  if (!j.is_array() || j.empty()) throw ConfigError(where + ": expected a non-empty array of integers");
  std::vector<T> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number_integer()) throw ConfigError(where + "/" + std::to_string(i) + ": expected an integer");
    const auto v = j[i].get<long long>();
    if (v < static_cast<long long>(min_value))
      throw ConfigError(where + "/" + std::to_string(i) + ": must be at least " + std::to_string(min_value));
    out.push_back(static_cast<T>(v));
  }
  return out;
}

double number_field(const nlohmann::json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw ConfigError(std::string("/") + key + ": expected a number");
  return j.at(key).get<double>();
}

template <typename Fn>
auto located(const std::string& where, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

std::string source_p_field(const MessageSource& s) {
  return s.kind() == MessageSource::Kind::BitStream ? format_number(s.p()) : std::string();
}

bool rates_for_exponent(const MessageSource& s) { return s.kind() == MessageSource::Kind::Uniform; }

}  // namespace

// --- Config ---------------------------------------------------------------

ExperimentConfig parse_config(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("/: config must be a JSON object");
  ExperimentConfig c;
  if (!j.contains("channel")) throw ConfigError("/channel: missing");
  c.channel = located("/channel", [&] { return channel_from_json(j.at("channel")); });

  const auto& input = j.contains("input") ? j.at("input") : nlohmann::json("optimize");
  if (input.is_string()) {
    if (input.get<std::string>() != "optimize") throw ConfigError("/input: the only string value is \"optimize\"");
  } else {
    c.input = located("/input", [&] { return pmf_from_json(input); });
    if (c.input->size() != c.channel.input_size())
      throw ConfigError("/input: " + std::to_string(c.input->size()) + " letters but the channel has " +
                        std::to_string(c.channel.input_size()) + " inputs");
  }

  const auto& target = j.contains("target") ? j.at("target") : nlohmann::json("induced");
  if (target.is_string()) {
    if (target.get<std::string>() != "induced") throw ConfigError("/target: the only string value is \"induced\"");
  } else {
    c.target = located("/target", [&] { return pmf_from_json(target); });
    if (c.target->size() != c.channel.output_size())
      throw ConfigError("/target: " + std::to_string(c.target->size()) + " letters but the channel has " +
                        std::to_string(c.channel.output_size()) + " outputs");
  }
  if (!c.input && !c.target) throw ConfigError("/input: \"optimize\" needs an explicit target distribution");

  if (j.contains("source")) {
    const auto& s = j.at("source");
    if (!s.is_object() || !s.contains("kind") || !s.at("kind").is_string())
      throw ConfigError("/source: expected {\"kind\": \"uniform\" | \"bitstream\", ...}");
    const auto kind = s.at("kind").get<std::string>();
    if (kind == "uniform") {
      c.source = {MessageSource::Kind::Uniform, 0.5};
    } else if (kind == "bitstream") {
      if (!s.contains("p") || !s.at("p").is_number()) throw ConfigError("/source/p: bit streams need a number p");
      c.source = {MessageSource::Kind::BitStream, s.at("p").get<double>()};
      if (!(c.source.p > 0.0 && c.source.p <= 0.5)) throw ConfigError("/source/p: must lie in (0, 1/2]");
    } else {
      throw ConfigError("/source/kind: unknown source \"" + kind + "\"");
    }
  }

  if (!j.contains("sweep") || !j.at("sweep").is_object()) throw ConfigError("/sweep: missing or not an object");
  const auto& sweep = j.at("sweep");
  if (!sweep.contains("n")) throw ConfigError("/sweep/n: missing");
  c.n_values = integer_list<int>(sweep.at("n"), "/sweep/n", 1);
  if (sweep.contains("M") == sweep.contains("R")) throw ConfigError("/sweep: give exactly one of \"M\" or \"R\"");
  if (sweep.contains("M")) {
    c.m_values = integer_list<Index>(sweep.at("M"), "/sweep/M", 1);
  } else {
    const auto& r = sweep.at("R");
    if (!r.is_array() || r.empty()) throw ConfigError("/sweep/R: expected a non-empty array of rates");
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (!r[i].is_number() || r[i].get<double>() < 0.0)
        throw ConfigError("/sweep/R/" + std::to_string(i) + ": expected a non-negative number");
      c.r_values.push_back(r[i].get<double>());
    }
  }

  c.epsilon = number_field(j, "epsilon", c.epsilon);
  if (!(c.epsilon >= 0.0)) throw ConfigError("/epsilon: must be non-negative");
  if (j.contains("trials")) c.trials = integer_list<Index>(nlohmann::json::array({j.at("trials")}), "/trials", 1)[0];
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw ConfigError("/seed: expected an unsigned 64-bit integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  c.rho = number_field(j, "rho", c.rho);
  if (!(c.rho >= kRhoMin && c.rho < 0.0)) throw ConfigError("/rho: must lie in [-1/2, 0)");

  expand_sweep(c);  // validates rate/bit-count consistency
  return c;
}

ExperimentConfig parse_config_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // the library message carries the line and column
    throw ConfigError(e.what());
  }
  return parse_config(j);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config_text(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["channel"] = to_json(c.channel);
  j["input"] = c.input ? to_json(*c.input) : nlohmann::json("optimize");
  j["target"] = c.target ? to_json(*c.target) : nlohmann::json("induced");
  if (c.source.kind == MessageSource::Kind::Uniform)
    j["source"] = {{"kind", "uniform"}};
  else
    j["source"] = {{"kind", "bitstream"}, {"p", c.source.p}};
  j["sweep"]["n"] = c.n_values;
  if (!c.m_values.empty())
    j["sweep"]["M"] = c.m_values;
  else
    j["sweep"]["R"] = c.r_values;
  j["epsilon"] = c.epsilon;
  j["trials"] = c.trials;
  if (c.seed) j["seed"] = *c.seed;
  j["rho"] = c.rho;
  return j;
}

std::uint64_t resolve_seed(const ExperimentConfig& config, std::optional<std::uint64_t> override_seed) {
  if (override_seed) return *override_seed;
  if (config.seed) return *config.seed;
  if (const char* env = std::getenv("RESOLV_SEED"); env && *env) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0') return v;
    throw ConfigError(std::string("RESOLV_SEED: not an unsigned integer: ") + env);
  }
  return 0;
}

std::vector<SweepPoint> expand_sweep(const ExperimentConfig& c) {
  std::vector<SweepPoint> out;
  const bool bits = c.source.kind == MessageSource::Kind::BitStream;
  for (int n : c.n_values) {
    if (!c.m_values.empty()) {
      for (Index m : c.m_values) {
        if (!bits) {
          out.push_back({n, m, MessageSource::uniform(m)});
          continue;
        }
        if ((m & (m - 1)) != 0)
          throw ConfigError("/sweep/M: bit-stream sources need M to be a power of two, got " + std::to_string(m));
        const int b = std::countr_zero(static_cast<std::uint64_t>(m));
        if (b == 0) throw ConfigError("/sweep/M: bit-stream sources need at least one bit (M >= 2)");
        out.push_back({n, m, MessageSource::bit_stream(b, c.source.p)});
      }
    } else {
      for (double r : c.r_values) {
        const double nr = n * r;
        const double rounded = std::round(nr);
        if (std::abs(nr - rounded) > kIntegerBits)
          throw ConfigError("/sweep/R: n R = " + format_number(nr) + " is not an integer number of bits at n = " +
                            std::to_string(n));
        if (rounded > 40) throw ConfigError("/sweep/R: n R above 40 bits is not supported");
        const int b = static_cast<int>(rounded);
        const Index m = Index{1} << b;
        if (bits) {
          if (b == 0) throw ConfigError("/sweep/R: bit-stream sources need at least one bit");
          out.push_back({n, m, MessageSource::bit_stream(b, c.source.p)});
        } else {
          out.push_back({n, m, MessageSource::uniform(m)});
        }
      }
    }
  }
  return out;
}

ResolvedInstance resolve_instance(const ExperimentConfig& c) {
  Pmf input = c.input ? *c.input : min_rate(c.channel, *c.target).argmin_input;
  Pmf target = c.target ? *c.target : output_marginal(input, c.channel);
  JointPmf joint = joint_from(input, c.channel);
  return {c.channel, std::move(input), std::move(target), std::move(joint)};
}

// --- Commands -------------------------------------------------------------

std::string cmd_bounds(const ExperimentConfig& config) {
  const auto inst = resolve_instance(config);
  const double info = mutual_information(inst.joint);
  const double h_v = entropy(inst.joint.output_marginal());
  CsvWriter csv({"n", "M", "R", "source", "p", "threshold", "I", "H_V", "E_G", "rho_star", "d1_bound", "d2_bound",
                 "d3_bound", "delta_eps", "lemma2_bound", "rho", "exponent_bound"});
  for (const auto& pt : expand_sweep(config)) {
    const double rate = block_rate(pt.n, pt.m);
    const auto b = decomposition_bounds(inst.joint, pt.n, pt.m, config.epsilon, pt.source);
    csv.field(static_cast<long long>(pt.n)).field(static_cast<long long>(pt.m)).field(rate);
    csv.field(pt.source.name()).field(source_p_field(pt.source));
    csv.field(achievability_threshold(inst.joint, pt.source)).field(info).field(h_v);
    if (rates_for_exponent(pt.source)) {
      const auto eg = gallager_exponent(rate, inst.joint);
      csv.field(eg.value).field(eg.rho_star);
    } else {
      csv.field(std::nan("")).field(std::nan(""));
    }
    csv.field(b.d1_bound).field(b.d2_bound).field(b.d3_bound).field(b.delta_eps);
    if (rates_for_exponent(pt.source)) {
      csv.field(lemma2_bound(rate, inst.joint, pt.n))
          .field(config.rho)
          .field(divergence_bound_via_exponent(rate, inst.joint, pt.n, config.rho));
    } else {
      csv.field(std::nan("")).field(config.rho).field(std::nan(""));
    }
    csv.end_row();
  }
  return csv.str();
}

std::string cmd_simulate(const ExperimentConfig& config, std::uint64_t seed) {
  const auto inst = resolve_instance(config);
  const auto points = expand_sweep(config);
  for (const auto& pt : points) {
    try {
      checked_power(inst.channel.output_size(), pt.n);
    } catch (const CapExceeded&) {
      int limit = 0;
      Index states = 1;
      while (states <= kMaxDenseStates / inst.channel.output_size()) {
        states *= inst.channel.output_size();
        ++limit;
      }
      throw CapExceeded("simulate: n = " + std::to_string(pt.n) + " needs " +
                        std::to_string(inst.channel.output_size()) + "^" + std::to_string(pt.n) +
                        " output sequences per codebook; the dense cap of 2^24 states allows n <= " +
                        std::to_string(limit) + " for this channel");
    }
  }
  CsvWriter csv({"n", "M", "R", "source", "p", "trials", "mean_D", "stderr_D", "d1_bound", "d2_bound", "d3_bound",
                 "threshold", "seed"});
  // Every sweep point reuses the master seed, so a row can be reproduced from its own seed column.
  for (const auto& pt : points) {
    const auto est = monte_carlo_expected_divergence(inst.input, inst.channel, inst.target, pt.n, pt.m, pt.source,
                                                     config.trials, seed);
    const auto b = decomposition_bounds(inst.joint, pt.n, pt.m, config.epsilon, pt.source);
    csv.field(static_cast<long long>(pt.n)).field(static_cast<long long>(pt.m)).field(block_rate(pt.n, pt.m));
    csv.field(pt.source.name()).field(source_p_field(pt.source)).field(static_cast<long long>(config.trials));
    csv.field(est.mean).field(est.std_error);
    csv.field(b.d1_bound).field(b.d2_bound).field(b.d3_bound);
    csv.field(achievability_threshold(inst.joint, pt.source)).field(static_cast<unsigned long long>(seed));
    csv.end_row();
  }
  return csv.str();
}

std::string cmd_exact(const ExperimentConfig& config) {
  const auto inst = resolve_instance(config);
  const Pmf induced = output_marginal(inst.input, inst.channel);
  const bool target_is_induced = (induced.probs() - inst.target.probs()).cwiseAbs().maxCoeff() <= 1e-9;
  CsvWriter csv({"n", "M", "R", "source", "p", "exact_D", "I_C_Vn", "rho", "E0_block_n"});
  for (const auto& pt : expand_sweep(config)) {
    const double expected =
        exact_expected_divergence(inst.input, inst.channel, inst.target, pt.n, pt.m, pt.source);
    const double info = target_is_induced ? codebook_output_mutual_information(inst.input, inst.channel,
                                                                                inst.target, pt.n, pt.m, pt.source)
                                          : std::nan("");
    const double e0n = e0_blocklength(config.rho, inst.input, inst.channel, pt.n, pt.m, pt.source);
    csv.field(static_cast<long long>(pt.n)).field(static_cast<long long>(pt.m)).field(block_rate(pt.n, pt.m));
    csv.field(pt.source.name()).field(source_p_field(pt.source));
    csv.field(expected).field(info).field(config.rho).field(e0n);
    csv.end_row();
  }
  return csv.str();
}

std::vector<CurveExport> exact_curves(const ExperimentConfig& config, int grid_points) {
  const auto inst = resolve_instance(config);
  const auto grid = rho_grid(grid_points);
  std::vector<CurveExport> out;
  for (const auto& pt : expand_sweep(config))
    out.push_back({pt.n, pt.m, curve_csv(exponent_curve_table(inst.input, inst.channel, pt.n, pt.m, pt.source, grid))});
  return out;
}

nlohmann::json to_json(const hamming::Report& r) {
  return {{"codewords", r.codewords},
          {"outputs", r.outputs},
          {"min_probability", r.min_probability},
          {"max_probability", r.max_probability},
          {"max_deviation", r.max_deviation},
          {"divergence_bits", r.divergence_bits},
          {"mutual_information_bits", r.mutual_information_bits}};
}

nlohmann::json cmd_hamming() { return to_json(hamming::showcase()); }

nlohmann::json cmd_optimize(const ExperimentConfig& config) {
  const Pmf target = config.target ? *config.target : output_marginal(*config.input, config.channel);
  const RateCertificate cert = min_rate(config.channel, target);
  nlohmann::json out = to_json(cert);
  out["verdicts"] = nlohmann::json::array();
  for (const auto& pt : expand_sweep(config)) {
    const double rate = block_rate(pt.n, pt.m);
    const auto report = achievability_report(cert, rate, pt.source);
    out["verdicts"].push_back({{"n", pt.n},
                               {"M", pt.m},
                               {"R", rate},
                               {"source", pt.source.name()},
                               {"threshold", report.threshold},
                               {"margin", report.margin},
                               {"verdict", to_string(report.verdict)}});
  }
  return out;
}

}  // namespace resolv
