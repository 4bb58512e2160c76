#pragma once

// JSON and CSV interchange.
//   Pmf          {"probs": [...]}
//   ChannelMatrix {"rows": [[...], ...]}
//   JointPmf     {"table": [[...], ...]}
//   RateCertificate {"min_I_bits", "input_pmf", "support_size", "feasible"}

#include "resolv/core_prob.hpp"
#include "resolv/gallager.hpp"
#include "resolv/rate_optimizer.hpp"

#include <json.hpp>

#include <initializer_list>
#include <string>
#include <vector>

namespace resolv {

nlohmann::json to_json(const Pmf& p);
nlohmann::json to_json(const ChannelMatrix& w);
nlohmann::json to_json(const JointPmf& j);
nlohmann::json to_json(const RateCertificate& c);

Pmf pmf_from_json(const nlohmann::json& j);
ChannelMatrix channel_from_json(const nlohmann::json& j);
JointPmf joint_from_json(const nlohmann::json& j);

/// Locale-independent "%.6g"; infinities as "inf"/"-inf", NaN as "nan".
std::string format_number(double x);

/// Comma-separated rows with a fixed header, "\n" line endings.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  CsvWriter& field(const std::string& s);
  CsvWriter& field(double x);
  CsvWriter& field(long long x);
  CsvWriter& field(unsigned long long x);
  void end_row();

  std::string str() const;

 private:
  std::size_t columns_;
  std::vector<std::string> pending_;
  std::string out_;
};

/// The exponent curve export: rho, E0_single, E0_block_n, chord_value.
std::string curve_csv(const std::vector<CurveRow>& rows);

}  // namespace resolv
