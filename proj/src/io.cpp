#include "resolv/io.hpp"

#include "resolv/error.hpp"

#include <cmath>
#include <cstdio>

namespace resolv {
namespace {

std::vector<double> number_array(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError(where + "/" + std::to_string(i) + ": expected a number");
    out.push_back(j[i].get<double>());
  }
  return out;
}

Matrix number_table(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ConfigError(where + ": expected a non-empty array of rows");
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < j.size(); ++i) rows.push_back(number_array(j[i], where + "/" + std::to_string(i)));
  const std::size_t cols = rows.front().size();
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols)
      throw ConfigError(where + "/" + std::to_string(i) + ": row has " + std::to_string(rows[i].size()) +
                        " entries, expected " + std::to_string(cols));
    for (std::size_t c = 0; c < cols; ++c) m(static_cast<Index>(i), static_cast<Index>(c)) = rows[i][c];
  }
  return m;
}

const nlohmann::json& member(const nlohmann::json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(where + ": missing \"" + key + "\"");
  return j.at(key);
}

template <typename Fn>
auto rethrow_as_config(const std::string& where, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

}  // namespace

nlohmann::json to_json(const Pmf& p) {
  return {{"probs", std::vector<double>(p.probs().data(), p.probs().data() + p.size())}};
}

nlohmann::json to_json(const ChannelMatrix& w) {
  nlohmann::json rows = nlohmann::json::array();
  for (Index u = 0; u < w.input_size(); ++u) {
    std::vector<double> row(static_cast<std::size_t>(w.output_size()));
    for (Index v = 0; v < w.output_size(); ++v) row[static_cast<std::size_t>(v)] = w(u, v);
    rows.push_back(row);
  }
  return {{"rows", rows}};
}

nlohmann::json to_json(const JointPmf& j) {
  nlohmann::json rows = nlohmann::json::array();
  for (Index u = 0; u < j.input_size(); ++u) {
    std::vector<double> row(static_cast<std::size_t>(j.output_size()));
    for (Index v = 0; v < j.output_size(); ++v) row[static_cast<std::size_t>(v)] = j(u, v);
    rows.push_back(row);
  }
  return {{"table", rows}};
}

nlohmann::json to_json(const RateCertificate& c) {
  const auto& x = c.argmin_input.probs();
  return {{"min_I_bits", c.min_mutual_information},
          {"input_pmf", std::vector<double>(x.data(), x.data() + x.size())},
          {"support_size", c.support_size},
          {"feasible", c.feasible}};
}

Pmf pmf_from_json(const nlohmann::json& j) {
  const auto probs = number_array(member(j, "probs", "pmf"), "pmf/probs");
  return rethrow_as_config("pmf", [&] {
    return Pmf(Vector(Eigen::Map<const Vector>(probs.data(), static_cast<Index>(probs.size()))));
  });
}

ChannelMatrix channel_from_json(const nlohmann::json& j) {
  Matrix rows = number_table(member(j, "rows", "channel"), "channel/rows");
  return rethrow_as_config("channel", [&] { return ChannelMatrix(std::move(rows)); });
}

JointPmf joint_from_json(const nlohmann::json& j) {
  Matrix table = number_table(member(j, "table", "joint"), "joint/table");
  return rethrow_as_config("joint", [&] { return JointPmf(std::move(table)); });
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
  pending_ = std::move(header);
  end_row();
}

CsvWriter& CsvWriter::field(const std::string& s) {
  pending_.push_back(s);
  return *this;
}

CsvWriter& CsvWriter::field(double x) { return field(format_number(x)); }

CsvWriter& CsvWriter::field(long long x) { return field(std::to_string(x)); }

CsvWriter& CsvWriter::field(unsigned long long x) { return field(std::to_string(x)); }

void CsvWriter::end_row() {
  if (pending_.size() != columns_) throw DimensionError("CsvWriter: row width differs from header");
  for (std::size_t i = 0; i < pending_.size(); ++i) {
    if (i) out_ += ',';
    out_ += pending_[i];
  }
  out_ += '\n';
  pending_.clear();
}

std::string CsvWriter::str() const { return out_; }

std::string curve_csv(const std::vector<CurveRow>& rows) {
  CsvWriter csv({"rho", "E0_single", "E0_block_n", "chord_value"});
  for (const auto& r : rows) {
    csv.field(r.rho).field(r.e0_single).field(r.e0_block).field(r.chord);
    csv.end_row();
  }
  return csv.str();
}

}  // namespace resolv
