#include "resolv/error.hpp"
#include "resolv/hamming.hpp"
#include "resolv/io.hpp"
#include "resolv/workbench.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>

using namespace resolv;
using doctest::Approx;

namespace {

const char* kBsc = R"({
  "channel": {"rows": [[0.9, 0.1], [0.1, 0.9]]},
  "input": {"probs": [0.5, 0.5]},
  "target": "induced",
  "sweep": {"n": [1, 2, 3], "M": [1, 2, 3]},
  "trials": 400,
  "seed": 21
})";

std::vector<std::vector<std::string>> rows_of(const std::string& csv) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    out.push_back(cells);
  }
  return out;
}

std::size_t column(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  FAIL("missing column " << name);
  return 0;
}

}  // namespace

TEST_CASE("config parsing and defaults") {
  const auto c = parse_config_text(kBsc);
  CHECK(c.n_values == std::vector<int>{1, 2, 3});
  CHECK(c.m_values == std::vector<Index>{1, 2, 3});
  CHECK_FALSE(c.target.has_value());
  CHECK(c.epsilon == 0.1);
  CHECK(c.rho == -0.5);
  CHECK(c.seed == std::optional<std::uint64_t>(21));
  CHECK(expand_sweep(c).size() == 9);
}

TEST_CASE("config round trip") {
  const auto c = parse_config_text(kBsc);
  const auto again = parse_config(to_json(c));
  CHECK(again == c);
  CHECK(to_json(again) == to_json(c));

  auto bits = c;
  bits.source = {MessageSource::Kind::BitStream, 0.11};
  bits.m_values.clear();
  bits.r_values = {1.0};
  bits.target = Pmf({0.5, 0.5});
  bits.seed.reset();
  CHECK(parse_config(to_json(bits)) == bits);
}

TEST_CASE("config errors carry a location") {
  auto message = [](const std::string& text) {
    try {
      parse_config_text(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message("{\n  \"channel\": ,\n}").find("line 2") != std::string::npos);
  CHECK(message(R"({"sweep": {"n": [1], "M": [1]}})").find("/channel") != std::string::npos);
  CHECK(message(R"({"channel": {"rows": [[0.5, 0.6]]}, "sweep": {"n": [1], "M": [1]}, "input": {"probs": [1]}})")
            .find("/channel") != std::string::npos);
  CHECK(message(R"({"channel": {"rows": [[1, 0], [0, 1]]}, "input": {"probs": [1, 0, 0]},
                    "sweep": {"n": [1], "M": [1]}})")
            .find("/input") != std::string::npos);
  CHECK(message(R"({"channel": {"rows": [[1, 0], [0, 1]]}, "input": {"probs": [0.5, 0.5]},
                    "sweep": {"n": [0], "M": [1]}})")
            .find("/sweep/n/0") != std::string::npos);
  CHECK(message(R"({"channel": {"rows": [[1, 0], [0, 1]]}, "input": {"probs": [0.5, 0.5]},
                    "sweep": {"n": [3], "R": [0.5]}})")
            .find("/sweep/R") != std::string::npos);
  CHECK(message(R"({"channel": {"rows": [[1, 0], [0, 1]]}, "input": {"probs": [0.5, 0.5]},
                    "source": {"kind": "bitstream", "p": 0.11}, "sweep": {"n": [3], "M": [3]}})")
            .find("power of two") != std::string::npos);
  CHECK(message(R"({"channel": {"rows": [[1, 0], [0, 1]]}, "input": "optimize", "sweep": {"n": [1], "M": [1]}})")
            .find("/input") != std::string::npos);
  CHECK(message(R"({"channel": {"rows": [[1, 0], [0, 1]]}, "input": {"probs": [0.5, 0.5]},
                    "sweep": {"n": [1], "M": [1]}, "rho": 0.0})")
            .find("/rho") != std::string::npos);
}

TEST_CASE("rate sweeps") {
  auto c = parse_config_text(R"({"channel": {"rows": [[1, 0], [0, 1]]}, "input": {"probs": [0.5, 0.5]},
                                 "sweep": {"n": [2, 4], "R": [0.5, 1.0]}})");
  const auto pts = expand_sweep(c);
  REQUIRE(pts.size() == 4);
  CHECK(pts[0].m == 2);
  CHECK(pts[1].m == 4);
  CHECK(pts[2].m == 4);
  CHECK(pts[3].m == 16);
  c.source = {MessageSource::Kind::BitStream, 0.2};
  CHECK(expand_sweep(c)[3].source.bits() == 4);
}

TEST_CASE("seed precedence") {
  auto c = parse_config_text(kBsc);
  CHECK(resolve_seed(c, 5) == 5);
  CHECK(resolve_seed(c, std::nullopt) == 21);
  c.seed.reset();
  setenv("RESOLV_SEED", "77", 1);
  CHECK(resolve_seed(c, std::nullopt) == 77);
  CHECK(resolve_seed(c, 3) == 3);
  setenv("RESOLV_SEED", "x", 1);
  CHECK_THROWS_AS(resolve_seed(c, std::nullopt), ConfigError);
  unsetenv("RESOLV_SEED");
  CHECK(resolve_seed(c, std::nullopt) == 0);
}

TEST_CASE("optimize resolves the input") {
  const auto c = parse_config_text(R"({"channel": {"rows": [[0.9, 0.1], [0.1, 0.9]]}, "input": "optimize",
                                       "target": {"probs": [0.5, 0.5]}, "sweep": {"n": [2], "M": [2]}})");
  const auto inst = resolve_instance(c);
  CHECK(inst.input[0] == Approx(0.5));
  const auto j = cmd_optimize(c);
  CHECK(j.at("min_I_bits").get<double>() == Approx(1 - binary_entropy(0.1)).epsilon(1e-9));
  CHECK(j.at("verdicts").size() == 1);
  CHECK(j.at("verdicts")[0].at("verdict") == "NOT_ACHIEVABLE");

  const auto infeasible = parse_config_text(R"({"channel": {"rows": [[0.5, 0.5], [0.5, 0.5]]}, "input": "optimize",
                                                "target": {"probs": [0.3, 0.7]}, "sweep": {"n": [2], "M": [2]}})");
  CHECK_THROWS_AS(cmd_optimize(infeasible), InfeasibleTarget);
}

TEST_CASE("bounds command") {
  const auto c = parse_config_text(R"({"channel": {"rows": [[0.9, 0.1], [0.1, 0.9]]}, "input": {"probs": [0.5, 0.5]},
                                       "sweep": {"n": [4, 8, 16, 32], "R": [0.25, 1.0]}})");
  const auto rows = rows_of(cmd_bounds(c));
  REQUIRE(rows.size() == 9);
  const auto& h = rows[0];
  const std::size_t eg = column(h, "E_G");
  const std::size_t l2 = column(h, "lemma2_bound");
  const std::size_t d1 = column(h, "d1_bound");
  const std::size_t rate = column(h, "R");
  double last_d1 = INFINITY;
  double last_l2 = INFINITY;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (std::stod(rows[r][rate]) < 0.5) {
      CHECK(rows[r][eg] == "0");
      CHECK(rows[r][l2] == "1");
    } else {
      CHECK(std::stod(rows[r][eg]) < 0.0);
      CHECK(std::stod(rows[r][d1]) <= last_d1);
      CHECK(std::stod(rows[r][l2]) <= last_l2);
      last_d1 = std::stod(rows[r][d1]);
      last_l2 = std::stod(rows[r][l2]);
    }
  }

  ExperimentConfig ham;
  ham.channel = hamming::ball_channel();
  ham.input = hamming::codeword_input();
  ham.n_values = {1};
  ham.m_values = {16};
  const auto hrows = rows_of(cmd_bounds(parse_config(to_json(ham))));
  CHECK(hrows[1][column(h, "threshold")] == "4");
}

TEST_CASE("simulate command") {
  const auto c = parse_config_text(kBsc);
  const std::string a = cmd_simulate(c, 9);
  CHECK(a == cmd_simulate(c, 9));
  CHECK(a != cmd_simulate(c, 10));

  const auto exact = rows_of(cmd_exact(c));
  const auto sim = rows_of(a);
  REQUIRE(exact.size() == sim.size());
  const std::size_t mean = column(sim[0], "mean_D");
  const std::size_t se = column(sim[0], "stderr_D");
  const std::size_t ex = column(exact[0], "exact_D");
  for (std::size_t r = 1; r < sim.size(); ++r)
    CHECK(std::abs(std::stod(sim[r][mean]) - std::stod(exact[r][ex])) <= 3 * std::stod(sim[r][se]) + 1e-5);

  const auto blind = parse_config_text(R"({"channel": {"rows": [[0.3, 0.7], [0.3, 0.7]]},
                                           "input": {"probs": [0.5, 0.5]}, "sweep": {"n": [2, 3], "M": [2, 4]},
                                           "trials": 10})");
  const auto brows = rows_of(cmd_simulate(blind, 1));
  for (std::size_t r = 1; r < brows.size(); ++r) CHECK(std::abs(std::stod(brows[r][mean])) < 1e-9);

  auto big = c;
  big.n_values = {30};
  try {
    cmd_simulate(big, 1);
    FAIL("expected CapExceeded");
  } catch (const CapExceeded& e) {
    CHECK(std::string(e.what()).find("n <= 24") != std::string::npos);
  }
}

TEST_CASE("exact command") {
  const auto c = parse_config_text(kBsc);
  const auto rows = rows_of(cmd_exact(c));
  REQUIRE(rows.size() == 10);
  const std::size_t ex = column(rows[0], "exact_D");
  const std::size_t mi = column(rows[0], "I_C_Vn");
  for (std::size_t r = 1; r < rows.size(); ++r) CHECK(rows[r][ex] == rows[r][mi]);

  const auto id = parse_config_text(R"({"channel": {"rows": [[1, 0], [0, 1]]}, "input": {"probs": [0.5, 0.5]},
                                        "sweep": {"n": [1], "M": [1]}})");
  CHECK(rows_of(cmd_exact(id))[1][ex] == "1");

  const auto other = parse_config_text(R"({"channel": {"rows": [[0.9, 0.1], [0.1, 0.9]]},
                                           "input": {"probs": [0.5, 0.5]}, "target": {"probs": [0.4, 0.6]},
                                           "sweep": {"n": [1], "M": [1]}})");
  CHECK(rows_of(cmd_exact(other))[1][mi] == "nan");

  const auto curves = exact_curves(c, 11);
  REQUIRE(curves.size() == 9);
  CHECK(curves[0].csv.rfind("rho,E0_single,E0_block_n,chord_value\n", 0) == 0);
}

TEST_CASE("hamming command") {
  const auto j = cmd_hamming();
  CHECK(j.at("codewords") == 16);
  CHECK(j.at("outputs") == 128);
  CHECK(j.at("max_deviation").get<double>() < 1e-12);
  CHECK(j.at("divergence_bits").get<double>() < 1e-12);
  CHECK(std::abs(j.at("mutual_information_bits").get<double>() - 4.0) < 1e-10);
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0 / 3.0) == "0.333333");
  CHECK(format_number(1e-20) == "1e-20");
  CHECK(format_number(INFINITY) == "inf");
  CHECK(format_number(std::nan("")) == "nan");
  CsvWriter w({"a", "b"});
  w.field(1.5);
  CHECK_THROWS_AS(w.end_row(), DimensionError);
}
