// resolv_cli: bounds | simulate | exact | hamming | optimize
//
// Exit codes: 0 ok, 2 bad config or arguments, 3 size cap exceeded,
// 4 infeasible target, 1 anything else.

#include "resolv/error.hpp"
#include "resolv/workbench.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw resolv::ConfigError(path + ": cannot open output file");
  out << text;
}

std::string curve_name(const resolv::CurveExport& c) {
  return "curve_n" + std::to_string(c.n) + "_M" + std::to_string(c.m) + ".csv";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random-codebook resolvability workbench"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<long long> trials;
  std::string curve_dir;

  auto with_config = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Experiment config (JSON)")->required();
    sub->add_option("--out", out_path, "Write output here instead of stdout");
  };

  auto* bounds = app.add_subcommand("bounds", "Analytical bounds per sweep point (CSV)");
  with_config(bounds);
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate of E[D] per sweep point (CSV)");
  with_config(simulate);
  simulate->add_option("--seed", seed, "Master seed (overrides config and RESOLV_SEED)");
  simulate->add_option("--trials", trials, "Trials per sweep point (overrides config)")->check(CLI::PositiveNumber);
  auto* exact = app.add_subcommand("exact", "Exact ensemble quantities per sweep point (CSV)");
  with_config(exact);
  exact->add_option("--curve-dir", curve_dir, "Also write exponent curves, one CSV per sweep point");
  auto* hamming = app.add_subcommand("hamming", "Hamming(7,4) ball-channel showcase (JSON)");
  hamming->add_option("--out", out_path, "Write output here instead of stdout");
  auto* optimize = app.add_subcommand("optimize", "Minimum-rate certificate and verdicts (JSON)");
  with_config(optimize);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (hamming->parsed()) {
      emit(resolv::cmd_hamming().dump(2) + "\n", out_path);
      return 0;
    }
    auto config = resolv::load_config(config_path);
    if (bounds->parsed()) {
      emit(resolv::cmd_bounds(config), out_path);
    } else if (simulate->parsed()) {
      if (trials) config.trials = static_cast<resolv::Index>(*trials);
      emit(resolv::cmd_simulate(config, resolv::resolve_seed(config, seed)), out_path);
    } else if (exact->parsed()) {
      emit(resolv::cmd_exact(config), out_path);
      if (!curve_dir.empty()) {
        std::filesystem::create_directories(curve_dir);
        for (const auto& c : resolv::exact_curves(config))
          emit(c.csv, (std::filesystem::path(curve_dir) / curve_name(c)).string());
      }
    } else if (optimize->parsed()) {
      emit(resolv::cmd_optimize(config).dump(2) + "\n", out_path);
    }
  } catch (const resolv::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const resolv::CapExceeded& e) {
    std::cerr << "size cap exceeded: " << e.what() << "\n";
    return 3;
  } catch (const resolv::InfeasibleTarget& e) {
    std::cerr << "infeasible target: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
