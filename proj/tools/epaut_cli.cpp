#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "app.hpp"
#include "epaut/errors.hpp"

namespace {

constexpr int kExitAssertion = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

}  // namespace

int main(int argc, char** argv) {
  using epaut::app::Json;

  CLI::App cli{"Dual-pair verification suites and peakon simulation"};
  cli.require_subcommand(1);
  cli.fallthrough();

  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  bool strict = false;
  cli.add_option("--config", config_path, "TOML or JSON run configuration")->check(CLI::ExistingFile);
  cli.add_option("--out", out_dir, "Output directory for report.json and CSV files");
  cli.add_option("--seed", seed, "Seed of the splitmix64-counter generator");
  cli.add_option("--threads", threads, "Worker threads for independent samples");
  cli.add_flag("--strict", strict, "Treat warnings as failures");

  std::string scenario;
  cli.add_subcommand("simulate", "Integrate a peakon ensemble and write CSV trajectories")
      ->callback([&] { scenario = "simulate"; });
  cli.add_subcommand("cocycle", "Cocycle identity and base-point checks")
      ->callback([&] { scenario = "cocycle"; });
  cli.add_subcommand("run", "Run the scenario named in the config")->callback([&] {});
  auto* verify = cli.add_subcommand("verify", "Verification suites");
  verify->require_subcommand(1);
  for (const std::string name :
       {"dual-pair", "vol-dual-pair", "noether", "conservation", "derivatives"})
    verify->add_subcommand(name)->callback([&scenario, name] { scenario = "verify-" + name; });

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    Json config = config_path.empty() ? Json::object() : epaut::app::load_config_file(config_path);
    epaut::app::apply_environment(config, epaut::app::process_environment());
    if (!scenario.empty()) config["scenario"] = scenario;
    if (seed) config["seed"] = *seed;
    if (threads) config["threads"] = *threads;
    if (strict) config["strict"] = true;
    if (!out_dir.empty()) config["out"] = out_dir;

    const epaut::app::RunConfig rc = epaut::app::parse_config(config);
    for (const auto& w : rc.warnings) std::cerr << "warning: " << w << '\n';
    const epaut::app::RunResult result = epaut::app::run(rc, &std::cout);
    std::cout << "report: " << result.report_path.string() << '\n';
    return 0;
  } catch (const epaut::ConfigInvalid& e) {
    std::cerr << e.what() << '\n';
    return kExitConfig;
  } catch (const epaut::AssertionFailed& e) {
    std::cerr << e.what() << '\n';
    return kExitAssertion;
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return kExitRuntime;
  }
}
