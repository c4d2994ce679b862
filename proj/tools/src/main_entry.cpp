// Copyright 2026 The mpdo-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include <CLI11.hpp>

#include "mpdo/error.hpp"
#include "mpdo/parallel.hpp"
#include "mpdo_cli/cli.hpp"

namespace mpdo::cli {

int main_entry(int argc, char** argv) {
  CLI::App app{"Numerical toolkit for multilinear pseudo-differential operators", "mpdo-lab"};
  std::string command, config, out = ".";
  std::uint64_t seed = 0;
  int threads = 1;
  app.add_option("command", command, "Command to run")
      ->required()
      ->check(CLI::IsMember(command_names()));
  app.add_option("--config", config, "JSON configuration file")->required();
  app.add_option("--out", out, "Output directory")->capture_default_str();
  auto* seed_opt = app.add_option("--seed", seed, "Master seed, overrides the config");
  app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  app.set_version_flag("--version", kVersion);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const RunConfig cfg =
        parse_config_file(config, command, seed_opt->count() ? std::optional<std::uint64_t>(seed) : std::nullopt);
    set_thread_count(threads);
    const ResultRecord rec = run(cfg);
    write_outputs(rec, out);
    std::cout << result_json(rec);
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return e.code() == Errc::io ? 3 : 4;
  } catch (const std::exception& e) {
    std::cerr << "computation error: " << e.what() << "\n";
    return 4;
  }
}

}  // namespace mpdo::cli
