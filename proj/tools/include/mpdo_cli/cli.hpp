// Copyright 2026 The mpdo-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mpdo/grid.hpp"

namespace mpdo::cli {

inline constexpr const char* kVersion = "0.1.0";

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"eval",  "norm", "weight-test", "decomp-check", "bound-experiment",
                                                 "sharpness-experiment", "dk"};
  return names;
}

// Schema violation; `path` names the offending field.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// Missing or unreadable input and unwritable output.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A validated configuration. `echo` is the input document with every default
// filled in; commands read their parameters from it.
struct RunConfig {
  std::string command;
  Grid grid;
  int N = 2;
  std::uint64_t seed = 0;
  nlohmann::json echo;
};

// Parses and validates a JSON document. A non-empty `command` must match the
// document's command (or supplies it when absent); `seed` overrides the
// document's seed.
RunConfig parse_config_text(const std::string& text, const std::string& command = "",
                            std::optional<std::uint64_t> seed = std::nullopt);
RunConfig parse_config_file(const std::string& path, const std::string& command = "",
                            std::optional<std::uint64_t> seed = std::nullopt);

struct Table {
  std::vector<std::string> columns;
  std::vector<nlohmann::json> rows;    // arrays, one entry per column
  std::vector<nlohmann::json> footer;  // fitted slopes and similar, same shape
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
};

struct NamedField {
  std::string name;
  Field field;
};

struct ResultRecord {
  nlohmann::json result;  // command, config echo, inputs digest, results, table, version
  Table table;
  std::vector<NamedField> fields;
  double wall_seconds = 0.0;
};

ResultRecord run(const RunConfig& cfg);

// Deterministic serialization of the result document (sorted keys).
std::string result_json(const ResultRecord& rec);

// Writes result.json, timing.json, and when present table.csv, plot.gp and
// the field files into `dir`.
void write_outputs(const ResultRecord& rec, const std::string& dir);

// Full command line front end; returns the process exit status.
int main_entry(int argc, char** argv);

}  // namespace mpdo::cli
