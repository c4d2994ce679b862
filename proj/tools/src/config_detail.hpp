// Copyright 2026 The mpdo-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace mpdo::cli::detail {

// Reads one JSON object, records every key it looks at and writes the value
// actually used (default or given) into an echo object. finish() rejects
// keys that were never read.
class Section {
 public:
  Section(const nlohmann::json& in, std::string path);

  double real(const std::string& key, std::optional<double> def = std::nullopt);
  long long integer(const std::string& key, std::optional<long long> def = std::nullopt);
  std::uint64_t unsigned64(const std::string& key, std::uint64_t def);
  std::string text(const std::string& key, std::optional<std::string> def = std::nullopt);
  bool flag(const std::string& key, bool def);
  std::vector<double> reals(const std::string& key, std::optional<std::vector<double>> def = std::nullopt);
  std::vector<long long> integers(const std::string& key, std::optional<std::vector<long long>> def = std::nullopt);
  const nlohmann::json* raw(const std::string& key);
  void put(const std::string& key, nlohmann::json value);
  std::string sub(const std::string& key) const;
  nlohmann::json finish() const;

  static double to_real(const nlohmann::json& v, const std::string& path);

 private:
  const nlohmann::json* find(const std::string& key);

  const nlohmann::json& in_;
  std::string path_;
  nlohmann::json out_;
  std::set<std::string> seen_;
};

// Extended reals as JSON: finite values as numbers, infinities as "inf".
nlohmann::json extended(double v);

void require(bool ok, const std::string& path, const std::string& what);

}  // namespace mpdo::cli::detail
