// Copyright 2026 The mpdo-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "mpdo/error.hpp"
#include "mpdo/field_io.hpp"
#include "mpdo_cli/cli.hpp"

namespace mpdo::cli {

using nlohmann::json;

namespace {

std::string csv_cell(const json& v) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  if (v.is_null()) return "nan";
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  return v.dump();
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw IoError("cannot write " + p.string());
  out << text;
  if (!out) throw IoError("write failed for " + p.string());
}

std::string csv_text(const Table& t) {
  std::ostringstream os;
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << "\n";
  for (const auto* rows : {&t.rows, &t.footer})
    for (const auto& row : *rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
      os << "\n";
    }
  return os.str();
}

std::string gnuplot_text(const Table& t) {
  std::ostringstream os;
  os << "set datafile separator ','\n";
  os << "set key autotitle columnhead\n";
  os << "set xlabel '" << (t.x_label.empty() ? t.columns.front() : t.x_label) << "'\n";
  os << "set ylabel '" << (t.y_label.empty() ? t.columns.back() : t.y_label) << "'\n";
  if (t.log_x) os << "set logscale x 2\n";
  if (t.log_y) os << "set logscale y 2\n";
  // Footer rows start with a text label and are skipped as invalid points.
  const std::size_t ycol = t.columns.size() >= 2 ? 2 : 1;
  os << "plot 'table.csv' using 1:" << ycol << " with linespoints\n";
  return os.str();
}

}  // namespace

void write_outputs(const ResultRecord& rec, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
  const fs::path base(dir);
  write_text(base / "result.json", result_json(rec));
  std::ostringstream timing;
  timing << std::setprecision(6) << "{\n  \"wall_seconds\": " << rec.wall_seconds << "\n}\n";
  write_text(base / "timing.json", timing.str());
  if (!rec.table.columns.empty()) {
    write_text(base / "table.csv", csv_text(rec.table));
    write_text(base / "plot.gp", gnuplot_text(rec.table));
  }
  for (const auto& nf : rec.fields) {
    try {
      write_field(nf.field, (base / nf.name).string());
    } catch (const Error& e) {
      throw IoError(e.what());
    }
  }
}

}  // namespace mpdo::cli
