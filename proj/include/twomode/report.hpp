#pragma once

// Flat-file outputs of the CLI: versioned CSV tables, the per-run JSON
// manifest and a small SVG scatter/line plotter.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace twomode::report {

// %.12g; empty string for nullopt or non-finite values.
std::string format_number(std::optional<double> x);

class CsvTable {
 public:
  // `schema` names the layout (e.g. "fig1_eigenvalues"); the first line of the
  // file is "# twomode <schema> v<version>".
  CsvTable(std::string schema, int version, std::vector<std::string> columns);

  void add_row(std::vector<std::string> cells);
  const std::vector<std::string>& columns() const { return columns_; }
  size_t rows() const { return rows_.size(); }
  std::string str() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::string schema_;
  int version_;
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

struct RunManifest {
  std::string command;
  nlohmann::json parameters = nlohmann::json::object();
  nlohmann::json tolerances = nlohmann::json::object();
  std::vector<std::string> outputs;
  double wall_time = 0.0;
  int exit_code = 0;
  std::string error;

  nlohmann::json to_json() const;
  void write(const std::filesystem::path& path) const;
};

const char* tool_version();

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#000000";
  bool connect = false;
};

struct SvgPlot {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  bool log_y = false;
  int width = 640;
  int height = 420;
  std::vector<Series> series;

  // Points with non-finite coordinates (or y <= 0 on a log axis) are skipped.
  std::string render() const;
  void write(const std::filesystem::path& path) const;
};

}  // namespace twomode::report
