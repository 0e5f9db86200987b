#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace gaugelab {

/// Full double precision (17 significant digits), used for every CSV number.
std::string fmt_double(double v);

/// Writes `contents` to `<path>.tmp` and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// One line of a JSON-lines check report.
struct ReportRecord {
  std::string check;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  double residual = 0.0;
  double bound = 0.0;
  bool pass = false;

  std::string to_jsonl() const;
};

}  // namespace gaugelab
