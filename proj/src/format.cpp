#include "gaugelab/format.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace gaugelab {

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string ReportRecord::to_jsonl() const {
  nlohmann::ordered_json j;
  j["check"] = check;
  j["params"] = params;
  j["residual"] = residual;
  j["bound"] = bound;
  j["pass"] = pass;
  return j.dump() + "\n";
}

}  // namespace gaugelab
