#pragma once

// Front end shared by the gaugelab executable and its tests.
//
// Configuration is one JSON document with a section per module; see
// default_config() for every key. --set overrides are applied after the file.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace gaugelab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitParameter = 2;
inline constexpr int kExitGuard = 3;

nlohmann::json default_config();

/// Overlays `user` onto `cfg`. Unknown keys or type changes throw ParameterError.
void merge_config(nlohmann::json& cfg, const nlohmann::json& user);

/// Applies "a.b.c=VALUE"; VALUE is parsed as JSON, falling back to a string.
void apply_override(nlohmann::json& cfg, const std::string& assignment);

struct RunContext {
  nlohmann::json config;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct OutputFile {
  std::string name;
  std::string contents;
};

const std::vector<std::string>& experiment_names();

/// Runs one experiment entirely in memory. Throws ParameterError for bad
/// input and GuardError for truncation-guard violations.
std::vector<OutputFile> run_experiment(const std::string& name, const RunContext& ctx,
                                       std::ostream& console);

/// Parses arguments, runs, writes outputs atomically; returns the exit code.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace gaugelab::cli
