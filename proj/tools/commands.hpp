#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"

namespace spp::cli {

enum class Format { kCsv, kJson };

struct Options {
  std::filesystem::path config;
  std::filesystem::path out = ".";
  std::optional<std::uint64_t> seed;
  Format format = Format::kCsv;
  bool verbose = false;
};

// Exit codes. kFired: an assertion failed or an audit reported findings.
inline constexpr int kOk = 0;
inline constexpr int kFired = 1;
inline constexpr int kConfigInvalid = 2;
inline constexpr int kRuntimeError = 3;

const std::vector<std::string>& known_commands();

// Loads the config, runs the command and writes <out>/summary.json even when
// the command fails. Human-readable progress goes to log.
int run_command(const std::string& command, const Options& options, std::ostream& log);

// Same as run_command with an already parsed config.
int run_command(const std::string& command, const ExperimentConfig& config, const Options& options,
                std::ostream& log);

}  // namespace spp::cli
