#pragma once

// Run configuration, commands and reports behind the C API and the CLI.

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "kzeta/gaussian.hpp"

namespace kz {

using cplx = std::complex<double>;

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kReportVersion = 1;

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::optional<GaussianInt> pi = GaussianInt{1, 1};  // nullopt: the Picard group itself
  std::int64_t height = 2;       // first search height
  std::int64_t height_max = 14;  // escalation stops here
  double cutoff = 20;            // X
  std::vector<cplx> s{cplx(2), cplx(3), cplx(2, 1)};
  std::uint64_t samples = 20000;
  std::uint64_t seed = 1;
  double cusp_height = 8;
  double delta_max = 8;
  std::optional<double> tol;     // overrides every check tolerance of the command
  std::string table;             // persisted full-group table to load instead of building
  std::string out;               // artifact directory; empty writes nothing
  std::string format = "json";   // json | csv
};

/// Nested sections: group{pi}, enumeration{height, height_max, cutoff, table},
/// zeta{s}, sampling{samples, seed, cusp_height, delta_max}, checks{tol},
/// output{dir, format}. Missing keys keep their defaults.
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& c);

/// Dotted section key or CLI flag name ("pi", "height", "s", ...). "s"
/// appends one value; an empty value clears the list.
void config_set(RunConfig& c, const std::string& key, const std::string& value);
void validate(const RunConfig& c);

/// "re,im", "re" or "full"; s values are parsed the same way.
std::optional<GaussianInt> parse_modulus(const std::string& text);
cplx parse_complex(const std::string& text);

/// FNV-1a 64 of the canonical config json, as 16 hex digits.
std::string config_hash(const RunConfig& c);

struct RunResult {
  nlohmann::json report;
  bool pass = true;
};

const std::vector<std::string>& command_names();

/// Runs one command. Throws ConfigError for an unknown command or invalid
/// config; library errors propagate unchanged.
RunResult run_command(const std::string& command, const RunConfig& c);

/// json: the report itself; csv: one row per check.
std::string report_text(const nlohmann::json& report, const std::string& format);

}  // namespace kz
