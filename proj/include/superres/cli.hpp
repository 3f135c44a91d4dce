#pragma once

// Command-line experiment runner: configuration, dataset builders and writers.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "superres/binning.hpp"
#include "superres/mcsim.hpp"
#include "superres/optimizer.hpp"

namespace superres::cli {

/// JSON value preserving insertion order of object keys.
using Json = nlohmann::ordered_json;

enum class Mode { Scan, Mc, Fwhm, Sens, Fringes, Optimize, Reproduce };
enum class Format { Csv, Json };

/// Exit status of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitNumeric = 3,
  kExitIo = 4,
};

/// Environment variable supplying the seed when neither a flag nor a config
/// file sets it.
inline constexpr const char* kSeedEnvVar = "SUPERRES_SEED";

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  Mode mode = Mode::Scan;
  double n_photons = 19.0;
  double a = 0.5;
  std::optional<double> b;
  std::optional<int> n_bins;
  double phi_start = -3.141592653589793;
  double phi_end = 3.141592653589793;
  int phi_steps = 256;
  std::uint64_t samples = kDefaultSamplesPerPoint;
  std::uint64_t seed = kDefaultSeed;
  double visibility_threshold = 0.95;
  ContrastCriterion contrast = ContrastCriterion::VisibilityMin;
  double efficiency = 1.0;
  unsigned workers = 0;
  std::string output_path = "-";
  Format format = Format::Csv;
  std::string figure_id;

  /// Throws ConfigError when fields are inconsistent.
  void validate() const;
  /// Multi-bin scheme when b and n_bins are set, binary otherwise.
  BinningScheme scheme() const;
  CoherentSource source() const;
  PhaseGrid grid() const;
};

std::string to_string(Mode mode);
std::string to_string(Format format);
std::string to_string(ContrastCriterion criterion);

Json to_json(const RunConfig& config);

/// Parses argv-style arguments (without the program name) into a config.
/// Throws ConfigError on unknown flags, bad values or inconsistent fields.
/// Returns std::nullopt after printing help to `out`.
std::optional<RunConfig> parse_arguments(const std::vector<std::string>& args, std::ostream& out);

/// A table of records plus a summary block.
struct Dataset {
  std::vector<std::string> columns;
  /// Cells are JSON numbers or strings ("inf" for divergent values).
  std::vector<std::vector<Json>> rows;
  Json summary = Json::object();
};

/// Builds the dataset for config.mode.
Dataset build_dataset(const RunConfig& config);

/// Supported figure identifiers for `reproduce`.
const std::vector<std::string>& figure_ids();

/// CSV: header line, one line per row, 17 significant digits, '.' decimal
/// point, final newline.
void write_csv(const Dataset& data, std::ostream& out);

/// JSON object with keys "config", "records" and "summary".
void write_json(const Dataset& data, const RunConfig& config, std::ostream& out);

/// `value` with 17 significant digits and a locale-independent decimal point.
std::string format_number(double value);

/// Full command-line entry point; returns the process exit status. Errors
/// are reported as one line on `err`:
///   error: kind=<config|numeric|io|internal> message="..."
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace superres::cli
