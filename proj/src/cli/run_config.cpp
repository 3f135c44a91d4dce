#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "superres/cli.hpp"

namespace superres::cli {

namespace {

// RunConfig field name -> command-line flag name.
const std::map<std::string, std::string>& field_to_flag() {
  static const std::map<std::string, std::string> table = {
      {"n_photons", "n-photons"},
      {"a", "a"},
      {"b", "b"},
      {"n_bins", "bins"},
      {"phi_start", "phi-start"},
      {"phi_end", "phi-end"},
      {"phi_steps", "steps"},
      {"samples", "samples"},
      {"seed", "seed"},
      {"visibility_threshold", "visibility-threshold"},
      {"contrast", "contrast"},
      {"efficiency", "efficiency"},
      {"workers", "workers"},
      {"output_path", "out"},
      {"format", "format"},
  };
  return table;
}

const std::map<std::string, ContrastCriterion>& contrast_names() {
  static const std::map<std::string, ContrastCriterion> table = {
      {"visibility-min", ContrastCriterion::VisibilityMin},
      {"visibility-mean", ContrastCriterion::VisibilityMean},
      {"peak-contrast-min", ContrastCriterion::PeakContrastMin},
      {"peak-contrast-mean", ContrastCriterion::PeakContrastMean},
  };
  return table;
}

std::string json_scalar_to_string(const nlohmann::json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_boolean()) return value.get<bool>() ? "true" : "false";
  return value.dump();
}

/// Reads either a JSON document (a dataset written by this tool, or a bare
/// object of RunConfig fields) or a TOML/INI-style `key = value` file.
/// Keys may use RunConfig field names or flag names.
class RunConfigFile : public CLI::Config {
public:
  std::string to_config(const CLI::App* app, bool defaults, bool write_description,
                        std::string prefix) const override {
    return CLI::ConfigTOML().to_config(app, defaults, write_description, std::move(prefix));
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    std::stringstream buffer;
    buffer << input.rdbuf();
    const std::string text = buffer.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    std::vector<CLI::ConfigItem> items;
    if (first != std::string::npos && text[first] == '{') {
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(text);
      } catch (const nlohmann::json::parse_error& e) {
        throw CLI::ConversionError("config", std::string("invalid JSON: ") + e.what());
      }
      const nlohmann::json& fields = doc.contains("config") ? doc.at("config") : doc;
      if (!fields.is_object()) throw CLI::ConversionError("config", "JSON config must be an object");
      for (const auto& [key, value] : fields.items()) {
        if (value.is_null() || value.is_object() || value.is_array()) continue;
        CLI::ConfigItem item;
        item.name = flag_name(key);
        item.inputs = {json_scalar_to_string(value)};
        items.push_back(std::move(item));
      }
      return items;
    }
    std::istringstream again(text);
    items = CLI::ConfigTOML().from_config(again);
    for (auto& item : items) item.name = flag_name(item.name);
    return items;
  }

private:
  static std::string flag_name(const std::string& key) {
    const auto& table = field_to_flag();
    if (const auto it = table.find(key); it != table.end()) return it->second;
    return key;
  }
};

Mode mode_from_name(const std::string& name) {
  static const std::map<std::string, Mode> table = {
      {"scan", Mode::Scan},         {"mc", Mode::Mc},           {"fwhm", Mode::Fwhm},
      {"sens", Mode::Sens},         {"fringes", Mode::Fringes}, {"optimize", Mode::Optimize},
      {"reproduce", Mode::Reproduce}};
  return table.at(name);
}

}  // namespace

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::Scan: return "scan";
    case Mode::Mc: return "mc";
    case Mode::Fwhm: return "fwhm";
    case Mode::Sens: return "sens";
    case Mode::Fringes: return "fringes";
    case Mode::Optimize: return "optimize";
    case Mode::Reproduce: return "reproduce";
  }
  return "scan";
}

std::string to_string(Format format) { return format == Format::Json ? "json" : "csv"; }

std::string to_string(ContrastCriterion criterion) {
  for (const auto& [name, value] : contrast_names()) {
    if (value == criterion) return name;
  }
  return "visibility-min";
}

void RunConfig::validate() const {
  if (b.has_value() != n_bins.has_value()) {
    throw ConfigError("--b and --bins must be given together");
  }
  if (phi_steps < 2) throw ConfigError("--steps must be at least 2");
  if (!std::isfinite(phi_start) || !std::isfinite(phi_end) || !(phi_end > phi_start)) {
    throw ConfigError("--phi-end must exceed --phi-start");
  }
  if (!std::isfinite(n_photons) || n_photons < 0.0) {
    throw ConfigError("--n-photons must be finite and non-negative");
  }
  if (!std::isfinite(a) || !(a > 0.0)) throw ConfigError("--a must be positive");
  if (samples < 1) throw ConfigError("--samples must be at least 1");
  if (!(visibility_threshold > 0.0 && visibility_threshold < 1.0)) {
    throw ConfigError("--visibility-threshold must lie in (0, 1)");
  }
  if (!(efficiency > 0.0 && efficiency <= 1.0)) throw ConfigError("--efficiency must lie in (0, 1]");
  if (mode == Mode::Reproduce) {
    const auto& ids = figure_ids();
    if (std::find(ids.begin(), ids.end(), figure_id) == ids.end()) {
      throw ConfigError("unknown figure id '" + figure_id + "'");
    }
  }
  try {
    (void)scheme();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

BinningScheme RunConfig::scheme() const {
  if (b && n_bins) return BinningScheme::multi(a, *b, *n_bins);
  return BinningScheme::binary(a);
}

CoherentSource RunConfig::source() const { return CoherentSource(n_photons); }

PhaseGrid RunConfig::grid() const {
  return PhaseGrid::linspace(phi_start, phi_end, static_cast<std::size_t>(phi_steps));
}

Json to_json(const RunConfig& config) {
  Json j;
  j["mode"] = to_string(config.mode);
  if (config.mode == Mode::Reproduce) j["figure_id"] = config.figure_id;
  j["n_photons"] = config.n_photons;
  j["a"] = config.a;
  j["b"] = config.b ? Json(*config.b) : Json(nullptr);
  j["n_bins"] = config.n_bins ? Json(*config.n_bins) : Json(nullptr);
  j["phi_start"] = config.phi_start;
  j["phi_end"] = config.phi_end;
  j["phi_steps"] = config.phi_steps;
  j["samples"] = config.samples;
  j["seed"] = config.seed;
  j["visibility_threshold"] = config.visibility_threshold;
  j["contrast"] = to_string(config.contrast);
  j["efficiency"] = config.efficiency;
  j["format"] = to_string(config.format);
  return j;
}

std::optional<RunConfig> parse_arguments(const std::vector<std::string>& args, std::ostream& out) {
  RunConfig config;
  CLI::App app{"Super-resolving coherent-state interferometry with binned homodyne detection",
               "superres"};
  app.fallthrough();
  app.require_subcommand(1);
  app.config_formatter(std::make_shared<RunConfigFile>());
  app.set_config("--config", "", "Read settings from a key = value file or a JSON dataset");
  app.allow_config_extras(CLI::config_extras_mode::ignore);

  std::optional<double> b;
  std::optional<int> bins;
  bool degrees = false;
  std::string format = "csv";
  std::string contrast = "visibility-min";

  app.add_option("--n-photons", config.n_photons, "Mean photon number N")->capture_default_str();
  app.add_option("--a", config.a, "Bin half-width a")->capture_default_str();
  app.add_option("--b", b, "Bin spacing b (multi-bin scheme)");
  app.add_option("--bins", bins, "Number of bins, odd (multi-bin scheme)");
  app.add_option("--phi-start", config.phi_start, "First phase of the grid (rad)")->capture_default_str();
  app.add_option("--phi-end", config.phi_end, "Last phase of the grid (rad)")->capture_default_str();
  app.add_option("--steps", config.phi_steps, "Number of phase points")->capture_default_str();
  app.add_option("--samples", config.samples, "Monte Carlo samples per phase point")
      ->capture_default_str();
  app.add_option("--seed", config.seed, "Master seed (default is fixed)")
      ->envname(kSeedEnvVar)
      ->capture_default_str();
  app.add_option("--visibility-threshold", config.visibility_threshold,
                 "Contrast threshold for optimize / fig3c")
      ->capture_default_str();
  app.add_option("--contrast", contrast, "Contrast figure the threshold applies to")
      ->check(CLI::IsMember({"visibility-min", "visibility-mean", "peak-contrast-min",
                             "peak-contrast-mean"}))
      ->capture_default_str();
  app.add_option("--efficiency", config.efficiency, "Detection efficiency eta in (0, 1]")
      ->capture_default_str();
  app.add_option("--workers", config.workers, "Worker threads, 0 = all cores (output unaffected)")
      ->capture_default_str();
  app.add_option("--out", config.output_path, "Output file, '-' for stdout")->capture_default_str();
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_flag("--degrees", degrees, "Read --phi-start/--phi-end in degrees");

  std::string figure;
  for (const char* name : {"scan", "mc", "fwhm", "sens", "fringes", "optimize"}) {
    app.add_subcommand(name, std::string("Run the ") + name + " experiment");
  }
  auto* reproduce = app.add_subcommand("reproduce", "Emit a figure dataset");
  reproduce->add_option("figure_id", figure, "Figure identifier")
      ->required()
      ->check(CLI::IsMember(figure_ids()));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }

  config.mode = mode_from_name(app.get_subcommands().front()->get_name());
  config.figure_id = figure;
  config.b = b;
  config.n_bins = bins;
  config.format = format == "json" ? Format::Json : Format::Csv;
  config.contrast = contrast_names().at(contrast);
  if (degrees) {
    config.phi_start *= std::numbers::pi / 180.0;
    config.phi_end *= std::numbers::pi / 180.0;
  }
  config.validate();
  return config;
}

}  // namespace superres::cli
