#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "superres/cli.hpp"
#include "superres/fringes.hpp"

namespace superres::cli {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Photon numbers used by the fig2c / fig2d sweeps. Chosen to cover the
// super-resolution threshold up to N = 1000 on a roughly logarithmic grid.
const std::vector<double> kSweepPhotonNumbers = {2, 3, 5, 8, 12, 19, 30, 50, 80, 132, 200, 300, 500, 1000};
const std::vector<double> kFringeScalingPhotonNumbers = {50, 100, 200, 400, 800};
constexpr double kFigureHalfWidth = 0.5;
constexpr double kFig3Spacing = 3.17;
constexpr int kFig3Bins = 5;
constexpr double kFig3PhotonNumber = 139.0;
constexpr double kFig2dCoefficient = 1.37;

Json optional_number(const std::optional<double>& value) {
  return value ? Json(*value) : Json(nullptr);
}

Json sensitivity_cell(const std::optional<double>& value) {
  return value ? Json(*value) : Json("inf");
}

Json scheme_json(const BinningScheme& scheme) {
  Json j;
  j["kind"] = scheme.kind() == BinningScheme::Kind::Binary ? "binary" : "multi";
  j["a"] = scheme.half_width();
  if (scheme.kind() == BinningScheme::Kind::Multi) {
    j["b"] = scheme.spacing();
    j["n_bins"] = scheme.n_bins();
  }
  j["lambda0"] = scheme.lambda0();
  return j;
}

Json scan_summary_json(const BinningScheme& scheme, const CoherentSource& source) {
  const ScanSummary summary = summarize(scheme, source);
  Json j;
  j["scheme"] = scheme_json(scheme);
  j["n_photons"] = source.mean_photon_number();
  j["fwhm"] = optional_number(summary.fwhm);
  j["fwhm_intensity"] = kIntensityFwhm;
  j["narrowing"] = summary.fwhm ? Json(kIntensityFwhm / *summary.fwhm) : Json(nullptr);
  j["fringe_count"] = summary.fringe_count;
  j["visibility_min"] = optional_number(summary.visibility_min);
  j["visibility_mean"] = optional_number(summary.visibility_mean);
  j["min_sensitivity"] = optional_number(summary.min_sensitivity);
  j["phi_at_min"] = optional_number(summary.phi_at_min);
  const double n = source.mean_photon_number();
  j["min_sensitivity_sqrt_n"] =
      summary.min_sensitivity && n > 0.0 ? Json(*summary.min_sensitivity * std::sqrt(n)) : Json(nullptr);
  j["shot_noise_limit"] = n > 0.0 ? Json(1.0 / std::sqrt(n)) : Json(nullptr);
  j["fwhm_a0_closed_form"] =
      n >= 2.0 * std::numbers::ln2 ? Json(fwhm_a0_closed_form(source)) : Json(nullptr);
  return j;
}

Json fringe_analysis_json(const FringeAnalysis& analysis) {
  Json j;
  j["fringe_count"] = analysis.count();
  if (analysis.count() == 0) {
    j["visibility_min"] = nullptr;
    j["visibility_mean"] = nullptr;
    j["peak_contrast_min"] = nullptr;
    j["peak_contrast_mean"] = nullptr;
  } else {
    j["visibility_min"] = analysis.visibility_min();
    j["visibility_mean"] = analysis.visibility_mean();
    j["peak_contrast_min"] = analysis.peak_contrast_min();
    j["peak_contrast_mean"] = analysis.peak_contrast_mean();
  }
  j["maximum"] = analysis.maximum;
  j["minimum"] = analysis.minimum;
  return j;
}

Dataset scan_dataset(const BinningScheme& scheme, const CoherentSource& source, const PhaseGrid& grid) {
  Dataset data;
  data.columns = {"phi", "response", "variance", "sensitivity"};
  for (const double phi : grid.points()) {
    data.rows.push_back({phi, response(scheme, source, phi), variance(scheme, source, phi),
                         sensitivity_cell(sensitivity(scheme, source, phi))});
  }
  data.summary = scan_summary_json(scheme, source);
  return data;
}

// Indices of a grid that cover exactly one period with the endpoint
// excluded, or nullopt when the grid is not a full period.
std::optional<std::size_t> one_period_prefix(const std::vector<double>& points) {
  if (points.size() < 3) return std::nullopt;
  const double span = points.back() - points.front();
  const double step = points[1] - points[0];
  const double tol = 1e-9 * kTwoPi;
  if (std::abs(span - kTwoPi) <= tol) return points.size() - 1;
  if (std::abs(span + step - kTwoPi) <= tol) return points.size();
  return std::nullopt;
}

Dataset mc_dataset(const RunConfig& config) {
  const BinningScheme scheme = config.scheme();
  const CoherentSource source = config.source();
  McConfig mc;
  mc.samples_per_point = config.samples;
  mc.master_seed = config.seed;
  mc.phase_grid = config.grid();
  mc.efficiency = config.efficiency;
  mc.workers = config.workers;
  try {
    mc.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  const EmpiricalCurve curve = simulate_scan(scheme, source, mc);

  Dataset data;
  data.columns = {"phi", "n_samples", "hits", "response_hat", "std_err"};
  for (const auto& point : curve.points) {
    data.rows.push_back({point.phi, point.n_samples, point.hits, point.response_hat, point.std_err});
  }

  const CoherentSource effective = source.attenuated(config.efficiency);
  const PullStatistics stats = pull_statistics(curve, scheme, effective);
  Json summary;
  summary["scheme"] = scheme_json(scheme);
  summary["n_photons"] = config.n_photons;
  summary["effective_n_photons"] = effective.mean_photon_number();
  summary["samples_per_point"] = config.samples;
  summary["seed"] = config.seed;
  summary["pulls"] = {{"points", stats.points},
                      {"mean", stats.mean},
                      {"variance", stats.variance},
                      {"within_four_sigma", stats.within_four_sigma}};

  const auto phis = curve.phis();
  const auto responses = curve.responses();
  Json empirical = nullptr;
  if (const auto count = one_period_prefix(phis)) {
    const std::span<const double> xs(phis.data(), *count);
    const std::span<const double> ys(responses.data(), *count);
    empirical = fringe_analysis_json(analyze_fringes_sampled(xs, ys, kTwoPi));
    try {
      const double width = fwhm_sampled(xs, ys, kTwoPi);
      empirical["fwhm"] = width;
      empirical["narrowing"] = kIntensityFwhm / width;
    } catch (const DomainError&) {
      empirical["fwhm"] = nullptr;
      empirical["narrowing"] = nullptr;
    }
  }
  summary["empirical"] = std::move(empirical);

  Json analytic = fringe_analysis_json(analyze_fringes(scheme, effective));
  try {
    const double width = fwhm(scheme, effective);
    analytic["fwhm"] = width;
    analytic["narrowing"] = kIntensityFwhm / width;
  } catch (const DomainError&) {
    analytic["fwhm"] = nullptr;
    analytic["narrowing"] = nullptr;
  }
  summary["analytic"] = std::move(analytic);

  if (curve.points.size() >= 3) {
    try {
      const auto estimates = empirical_sensitivity(curve);
      std::optional<double> best;
      std::optional<double> best_phi;
      std::size_t reliable = 0;
      for (const auto& e : estimates) {
        if (!e.sensitivity) continue;
        ++reliable;
        if (!best || *e.sensitivity < *best) {
          best = e.sensitivity;
          best_phi = e.phi;
        }
      }
      summary["empirical_sensitivity"] = {{"reliable_points", reliable},
                                          {"min", optional_number(best)},
                                          {"phi_at_min", optional_number(best_phi)}};
    } catch (const DomainError&) {
      summary["empirical_sensitivity"] = nullptr;
    }
  }
  data.summary = std::move(summary);
  return data;
}

Dataset fwhm_dataset(const RunConfig& config) {
  const BinningScheme scheme = config.scheme();
  const CoherentSource source = config.source();
  const double n = source.mean_photon_number();
  const double width = fwhm(scheme, source);
  const bool resolvable = n >= 2.0 * std::numbers::ln2;
  Dataset data;
  data.columns = {"n_photons", "a", "fwhm", "narrowing", "fwhm_a0", "fwhm_a0_closed_form", "fwhm_intensity"};
  data.rows.push_back({n, config.a, width, kIntensityFwhm / width, fwhm_a0(source),
                       resolvable ? Json(fwhm_a0_closed_form(source)) : Json(nullptr), kIntensityFwhm});
  data.summary = scan_summary_json(scheme, source);
  return data;
}

Dataset sens_dataset(const RunConfig& config) {
  const BinningScheme scheme = config.scheme();
  const CoherentSource source = config.source();
  const double n = source.mean_photon_number();
  if (!(n > 0.0)) throw ConfigError("sens requires --n-photons > 0");
  const numerics::Minimum best = minimum_sensitivity(scheme, source);
  if (!std::isfinite(best.value)) throw ConvergenceError("no finite sensitivity found", best.value, 0.0);
  const ClosedFormMinimum closed = sensitivity_min_closed_form(source);
  const double root_n = std::sqrt(n);
  Dataset data;
  data.columns = {"n_photons",           "a",
                  "min_sensitivity",     "phi_at_min",
                  "min_sensitivity_sqrt_n", "shot_noise_limit",
                  "closed_form_a0_min",  "closed_form_a0_phi_min",
                  "closed_form_a0_min_sqrt_n"};
  data.rows.push_back({n, config.a, best.value, best.x, best.value * root_n, 1.0 / root_n,
                       closed.delta_phi_min, closed.phi_min, closed.delta_phi_min * root_n});
  data.summary = scan_summary_json(scheme, source);
  data.summary["closed_form_large_n_coefficient"] = closed_form_large_n_coefficient();
  return data;
}

Dataset fringes_dataset(const RunConfig& config) {
  const BinningScheme scheme = config.scheme();
  const CoherentSource source = config.source();
  const FringeAnalysis analysis = analyze_fringes(scheme, source);
  Dataset data;
  data.columns = {"phi_peak", "peak", "trough", "visibility", "peak_contrast"};
  for (const auto& f : analysis.fringes) {
    data.rows.push_back({f.phi_peak, f.peak, f.trough, f.visibility, f.peak_contrast});
  }
  data.summary = fringe_analysis_json(analysis);
  data.summary["scheme"] = scheme_json(scheme);
  data.summary["n_photons"] = config.n_photons;
  return data;
}

SpacingSearch search_for(const RunConfig& config, double threshold) {
  SpacingSearch search;
  search.half_width = config.a;
  search.threshold = threshold;
  search.criterion = config.contrast;
  search.workers = config.workers;
  return search;
}

Dataset optimize_dataset(const RunConfig& config) {
  const CoherentSource source = config.source();
  const SpacingResult best = optimize_spacing(source, search_for(config, config.visibility_threshold));
  Dataset data;
  data.columns = {"n_photons",      "a",               "threshold",         "contrast",
                  "multi",          "b",               "n_bins",            "fringes",
                  "visibility_min", "visibility_mean", "peak_contrast_min", "peak_contrast_mean"};
  data.rows.push_back({config.n_photons, config.a, config.visibility_threshold, to_string(config.contrast),
                       best.multi, best.multi ? Json(best.spacing) : Json(nullptr), best.n_bins,
                       best.fringes, best.visibility_min, best.visibility_mean, best.peak_contrast_min,
                       best.peak_contrast_mean});
  data.summary = scan_summary_json(best.scheme(config.a), source);
  return data;
}

Dataset fig2_response(const RunConfig& config, double n_photons) {
  const BinningScheme scheme = BinningScheme::binary(kFigureHalfWidth);
  const CoherentSource source(n_photons);
  Dataset data;
  data.columns = {"phi", "response", "response_a0", "intensity_normalized", "sensitivity", "shot_noise_limit"};
  const double snl = 1.0 / std::sqrt(n_photons);
  for (const double phi : config.grid().points()) {
    data.rows.push_back({phi, response(scheme, source, phi), response_a0(source, phi),
                         intensity_response(source, phi) / n_photons,
                         sensitivity_cell(sensitivity(scheme, source, phi)), snl});
  }
  data.summary = scan_summary_json(scheme, source);
  return data;
}

Dataset fig2c() {
  const BinningScheme scheme = BinningScheme::binary(kFigureHalfWidth);
  Dataset data;
  data.columns = {"n_photons", "fwhm", "fwhm_a0_theory", "rayleigh"};
  for (const double n : kSweepPhotonNumbers) {
    const CoherentSource source(n);
    data.rows.push_back({n, fwhm(scheme, source), fwhm_a0_closed_form(source), kIntensityFwhm});
  }
  data.summary["a"] = kFigureHalfWidth;
  data.summary["n_grid"] = "default sweep grid";
  return data;
}

Dataset fig2d() {
  const BinningScheme scheme = BinningScheme::binary(kFigureHalfWidth);
  Dataset data;
  data.columns = {"n_photons", "min_sensitivity", "theory", "shot_noise_limit", "closed_form_a0"};
  std::vector<double> ns;
  std::vector<double> mins;
  for (const double n : kSweepPhotonNumbers) {
    const CoherentSource source(n);
    const double best = minimum_sensitivity(scheme, source).value;
    ns.push_back(n);
    mins.push_back(best);
    data.rows.push_back({n, best, kFig2dCoefficient / std::sqrt(n), 1.0 / std::sqrt(n),
                         sensitivity_min_closed_form(source).delta_phi_min});
  }
  data.summary["a"] = kFigureHalfWidth;
  data.summary["n_grid"] = "default sweep grid";
  data.summary["fitted_coefficient"] = numerics::fit_prefactor(ns, mins, -0.5);
  const auto fit = numerics::fit_power_law(ns, mins);
  data.summary["fitted_exponent"] = fit.exponent;
  return data;
}

BinningScheme fig3_scheme() { return BinningScheme::multi(kFigureHalfWidth, kFig3Spacing, kFig3Bins); }

Dataset fig3a(const RunConfig& config) {
  const BinningScheme scheme = fig3_scheme();
  const CoherentSource source(kFig3PhotonNumber);
  const double samples = static_cast<double>(config.samples);
  Dataset data;
  data.columns = {"phi", "response", "band_lo", "band_hi", "intensity_normalized"};
  for (const double phi : config.grid().points()) {
    const double r = response(scheme, source, phi);
    const double half_band = std::sqrt(std::max(variance(scheme, source, phi), 0.0) / samples);
    data.rows.push_back({phi, r, r - half_band, r + half_band, intensity_response(source, phi) / kFig3PhotonNumber});
  }
  data.summary = scan_summary_json(scheme, source);
  const FringeAnalysis analysis = analyze_fringes(scheme, source);
  data.summary["peak_contrast_min"] = analysis.peak_contrast_min();
  data.summary["peak_contrast_mean"] = analysis.peak_contrast_mean();
  data.summary["band"] = "+-1 standard error at samples per point";
  data.summary["samples_per_point"] = config.samples;
  return data;
}

Dataset fig3b(const RunConfig& config) {
  const BinningScheme scheme = fig3_scheme();
  const CoherentSource source(kFig3PhotonNumber);
  Dataset data;
  data.columns = {"phi", "sensitivity", "shot_noise_limit"};
  const double snl = 1.0 / std::sqrt(kFig3PhotonNumber);
  for (const double phi : config.grid().points()) {
    data.rows.push_back({phi, sensitivity_cell(sensitivity(scheme, source, phi)), snl});
  }
  data.summary = scan_summary_json(scheme, source);
  return data;
}

Dataset fig3c(const RunConfig& config) {
  constexpr double kHigh = 0.95;
  constexpr double kLow = 0.90;
  Dataset data;
  data.columns = {"n_photons", "fringes_095", "b_095", "bins_095", "fringes_090", "b_090", "bins_090"};
  std::vector<double> ns;
  std::vector<double> m_high;
  std::vector<double> m_low;
  RunConfig base = config;
  base.a = kFigureHalfWidth;
  for (const double n : kFringeScalingPhotonNumbers) {
    const CoherentSource source(n);
    const SpacingResult high = optimize_spacing(source, search_for(base, kHigh));
    const SpacingResult low = optimize_spacing(source, search_for(base, kLow));
    ns.push_back(n);
    m_high.push_back(high.fringes);
    m_low.push_back(low.fringes);
    data.rows.push_back({n, high.fringes, high.multi ? Json(high.spacing) : Json(nullptr), high.n_bins,
                         low.fringes, low.multi ? Json(low.spacing) : Json(nullptr), low.n_bins});
  }
  const auto fit_high = numerics::fit_power_law(ns, m_high);
  const auto fit_low = numerics::fit_power_law(ns, m_low);
  data.summary["a"] = kFigureHalfWidth;
  data.summary["contrast"] = to_string(config.contrast);
  data.summary["threshold_095"] = {{"exponent", fit_high.exponent},
                                   {"prefactor", fit_high.prefactor},
                                   {"sqrt_prefactor", numerics::fit_prefactor(ns, m_high, 0.5)}};
  data.summary["threshold_090"] = {{"exponent", fit_low.exponent},
                                   {"prefactor", fit_low.prefactor},
                                   {"sqrt_prefactor", numerics::fit_prefactor(ns, m_low, 0.5)}};
  return data;
}

Dataset reproduce_dataset(const RunConfig& config) {
  const std::string& id = config.figure_id;
  if (id == "fig2a") return fig2_response(config, 19.0);
  if (id == "fig2b") return fig2_response(config, 132.0);
  if (id == "fig2c") return fig2c();
  if (id == "fig2d") return fig2d();
  if (id == "fig3a") return fig3a(config);
  if (id == "fig3b") return fig3b(config);
  if (id == "fig3c") return fig3c(config);
  throw ConfigError("unknown figure id '" + id + "'");
}

std::string escape_message(const std::string& text) {
  std::string escaped;
  for (const char c : text) {
    if (c == '"' || c == '\\') escaped.push_back('\\');
    escaped.push_back(c == '\n' ? ' ' : c);
  }
  return escaped;
}

int report(std::ostream& err, const char* kind, const std::string& message, int code) {
  err << "error: kind=" << kind << " message=\"" << escape_message(message) << "\"\n";
  return code;
}

}  // namespace

const std::vector<std::string>& figure_ids() {
  static const std::vector<std::string> ids = {"fig2a", "fig2b", "fig2c", "fig2d", "fig3a", "fig3b", "fig3c"};
  return ids;
}

Dataset build_dataset(const RunConfig& config) {
  switch (config.mode) {
    case Mode::Scan: return scan_dataset(config.scheme(), config.source(), config.grid());
    case Mode::Mc: return mc_dataset(config);
    case Mode::Fwhm: return fwhm_dataset(config);
    case Mode::Sens: return sens_dataset(config);
    case Mode::Fringes: return fringes_dataset(config);
    case Mode::Optimize: return optimize_dataset(config);
    case Mode::Reproduce: return reproduce_dataset(config);
  }
  throw ConfigError("unknown mode");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    const auto config = parse_arguments(args, out);
    if (!config) return kExitOk;
    const Dataset data = build_dataset(*config);

    std::ostringstream rendered;
    if (config->format == Format::Json) {
      write_json(data, *config, rendered);
    } else {
      write_csv(data, rendered);
    }

    if (config->output_path == "-") {
      out << rendered.str();
      out.flush();
      if (!out) throw IoError("failed writing to standard output");
    } else {
      std::ofstream file(config->output_path, std::ios::binary | std::ios::trunc);
      if (!file) throw IoError("cannot open '" + config->output_path + "' for writing");
      file << rendered.str();
      file.close();
      if (!file) throw IoError("failed writing '" + config->output_path + "'");
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    return report(err, "config", e.what(), kExitConfig);
  } catch (const IoError& e) {
    return report(err, "io", e.what(), kExitIo);
  } catch (const ConvergenceError& e) {
    return report(err, "numeric", e.what(), kExitNumeric);
  } catch (const DomainError& e) {
    return report(err, "config", e.what(), kExitConfig);
  } catch (const std::exception& e) {
    return report(err, "internal", e.what(), kExitFailure);
  }
}

}  // namespace superres::cli
