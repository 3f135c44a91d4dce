#include "superres/fringes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace superres {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double contrast_visibility(double peak, double trough) {
  const double sum = peak + trough;
  return sum > 0.0 ? (peak - trough) / sum : 0.0;
}

double contrast_peak(double peak, double trough) { return peak > 0.0 ? 1.0 - trough / peak : 0.0; }

template <class Field>
double mean_of(const std::vector<Fringe>& fringes, Field field) {
  if (fringes.empty()) return 0.0;
  double s = 0.0;
  for (const auto& f : fringes) s += f.*field;
  return s / static_cast<double>(fringes.size());
}

template <class Field>
double min_of(const std::vector<Fringe>& fringes, Field field) {
  double m = kInf;
  for (const auto& f : fringes) m = std::min(m, f.*field);
  return fringes.empty() ? 0.0 : m;
}

// Circular index range (from, to] minimum, with the arg index.
std::pair<double, std::size_t> circular_min(std::span<const double> ys, std::size_t from,
                                            std::size_t to) {
  const std::size_t n = ys.size();
  std::size_t steps = (to + n - from) % n;
  if (steps == 0) steps = n;
  double best = kInf;
  std::size_t arg = from;
  for (std::size_t s = 1; s <= steps; ++s) {
    const std::size_t i = (from + s) % n;
    if (ys[i] < best) {
      best = ys[i];
      arg = i;
    }
  }
  return {best, arg};
}

FringeAnalysis build_analysis(std::span<const double> xs, std::span<const double> ys, double period,
                              const std::optional<numerics::RealFunction>& curve) {
  FringeAnalysis out;
  const auto [lo_it, hi_it] = std::minmax_element(ys.begin(), ys.end());
  out.maximum = *hi_it;
  out.minimum = *lo_it;
  const double range = out.maximum - out.minimum;
  if (!(range > 0.0)) return out;

  const auto peaks =
      numerics::find_local_maxima(xs, ys, period, kFringeProminenceFraction * range, curve);
  if (peaks.empty()) return out;
  const double spacing = period / static_cast<double>(xs.size());

  // Troughs between consecutive peaks (circular), polished on the curve.
  const std::size_t m = peaks.size();
  std::vector<double> troughs(m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t from = peaks[i].index;
    const std::size_t to = peaks[(i + 1) % m].index;
    auto [value, arg] = circular_min(ys, from, to);
    if (curve) {
      try {
        const auto polished = numerics::golden_section_min(*curve, xs[arg] - spacing,
                                                           xs[arg] + spacing, {1e-12, 1e-12, 200});
        value = std::min(value, polished.value);
      } catch (const ConvergenceError&) {
      }
    }
    troughs[i] = value;
  }
  out.maximum = std::max(out.maximum, std::max_element(peaks.begin(), peaks.end(), [](auto& a, auto& b) {
                                        return a.y < b.y;
                                      })->y);
  out.minimum = std::min(out.minimum, *std::min_element(troughs.begin(), troughs.end()));

  for (std::size_t i = 0; i < m; ++i) {
    const double right = troughs[i];
    const double left = troughs[(i + m - 1) % m];
    Fringe f;
    f.phi_peak = peaks[i].x;
    f.peak = peaks[i].y;
    f.trough = std::min(left, right);
    f.visibility = contrast_visibility(f.peak, f.trough);
    f.peak_contrast = contrast_peak(f.peak, f.trough);
    out.fringes.push_back(f);
  }
  return out;
}

}  // namespace

double FringeAnalysis::visibility_min() const { return min_of(fringes, &Fringe::visibility); }
double FringeAnalysis::visibility_mean() const { return mean_of(fringes, &Fringe::visibility); }
double FringeAnalysis::peak_contrast_min() const { return min_of(fringes, &Fringe::peak_contrast); }
double FringeAnalysis::peak_contrast_mean() const { return mean_of(fringes, &Fringe::peak_contrast); }

FringeAnalysis analyze_fringes(const numerics::RealFunction& curve, std::size_t grid_points) {
  const auto xs = numerics::periodic_grid(0.0, kTwoPi, grid_points);
  std::vector<double> ys(xs.size());
  std::transform(xs.begin(), xs.end(), ys.begin(), curve);
  return build_analysis(xs, ys, kTwoPi, curve);
}

FringeAnalysis analyze_fringes_sampled(std::span<const double> xs, std::span<const double> ys,
                                       double period) {
  if (xs.size() != ys.size()) throw DomainError("analyze_fringes_sampled: length mismatch");
  if (xs.size() < 3) throw DomainError("analyze_fringes_sampled: need at least 3 samples");
  return build_analysis(xs, ys, period, std::nullopt);
}

FringeAnalysis analyze_fringes(const BinningScheme& scheme, const CoherentSource& source) {
  return analyze_fringes([&](double phi) { return response(scheme, source, phi); });
}

int count_fringes(const BinningScheme& scheme, const CoherentSource& source) {
  return analyze_fringes(scheme, source).count();
}

VisibilityStats visibility(const BinningScheme& scheme, const CoherentSource& source) {
  const auto analysis = analyze_fringes(scheme, source);
  if (analysis.fringes.empty()) throw DomainError("visibility: curve has no fringe");
  return {analysis.visibility_min(), analysis.visibility_mean()};
}

double fwhm_a0_closed_form(const CoherentSource& source) {
  const double n = source.mean_photon_number();
  const double threshold = 2.0 * std::numbers::ln2;
  if (n < threshold) {
    throw DomainError("closed-form FWHM requires N >= 2 ln 2");
  }
  return 2.0 * std::asin(std::sqrt(threshold / n));
}

double fwhm_numeric(const numerics::RealFunction& curve) {
  const auto xs = numerics::periodic_grid(-std::numbers::pi, kTwoPi, kFringeGridPoints);
  double lowest = kInf;
  std::size_t arg = 0;
  double highest = -kInf;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double y = curve(xs[i]);
    highest = std::max(highest, y);
    if (y < lowest) {
      lowest = y;
      arg = i;
    }
  }
  const double spacing = kTwoPi / static_cast<double>(kFringeGridPoints);
  try {
    lowest = std::min(lowest, numerics::golden_section_min(curve, xs[arg] - spacing,
                                                           xs[arg] + spacing, {1e-12, 1e-12, 200})
                                  .value);
  } catch (const ConvergenceError&) {
  }
  const double peak = curve(0.0);
  if (!(highest - lowest >= 1e-12) || !(peak - lowest >= 1e-12)) {
    throw DomainError("fwhm: curve is flat");
  }
  const double half = lowest + 0.5 * (peak - lowest);

  // First grid point to the right of 0 that falls below the half level.
  const auto right = numerics::linspace(0.0, std::numbers::pi, kFringeGridPoints + 1);
  for (std::size_t i = 1; i < right.size(); ++i) {
    if (curve(right[i]) < half) {
      const double crossing = numerics::find_root([&](double phi) { return curve(phi) - half; },
                                                  right[i - 1], right[i], {1e-10, 1e-12, 200});
      return 2.0 * crossing;
    }
  }
  throw DomainError("fwhm: no half-level crossing on (0, pi]");
}

double fwhm(const BinningScheme& scheme, const CoherentSource& source) {
  return fwhm_numeric([&](double phi) { return response(scheme, source, phi); });
}

double fwhm_a0(const CoherentSource& source) {
  return fwhm_numeric([&](double phi) { return response_a0(source, phi); });
}

double fwhm_sampled(std::span<const double> xs, std::span<const double> ys, double period) {
  const std::size_t n = xs.size();
  if (n != ys.size() || n < 3) throw DomainError("fwhm_sampled: need matching samples, at least 3");
  const auto [lo_it, hi_it] = std::minmax_element(ys.begin(), ys.end());
  if (!(*hi_it - *lo_it >= 1e-12)) throw DomainError("fwhm_sampled: curve is flat");

  // Sample nearest phi = 0 (mod period), then climb to the local maximum.
  auto wrapped_distance = [&](double x) {
    const double r = std::remainder(x, period);
    return std::abs(r);
  };
  std::size_t at = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (wrapped_distance(xs[i]) < wrapped_distance(xs[at])) at = i;
  }
  for (std::size_t guard = 0; guard < n; ++guard) {
    const std::size_t l = (at + n - 1) % n;
    const std::size_t r = (at + 1) % n;
    if (ys[l] > ys[at] && ys[l] >= ys[r]) {
      at = l;
    } else if (ys[r] > ys[at]) {
      at = r;
    } else {
      break;
    }
  }
  const double peak = ys[at];
  const double half = *lo_it + 0.5 * (peak - *lo_it);
  if (!(peak - *lo_it >= 1e-12)) throw DomainError("fwhm_sampled: peak is flat");

  // Positions unwrapped relative to the peak.
  auto offset = [&](std::size_t i, int direction) {
    if (i == at) return 0.0;
    double d = xs[i] - xs[at];
    if (direction > 0 && d < 0.0) d += period;
    if (direction < 0 && d > 0.0) d -= period;
    return d;
  };
  auto crossing = [&](int direction) {
    std::size_t prev = at;
    for (std::size_t s = 1; s < n; ++s) {
      const std::size_t i = direction > 0 ? (at + s) % n : (at + n - s) % n;
      if (ys[i] < half) {
        const double x0 = offset(prev, direction);
        const double x1 = offset(i, direction);
        const double t = (ys[prev] - half) / (ys[prev] - ys[i]);
        return x0 + t * (x1 - x0);
      }
      prev = i;
    }
    throw DomainError("fwhm_sampled: no half-level crossing");
  };
  return crossing(+1) - crossing(-1);
}

numerics::Minimum minimum_sensitivity(const BinningScheme& scheme, const CoherentSource& source) {
  return numerics::minimize_1d(
      [&](double phi) { return sensitivity(scheme, source, phi).value_or(kInf); }, 0.0,
      std::numbers::pi / 2.0, {1e-12, 1e-12, 200}, kFringeGridPoints);
}

ScanSummary summarize(const BinningScheme& scheme, const CoherentSource& source) {
  ScanSummary s;
  const auto analysis = analyze_fringes(scheme, source);
  s.fringe_count = analysis.count();
  if (s.fringe_count == 0) return s;
  s.visibility_min = analysis.visibility_min();
  s.visibility_mean = analysis.visibility_mean();
  s.fwhm = fwhm(scheme, source);
  try {
    const auto best = minimum_sensitivity(scheme, source);
    s.min_sensitivity = best.value;
    s.phi_at_min = best.x;
  } catch (const DomainError&) {
    // sensitivity diverges everywhere
  }
  return s;
}

}  // namespace superres
