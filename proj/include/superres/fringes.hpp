#pragma once

// Fringe-level figures of merit: resolution (FWHM), fringe count, visibility.
//
// Analytic curves are examined over one 2*pi period on a 4096-point grid;
// peak and trough positions are then polished by golden-section search on
// the underlying function. Sampled curves (Monte Carlo output) use the grid
// values only.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "superres/binning.hpp"
#include "superres/numerics.hpp"

namespace superres {

inline constexpr std::size_t kFringeGridPoints = 4096;
/// Peaks whose prominence is below this fraction of (max - min) are ignored.
inline constexpr double kFringeProminenceFraction = 0.01;

struct Fringe {
  double phi_peak = 0.0;
  double peak = 0.0;
  /// Deeper of the two troughs either side of the peak.
  double trough = 0.0;
  /// (peak - trough) / (peak + trough).
  double visibility = 0.0;
  /// 1 - trough / peak: contrast measured against the peak alone.
  double peak_contrast = 0.0;
};

struct FringeAnalysis {
  std::vector<Fringe> fringes;
  double maximum = 0.0;
  double minimum = 0.0;

  int count() const noexcept { return static_cast<int>(fringes.size()); }
  double visibility_min() const;
  double visibility_mean() const;
  double peak_contrast_min() const;
  double peak_contrast_mean() const;
};

/// Fringes of a 2*pi-periodic function over [0, 2*pi).
FringeAnalysis analyze_fringes(const numerics::RealFunction& curve,
                               std::size_t grid_points = kFringeGridPoints);

/// Fringes of samples covering one period [xs.front(), xs.front() + period).
FringeAnalysis analyze_fringes_sampled(std::span<const double> xs, std::span<const double> ys,
                                       double period);

FringeAnalysis analyze_fringes(const BinningScheme& scheme, const CoherentSource& source);

/// Number of fringes of <Pi>(phi) per 2*pi.
int count_fringes(const BinningScheme& scheme, const CoherentSource& source);

struct VisibilityStats {
  double min = 0.0;
  double mean = 0.0;
};

/// Fringe visibility over one period; throws DomainError if there is no fringe.
VisibilityStats visibility(const BinningScheme& scheme, const CoherentSource& source);

/// 2 arcsin(sqrt(2 ln 2 / N)): FWHM of the a -> 0 fringe. Throws DomainError
/// for N < 2 ln 2.
double fwhm_a0_closed_form(const CoherentSource& source);

/// FWHM of the fringe centred at phi = 0 of an even, 2*pi-periodic curve,
/// measured at min + (max - min)/2 with min over the full period. The
/// crossing is bisected to 1e-10 rad. Throws DomainError for flat curves.
double fwhm_numeric(const numerics::RealFunction& curve);

double fwhm(const BinningScheme& scheme, const CoherentSource& source);
double fwhm_a0(const CoherentSource& source);

/// FWHM of the sampled fringe nearest phi = 0, with linear interpolation of
/// both half-level crossings. Samples must cover one period.
double fwhm_sampled(std::span<const double> xs, std::span<const double> ys, double period);

/// Figures of merit of an analytic scan. Fields a flat curve cannot
/// define (no fringe, no finite sensitivity) are left empty.
struct ScanSummary {
  std::optional<double> fwhm;
  std::optional<double> visibility_min;
  std::optional<double> visibility_mean;
  int fringe_count = 0;
  /// Minimum of the sensitivity over phi and where it occurs (in [0, pi/2]).
  std::optional<double> min_sensitivity;
  std::optional<double> phi_at_min;
};

ScanSummary summarize(const BinningScheme& scheme, const CoherentSource& source);

/// Minimum sensitivity over phi in [0, pi/2]; the response is even and
/// symmetric about pi/2, so this covers the whole period.
numerics::Minimum minimum_sensitivity(const BinningScheme& scheme, const CoherentSource& source);

}  // namespace superres
