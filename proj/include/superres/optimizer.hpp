#pragma once

#include <cstddef>

#include "superres/binning.hpp"
#include "superres/fringes.hpp"

namespace superres {

/// Which fringe-contrast figure has to clear the threshold.
enum class ContrastCriterion {
  VisibilityMin,     ///< min over fringes of (peak - trough)/(peak + trough)
  VisibilityMean,    ///< mean of the same
  PeakContrastMin,   ///< min over fringes of 1 - trough/peak
  PeakContrastMean,  ///< mean of the same
};

struct SpacingSearch {
  double half_width = 0.5;
  double threshold = 0.95;
  ContrastCriterion criterion = ContrastCriterion::VisibilityMin;
  std::size_t coarse_points = 200;
  unsigned workers = 1;
};

struct SpacingResult {
  /// Multi-bin scheme found; binary (b = 0, n_bins = 1) when nothing qualifies.
  bool multi = false;
  double spacing = 0.0;
  int n_bins = 1;
  int fringes = 2;
  double visibility_min = 0.0;
  double visibility_mean = 0.0;
  double peak_contrast_min = 0.0;
  double peak_contrast_mean = 0.0;

  BinningScheme scheme(double half_width) const;
};

/// Spacing b (and bin count) maximising the number of fringes per period
/// while the chosen contrast figure stays at or above the threshold.
///
/// b is scanned over (2a, sqrt(N)/2 + 3a] on a coarse grid; for each b the
/// bin count covering the mean sweep, n = 2 floor((sqrt(N)/2)/b) + 1, and its
/// two odd neighbours are tried. Runs of grid points sharing a fringe count
/// larger than the best feasible one are then refined by golden-section
/// search on the contrast. Ties go to the smallest b. Throws DomainError for
/// N <= 0 or a threshold outside (0, 1).
SpacingResult optimize_spacing(const CoherentSource& source, const SpacingSearch& search = {});

/// Value of `criterion` for an analysed curve.
double contrast_figure(const FringeAnalysis& analysis, ContrastCriterion criterion);

}  // namespace superres
