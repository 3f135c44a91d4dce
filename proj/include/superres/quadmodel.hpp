#pragma once

// Phase-quadrature statistics at the measured interferometer output port.
//
// Convention: vacuum quadrature variance 1/4, and the output mean of the
// phase quadrature is (sqrt(N)/2) sin(phi). With these two constants the
// accepted probability of the window |p| <= a, divided by erf(sqrt(2) a),
// tends to exp(-N sin^2(phi) / 2) as a -> 0, which fixes the convention
// uniquely. All functions below are 2*pi periodic in phi.

#include <numbers>

namespace superres {

/// Vacuum variance of a quadrature in the units used throughout.
inline constexpr double kVacuumVariance = 0.25;
/// Standard deviation matching kVacuumVariance.
inline constexpr double kVacuumStdDev = 0.5;
/// Limits standing in for +-infinity are placed this many standard
/// deviations from the mean; the neglected Gaussian mass is below 1e-30.
inline constexpr double kTailSigmas = 12.0;

/// Input coherent state, described only by its mean photon number.
class CoherentSource {
public:
  /// Throws DomainError unless N is finite and non-negative.
  explicit CoherentSource(double mean_photon_number);

  double mean_photon_number() const noexcept { return n_; }

  /// Source after a loss channel of transmission eta in (0, 1].
  CoherentSource attenuated(double eta) const;

private:
  double n_;
};

/// Mean of the measured phase quadrature, (sqrt(N)/2) sin(phi).
double output_mean_p(const CoherentSource& source, double phi);

/// d/dphi of output_mean_p, (sqrt(N)/2) cos(phi).
double output_mean_p_slope(const CoherentSource& source, double phi);

/// Gaussian density of quadrature outcome p (variance 1/4).
double p_density(double p, const CoherentSource& source, double phi);

/// Same density centred at an explicit mean.
double gaussian_density(double p, double mean);

/// Probability that the quadrature outcome lies in [lo, hi].
/// Throws DomainError when lo > hi.
double bin_probability(double lo, double hi, const CoherentSource& source, double phi);

/// Probability mass of [lo, hi] for a variance-1/4 Gaussian centred at `mean`.
/// Computed from erfc on the tail side so small masses keep their relative
/// precision.
double interval_mass(double lo, double hi, double mean);

/// Mean photon count N cos^2(phi/2) of plain intensity detection.
double intensity_response(const CoherentSource& source, double phi);

/// FWHM of the intensity fringe in phi.
inline constexpr double kIntensityFwhm = std::numbers::pi;

}  // namespace superres
