#include "superres/quadmodel.hpp"

#include <cmath>
#include <string>

#include "superres/numerics.hpp"

namespace superres {

namespace {
constexpr double kSqrt2 = std::numbers::sqrt2;
// sqrt(2/pi): peak of a Gaussian with sigma = 1/2.
const double kDensityPeak = std::sqrt(2.0 / std::numbers::pi);
}  // namespace

CoherentSource::CoherentSource(double mean_photon_number) : n_(mean_photon_number) {
  if (!std::isfinite(n_) || n_ < 0.0) {
    throw DomainError("mean photon number must be finite and non-negative, got " +
                      std::to_string(mean_photon_number));
  }
}

CoherentSource CoherentSource::attenuated(double eta) const {
  if (!(eta > 0.0 && eta <= 1.0)) throw DomainError("efficiency must lie in (0, 1]");
  return CoherentSource(eta * n_);
}

double output_mean_p(const CoherentSource& source, double phi) {
  return 0.5 * std::sqrt(source.mean_photon_number()) * std::sin(phi);
}

double output_mean_p_slope(const CoherentSource& source, double phi) {
  return 0.5 * std::sqrt(source.mean_photon_number()) * std::cos(phi);
}

double gaussian_density(double p, double mean) {
  const double d = p - mean;
  return kDensityPeak * std::exp(-2.0 * d * d);
}

double p_density(double p, const CoherentSource& source, double phi) {
  return gaussian_density(p, output_mean_p(source, phi));
}

double interval_mass(double lo, double hi, double mean) {
  if (lo > hi) throw DomainError("interval requires lo <= hi");
  if (lo == hi) return 0.0;
  const double u = kSqrt2 * (lo - mean);
  const double v = kSqrt2 * (hi - mean);
  if (u >= 0.0) return 0.5 * (numerics::erfc(u) - numerics::erfc(v));
  if (v <= 0.0) return 0.5 * (numerics::erfc(-v) - numerics::erfc(-u));
  return 0.5 * (numerics::erf(v) - numerics::erf(u));
}

double bin_probability(double lo, double hi, const CoherentSource& source, double phi) {
  return interval_mass(lo, hi, output_mean_p(source, phi));
}

double intensity_response(const CoherentSource& source, double phi) {
  const double c = std::cos(0.5 * phi);
  return source.mean_photon_number() * c * c;
}

}  // namespace superres
