#include "superres/binning.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "superres/numerics.hpp"

namespace superres {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_half_width(double a) {
  if (!std::isfinite(a) || !(a > 0.0)) {
    throw DomainError("bin half-width a must be finite and positive, got " + std::to_string(a));
  }
}

// Slope of q in units of mu'(phi), with a bound on its rounding noise.
struct SlopeTerms {
  double sum = 0.0;
  double magnitude = 0.0;
};

SlopeTerms slope_terms(const BinningScheme& scheme, double mean) {
  SlopeTerms t;
  for (const auto& w : scheme.windows()) {
    const double rlo = gaussian_density(w.lo, mean);
    const double rhi = gaussian_density(w.hi, mean);
    t.sum += rlo - rhi;
    t.magnitude += rlo + rhi;
  }
  return t;
}

bool slope_vanishes(const CoherentSource& source, double phi, const SlopeTerms& terms) {
  if (terms.sum == 0.0) return true;
  if (std::abs(terms.sum) <= 8.0 * kEps * terms.magnitude) return true;
  // cos(phi) at the float nearest pi/2 is ~6e-17 rather than zero.
  return std::abs(std::cos(phi)) <= 8.0 * kEps || source.mean_photon_number() == 0.0;
}

}  // namespace

BinningScheme::BinningScheme(Kind kind, double a, double b, std::vector<Interval> windows)
    : kind_(kind), a_(a), b_(b), lambda0_(1.0 / numerics::erf(std::numbers::sqrt2 * a)),
      windows_(std::move(windows)) {}

BinningScheme BinningScheme::binary(double half_width) {
  require_half_width(half_width);
  return BinningScheme(Kind::Binary, half_width, 0.0, {{-half_width, half_width}});
}

BinningScheme BinningScheme::multi(double half_width, double spacing, int n_bins) {
  require_half_width(half_width);
  if (n_bins < 1 || n_bins % 2 == 0) {
    throw DomainError("number of bins must be a positive odd integer, got " + std::to_string(n_bins));
  }
  if (!std::isfinite(spacing) || !(spacing > 2.0 * half_width)) {
    throw DomainError("bin spacing b must exceed 2a so that bins are disjoint");
  }
  const int half = (n_bins - 1) / 2;
  std::vector<Interval> windows;
  windows.reserve(static_cast<std::size_t>(n_bins));
  for (int k = -half; k <= half; ++k) {
    const double c = spacing * k;
    windows.push_back({c - half_width, c + half_width});
  }
  return BinningScheme(Kind::Multi, half_width, spacing, std::move(windows));
}

std::vector<double> BinningScheme::centers() const {
  std::vector<double> out;
  out.reserve(windows_.size());
  for (const auto& w : windows_) out.push_back(0.5 * (w.lo + w.hi));
  return out;
}

std::optional<int> BinningScheme::window_of(double p) const {
  if (windows_.size() == 1) {
    if (std::abs(p) <= a_) return 0;
    return std::nullopt;
  }
  const int half = (n_bins() - 1) / 2;
  const double k = std::nearbyint(p / b_);
  if (std::abs(k) > half) return std::nullopt;
  if (std::abs(p - b_ * k) > a_) return std::nullopt;
  return static_cast<int>(k) + half;
}

double accepted_probability(const BinningScheme& scheme, const CoherentSource& source, double phi) {
  const double mean = output_mean_p(source, phi);
  double q = 0.0;
  for (const auto& w : scheme.windows()) q += interval_mass(w.lo, w.hi, mean);
  return q;
}

double rejected_probability(const BinningScheme& scheme, const CoherentSource& source, double phi) {
  const double mean = output_mean_p(source, phi);
  const auto& w = scheme.windows();
  double r = interval_mass(-kInf, w.front().lo, mean) + interval_mass(w.back().hi, kInf, mean);
  for (std::size_t i = 1; i < w.size(); ++i) r += interval_mass(w[i - 1].hi, w[i].lo, mean);
  return r;
}

double accepted_probability_slope(const BinningScheme& scheme, const CoherentSource& source,
                                  double phi) {
  const SlopeTerms terms = slope_terms(scheme, output_mean_p(source, phi));
  return output_mean_p_slope(source, phi) * terms.sum;
}

double response(const BinningScheme& scheme, const CoherentSource& source, double phi) {
  return scheme.lambda0() * accepted_probability(scheme, source, phi);
}

double response_slope(const BinningScheme& scheme, const CoherentSource& source, double phi) {
  return scheme.lambda0() * accepted_probability_slope(scheme, source, phi);
}

double response_a0(const CoherentSource& source, double phi) {
  const double s = std::sin(phi);
  return std::exp(-0.5 * source.mean_photon_number() * s * s);
}

double variance(const BinningScheme& scheme, const CoherentSource& source, double phi) {
  const double r = response(scheme, source, phi);
  return std::max(0.0, r * (scheme.lambda0() - r));
}

std::optional<double> sensitivity(const BinningScheme& scheme, const CoherentSource& source,
                                  double phi) {
  const SlopeTerms terms = slope_terms(scheme, output_mean_p(source, phi));
  if (slope_vanishes(source, phi, terms)) return std::nullopt;
  const double var = variance(scheme, source, phi);
  if (var == 0.0) return std::nullopt;
  const double slope = scheme.lambda0() * output_mean_p_slope(source, phi) * terms.sum;
  return std::sqrt(var) / std::abs(slope);
}

std::optional<double> sensitivity_from_probability(const BinningScheme& scheme,
                                                   const CoherentSource& source, double phi) {
  const SlopeTerms terms = slope_terms(scheme, output_mean_p(source, phi));
  if (slope_vanishes(source, phi, terms)) return std::nullopt;
  const double q = accepted_probability(scheme, source, phi);
  const double rest = rejected_probability(scheme, source, phi);
  if (q == 0.0 || rest == 0.0) return std::nullopt;
  const double slope = output_mean_p_slope(source, phi) * terms.sum;
  return std::sqrt(q * rest) / std::abs(slope);
}

ClosedFormMinimum sensitivity_min_closed_form(const CoherentSource& source) {
  const double n = source.mean_photon_number();
  if (!(n > 0.0)) throw DomainError("closed-form minimum sensitivity requires N > 0");
  const double root = std::sqrt(4.0 + n * n);
  // 2 + N - sqrt(4 + N^2), with the difference N - sqrt(4 + N^2) written
  // without cancellation.
  const double exponent = 0.25 * (2.0 - 4.0 / (n + root));
  const double numerator =
      std::sqrt(std::numbers::pi / 2.0) * (std::exp(exponent) - std::sqrt(2.0 / std::numbers::pi));
  const double delta = std::sqrt(numerator / (root - 2.0));

  double c = std::sqrt(0.5 - 1.0 / n + root / (2.0 * n));
  if (c > 1.0) {
    if (c - 1.0 > 1e-12) throw DomainError("closed-form phi_min: arccos argument exceeds 1");
    c = 1.0;
  }
  return {delta, std::acos(c)};
}

double closed_form_large_n_coefficient() {
  return std::sqrt(std::sqrt(std::numbers::e * std::numbers::pi / 2.0) - 1.0);
}

double sensitivity_finite_a_printed(double half_width, const CoherentSource& source, double phi) {
  require_half_width(half_width);
  const double a = half_width;
  const double sqrt_n = std::sqrt(source.mean_photon_number());
  const double s = std::sin(phi);
  const double c = std::cos(phi);
  const double g_plus = std::numbers::sqrt2 * (a + 0.5 * sqrt_n * s);
  const double g_minus = std::numbers::sqrt2 * (a - 0.5 * sqrt_n * s);
  const double k = numerics::erfc(std::numbers::sqrt2 * g_minus) +
                   numerics::erfc(std::numbers::sqrt2 * g_plus);
  const double lead = 2.0 * a + sqrt_n * s;
  const double growth = std::expm1(4.0 * a * sqrt_n * s);
  const double num = std::exp(lead * lead * (2.0 - k) * k);
  const double den = source.mean_photon_number() * c * c * growth * growth;
  return std::sqrt(std::numbers::pi / 2.0 * num / den);
}

}  // namespace superres
