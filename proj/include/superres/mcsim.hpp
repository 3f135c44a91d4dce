#pragma once

// Seeded Monte Carlo of the binned homodyne measurement.
//
// Every phase point draws from its own generator, seeded from
// (master_seed, point index) alone, so a scan is bit-for-bit reproducible
// for any number of worker threads.

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "superres/binning.hpp"

namespace superres {

/// Ordered phase points (radians), strictly increasing.
class PhaseGrid {
public:
  /// Throws DomainError if empty, non-finite or not strictly increasing.
  explicit PhaseGrid(std::vector<double> points);

  /// `steps` points spanning [start, end] inclusive; steps >= 2.
  static PhaseGrid linspace(double start, double end, std::size_t steps);
  /// `steps` points over [start, start + 2*pi), endpoint excluded.
  static PhaseGrid period(double start, std::size_t steps);

  const std::vector<double>& points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  double operator[](std::size_t i) const { return points_[i]; }

private:
  std::vector<double> points_;
};

/// Default number of quadrature samples per phase point.
inline constexpr std::uint64_t kDefaultSamplesPerPoint = 100000;
/// Default master seed; fixed so default runs are reproducible.
inline constexpr std::uint64_t kDefaultSeed = 20131104;

struct McConfig {
  std::uint64_t samples_per_point = kDefaultSamplesPerPoint;
  std::uint64_t master_seed = kDefaultSeed;
  PhaseGrid phase_grid = PhaseGrid::period(0.0, 64);
  /// Detection efficiency; the source is attenuated to eta * N.
  double efficiency = 1.0;
  /// Worker threads, 0 = one per hardware thread. Does not affect output.
  unsigned workers = 0;

  void validate() const;
};

/// Random stream for one phase point: mt19937_64 plus a Box-Muller
/// Gaussian built on 53-bit uniforms, so the sequence is identical across
/// standard library implementations.
class RngStream {
public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

  /// Uniform on (0, 1).
  double uniform();
  /// Standard normal deviate.
  double normal();

private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

/// One homodyne outcome of the phase quadrature at phase phi.
double sample_quadrature(const CoherentSource& source, double phi, RngStream& stream);

struct EmpiricalPoint {
  double phi = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t hits = 0;
  /// Hits per accepting window, in window order.
  std::vector<std::uint64_t> bin_hits;
  double response_hat = 0.0;
  double std_err = 0.0;
};

struct EmpiricalCurve {
  double lambda0 = 1.0;
  std::vector<EmpiricalPoint> points;

  std::vector<double> phis() const;
  std::vector<double> responses() const;
};

/// Fills response_hat = lambda0 * hits / n and
/// std_err = lambda0 * sqrt(q(1-q)/n) from the counts.
void finalize_point(EmpiricalPoint& point, double lambda0);

EmpiricalCurve simulate_scan(const BinningScheme& scheme, const CoherentSource& source,
                             const McConfig& config);

struct SensitivityEstimate {
  double phi = 0.0;
  double slope = 0.0;
  /// Standard error of the slope propagated from the neighbours' std_err.
  double slope_noise = 0.0;
  /// Empty where |slope| < 3 * slope_noise ("unreliable").
  std::optional<double> sensitivity;
};

/// Finite-difference sensitivity of an empirical curve: central differences
/// inside, one-sided at the ends, single-shot spread lambda0 sqrt(q(1-q)).
/// Requires >= 3 points on a uniform grid.
std::vector<SensitivityEstimate> empirical_sensitivity(const EmpiricalCurve& curve);

struct PullStatistics {
  std::size_t points = 0;  ///< points with a defined pull (std_err > 0)
  double mean = 0.0;
  double variance = 0.0;
  /// Fraction of all points with |hat - analytic| <= 4 * max(std_err, lambda0/n).
  double within_four_sigma = 0.0;
};

/// Pulls (response_hat - analytic) / std_err against the analytic response.
PullStatistics pull_statistics(const EmpiricalCurve& curve, const BinningScheme& scheme,
                               const CoherentSource& source);

/// Raw pulls, for pooling across runs.
std::vector<double> pulls(const EmpiricalCurve& curve, const BinningScheme& scheme,
                          const CoherentSource& source);

}  // namespace superres
