#include "superres/mcsim.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "superres/numerics.hpp"
#include "superres/parallel.hpp"

namespace superres {

namespace {

constexpr std::uint32_t kStreamTag = 0x51c0e2d5u;

std::uint32_t low32(std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); }
std::uint32_t high32(std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); }

}  // namespace

PhaseGrid::PhaseGrid(std::vector<double> points) : points_(std::move(points)) {
  if (points_.empty()) throw DomainError("phase grid is empty");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i])) throw DomainError("phase grid contains a non-finite value");
    if (i > 0 && !(points_[i] > points_[i - 1])) {
      throw DomainError("phase grid must be strictly increasing");
    }
  }
}

PhaseGrid PhaseGrid::linspace(double start, double end, std::size_t steps) {
  if (steps < 2) throw DomainError("phase grid needs at least 2 steps");
  return PhaseGrid(numerics::linspace(start, end, steps));
}

PhaseGrid PhaseGrid::period(double start, std::size_t steps) {
  if (steps < 1) throw DomainError("phase grid needs at least 1 point");
  return PhaseGrid(numerics::periodic_grid(start, 2.0 * std::numbers::pi, steps));
}

void McConfig::validate() const {
  if (samples_per_point < 1) throw DomainError("samples per point must be at least 1");
  if (!(efficiency > 0.0 && efficiency <= 1.0)) throw DomainError("efficiency must lie in (0, 1]");
  const auto& p = phase_grid.points();
  if (p.back() - p.front() > 2.0 * std::numbers::pi * (1.0 + 1e-12)) {
    throw DomainError("phase grid must lie within one period");
  }
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_index) {
  std::seed_seq seq{low32(master_seed), high32(master_seed), low32(stream_index),
                    high32(stream_index), kStreamTag};
  engine_.seed(seq);
}

double RngStream::uniform() {
  // 53 random mantissa bits, shifted half a step off zero.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() {
  if (spare_) {
    const double v = *spare_;
    spare_.reset();
    return v;
  }
  const double radius = std::sqrt(-2.0 * std::log(uniform()));
  const double angle = 2.0 * std::numbers::pi * uniform();
  spare_ = radius * std::sin(angle);
  return radius * std::cos(angle);
}

double sample_quadrature(const CoherentSource& source, double phi, RngStream& stream) {
  return output_mean_p(source, phi) + kVacuumStdDev * stream.normal();
}

std::vector<double> EmpiricalCurve::phis() const {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.phi);
  return out;
}

std::vector<double> EmpiricalCurve::responses() const {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.response_hat);
  return out;
}

void finalize_point(EmpiricalPoint& point, double lambda0) {
  if (point.n_samples == 0) throw DomainError("empirical point has no samples");
  if (point.hits > point.n_samples) throw DomainError("hits exceed sample count");
  const double n = static_cast<double>(point.n_samples);
  const double q = static_cast<double>(point.hits) / n;
  point.response_hat = lambda0 * q;
  point.std_err = lambda0 * std::sqrt(q * (1.0 - q) / n);
}

EmpiricalCurve simulate_scan(const BinningScheme& scheme, const CoherentSource& source,
                             const McConfig& config) {
  config.validate();
  const CoherentSource effective = source.attenuated(config.efficiency);
  const auto& grid = config.phase_grid.points();

  EmpiricalCurve curve;
  curve.lambda0 = scheme.lambda0();
  curve.points.resize(grid.size());
  detail::parallel_for(grid.size(), config.workers, [&](std::size_t i) {
    RngStream stream(config.master_seed, i);
    EmpiricalPoint point;
    point.phi = grid[i];
    point.n_samples = config.samples_per_point;
    point.bin_hits.assign(static_cast<std::size_t>(scheme.n_bins()), 0);
    for (std::uint64_t s = 0; s < config.samples_per_point; ++s) {
      const double p = sample_quadrature(effective, point.phi, stream);
      if (const auto w = scheme.window_of(p)) ++point.bin_hits[static_cast<std::size_t>(*w)];
    }
    for (auto h : point.bin_hits) point.hits += h;
    finalize_point(point, scheme.lambda0());
    curve.points[i] = std::move(point);
  });
  return curve;
}

std::vector<SensitivityEstimate> empirical_sensitivity(const EmpiricalCurve& curve) {
  const auto& pts = curve.points;
  const std::size_t n = pts.size();
  if (n < 3) throw DomainError("empirical sensitivity needs at least 3 points");
  const double h = pts[1].phi - pts[0].phi;
  for (std::size_t i = 1; i < n; ++i) {
    const double d = pts[i].phi - pts[i - 1].phi;
    if (!(h > 0.0) || std::abs(d - h) > 1e-6 * h) {
      throw DomainError("empirical sensitivity requires a uniform phase grid");
    }
  }

  std::vector<SensitivityEstimate> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == n ? n - 1 : i + 1;
    const double span = static_cast<double>(hi - lo) * h;
    auto& est = out[i];
    est.phi = pts[i].phi;
    est.slope = (pts[hi].response_hat - pts[lo].response_hat) / span;
    est.slope_noise = std::hypot(pts[hi].std_err, pts[lo].std_err) / span;
    if (!(std::abs(est.slope) > 3.0 * est.slope_noise)) continue;
    const double q = pts[i].response_hat / curve.lambda0;
    const double single_shot = curve.lambda0 * std::sqrt(std::max(0.0, q * (1.0 - q)));
    est.sensitivity = single_shot / std::abs(est.slope);
  }
  return out;
}

std::vector<double> pulls(const EmpiricalCurve& curve, const BinningScheme& scheme,
                          const CoherentSource& source) {
  std::vector<double> out;
  for (const auto& p : curve.points) {
    if (p.std_err > 0.0) out.push_back((p.response_hat - response(scheme, source, p.phi)) / p.std_err);
  }
  return out;
}

PullStatistics pull_statistics(const EmpiricalCurve& curve, const BinningScheme& scheme,
                               const CoherentSource& source) {
  PullStatistics stats;
  const auto values = pulls(curve, scheme, source);
  stats.points = values.size();
  if (!values.empty()) {
    double sum = 0.0;
    for (double v : values) sum += v;
    stats.mean = sum / static_cast<double>(values.size());
    double sq = 0.0;
    for (double v : values) sq += (v - stats.mean) * (v - stats.mean);
    stats.variance = values.size() > 1 ? sq / static_cast<double>(values.size() - 1) : 0.0;
  }
  std::size_t covered = 0;
  for (const auto& p : curve.points) {
    const double floor = curve.lambda0 / static_cast<double>(p.n_samples);
    const double tolerance = 4.0 * std::max(p.std_err, floor);
    if (std::abs(p.response_hat - response(scheme, source, p.phi)) <= tolerance) ++covered;
  }
  if (!curve.points.empty()) {
    stats.within_four_sigma = static_cast<double>(covered) / static_cast<double>(curve.points.size());
  }
  return stats;
}

}  // namespace superres
