#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace superres {

/// Raised for inputs outside an operation's domain (bad brackets, lo > hi, ...).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Raised when an iterative procedure exhausts its budget. Carries the best
/// estimate reached and a bound on its error so callers can still report it.
class ConvergenceError : public std::runtime_error {
public:
  ConvergenceError(const std::string& what, double estimate, double error_bound)
      : std::runtime_error(what), estimate_(estimate), error_bound_(error_bound) {}

  double estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_bound_; }

private:
  double estimate_;
  double error_bound_;
};

namespace numerics {

using RealFunction = std::function<double(double)>;

struct ToleranceSpec {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  int max_iterations = 200;

  /// Throws DomainError unless both tolerances are positive and at least one
  /// iteration is allowed.
  void validate() const;
};

/// Error function. Odd, saturates to +-1 for |x| > 6.
double erf(double x);

/// Complementary error function 1 - erf(x), accurate in the upper tail.
double erfc(double x);

struct IntegrationResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int intervals = 0;
};

/// Adaptive Gauss-Kronrod (7/15) quadrature with global bisection of the
/// worst interval. Converged when the summed error estimate is below
/// max(abs_tol, rel_tol * |value|). max_iterations bounds the number of
/// subdivisions; exceeding it throws ConvergenceError with the best estimate.
IntegrationResult integrate(const RealFunction& f, double lo, double hi,
                            const ToleranceSpec& tol = {});

/// Bisection on a sign-changing bracket until the bracket is narrower than
/// abs_tol. Throws DomainError when f(lo) and f(hi) do not differ in sign.
double find_root(const RealFunction& f, double lo, double hi,
                 const ToleranceSpec& tol = {});

struct Minimum {
  double x = 0.0;
  double value = 0.0;
};

/// Coarse grid scan (grid_points >= 256) followed by golden-section
/// refinement around the best grid point. Non-finite values (e.g. +inf) are
/// allowed and simply never win. Deterministic.
Minimum minimize_1d(const RealFunction& f, double lo, double hi,
                    const ToleranceSpec& tol = {}, std::size_t grid_points = 256);

/// Golden-section search for a minimum of a function assumed unimodal on
/// [lo, hi].
Minimum golden_section_min(const RealFunction& f, double lo, double hi,
                           const ToleranceSpec& tol = {});

struct Peak {
  double x = 0.0;
  double y = 0.0;
  double prominence = 0.0;
  std::size_t index = 0;  ///< sample index of the (first) grid maximum
};

/// Local maxima of a sampled function whose domain is one period
/// [xs.front(), xs.front() + period). Peaks whose topographic prominence is
/// below min_prominence are dropped. Plateaus count once. When `refine` is
/// given, each peak position is polished by golden-section search on it
/// within one grid cell either side.
std::vector<Peak> find_local_maxima(std::span<const double> xs, std::span<const double> ys,
                                    double period, double min_prominence,
                                    const std::optional<RealFunction>& refine = std::nullopt);

struct PowerLawFit {
  double exponent = 0.0;
  double prefactor = 0.0;
};

/// Least-squares fit of y = prefactor * x^exponent on log-log axes.
/// Requires at least two points with positive x and y.
PowerLawFit fit_power_law(std::span<const double> xs, std::span<const double> ys);

/// Least-squares prefactor c of y = c * x^exponent for a fixed exponent.
double fit_prefactor(std::span<const double> xs, std::span<const double> ys, double exponent);

/// Evenly spaced points in [start, end] inclusive.
std::vector<double> linspace(double start, double end, std::size_t count);

/// Evenly spaced points in [start, start + period), endpoint excluded.
std::vector<double> periodic_grid(double start, double period, std::size_t count);

}  // namespace numerics
}  // namespace superres
