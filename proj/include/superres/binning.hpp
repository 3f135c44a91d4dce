#pragma once

// Quadrature binning schemes and their analytic response.
//
// A scheme accepts outcomes falling in one or more windows of half-width a
// and assigns them the eigenvalue lambda0 = 1/erf(sqrt(2) a); rejected
// outcomes get eigenvalue 0. The response <Pi> is therefore lambda0 times
// the accepted probability q, and because the accepted windows are disjoint
// the observable squares to lambda0 * Pi, giving Var = <Pi>(lambda0 - <Pi>).

#include <optional>
#include <vector>

#include "superres/quadmodel.hpp"

namespace superres {

struct Interval {
  double lo;
  double hi;
};

class BinningScheme {
public:
  enum class Kind { Binary, Multi };

  /// Two-outcome scheme accepting |p| <= a. Requires a > 0.
  static BinningScheme binary(double half_width);

  /// n equidistant windows centred at b*k, k = -(n-1)/2 .. (n-1)/2.
  /// Requires a > 0, b > 2a (disjoint windows) and n odd.
  static BinningScheme multi(double half_width, double spacing, int n_bins);

  Kind kind() const noexcept { return kind_; }
  double half_width() const noexcept { return a_; }
  /// Bin spacing b; 0 for the binary scheme.
  double spacing() const noexcept { return b_; }
  int n_bins() const noexcept { return static_cast<int>(windows_.size()); }
  double lambda0() const noexcept { return lambda0_; }
  const std::vector<Interval>& windows() const noexcept { return windows_; }
  std::vector<double> centers() const;

  /// Index of the accepting window containing p, if any.
  std::optional<int> window_of(double p) const;

private:
  BinningScheme(Kind kind, double a, double b, std::vector<Interval> windows);

  Kind kind_;
  double a_;
  double b_;
  double lambda0_;
  std::vector<Interval> windows_;
};

/// Accepted probability q = sum of window masses.
double accepted_probability(const BinningScheme& scheme, const CoherentSource& source, double phi);

/// 1 - q, summed from the rejected tails and gaps so it stays accurate when
/// q is close to one.
double rejected_probability(const BinningScheme& scheme, const CoherentSource& source, double phi);

/// dq/dphi in closed form: mu'(phi) * sum_k [rho(lo_k) - rho(hi_k)].
double accepted_probability_slope(const BinningScheme& scheme, const CoherentSource& source,
                                  double phi);

/// <Pi>(phi) = lambda0 * q.
double response(const BinningScheme& scheme, const CoherentSource& source, double phi);

/// d<Pi>/dphi.
double response_slope(const BinningScheme& scheme, const CoherentSource& source, double phi);

/// a -> 0 limit of the binary response, exp(-N sin^2(phi) / 2).
double response_a0(const CoherentSource& source, double phi);

/// <dPi^2> = <Pi>(lambda0 - <Pi>).
double variance(const BinningScheme& scheme, const CoherentSource& source, double phi);

/// Error-propagation phase sensitivity Delta Pi / |d<Pi>/dphi|.
///
/// Returns std::nullopt where the slope vanishes (fringe peaks and troughs,
/// and far tails where it underflows): the sensitivity diverges there.
std::optional<double> sensitivity(const BinningScheme& scheme, const CoherentSource& source,
                                  double phi);

/// Same quantity written without the eigenvalue, sqrt(q(1-q)) / |dq/dphi|.
std::optional<double> sensitivity_from_probability(const BinningScheme& scheme,
                                                   const CoherentSource& source, double phi);

struct ClosedFormMinimum {
  double delta_phi_min;
  double phi_min;
};

/// Reference a -> 0 closed form for the minimum sensitivity and its phase.
/// Evaluated as printed; it is a comparison figure and is not derived from
/// sensitivity() above. Requires N > 0.
ClosedFormMinimum sensitivity_min_closed_form(const CoherentSource& source);

/// Large-N limit of sensitivity_min_closed_form times sqrt(N):
/// sqrt(sqrt(e pi / 2) - 1) ~= 1.0327.
double closed_form_large_n_coefficient();

/// Reference finite-a sensitivity expression, evaluated verbatim for
/// comparison output. It does not agree with sensitivity() and is kept out of all checks.
double sensitivity_finite_a_printed(double half_width, const CoherentSource& source, double phi);

}  // namespace superres
