#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "superres/numerics.hpp"

using namespace superres;
using Catch::Approx;

namespace {

// Maclaurin series of erf, summed in long double. Accurate for |x| <= 3.
long double erf_series(long double x) {
  const long double two_over_sqrt_pi = 1.128379167095512573896158903121545172L;
  long double term = x;
  long double sum = x;
  for (int n = 1; n < 200; ++n) {
    term *= -x * x / n;
    const long double add = term / (2 * n + 1);
    sum += add;
    if (std::fabs(add) < 1e-30L * std::fabs(sum)) break;
  }
  return two_over_sqrt_pi * sum;
}

// Continued fraction for erfc (modified Lentz), accurate for x >= 2.
long double erfc_continued_fraction(long double x) {
  // erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
  const long double tiny = 1e-300L;
  long double f = x;
  long double c = x;
  long double d = 0.0L;
  for (int k = 1; k < 500; ++k) {
    const long double ak = k / 2.0L;
    d = x + ak * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = x + ak / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0L / d;
    const long double delta = c * d;
    f *= delta;
    if (std::fabs(delta - 1.0L) < 1e-22L) break;
  }
  return std::exp(-x * x) / std::sqrt(std::numbers::pi_v<long double>) / f;
}

}  // namespace

TEST_CASE("erf matches a long-double series oracle") {
  for (double x = -3.0; x <= 3.0; x += 0.0625) {
    const double expected = static_cast<double>(erf_series(x));
    CHECK(numerics::erf(x) == Approx(expected).epsilon(1e-14).margin(1e-16));
  }
}

TEST_CASE("erf is odd and saturates") {
  for (double x : {0.1, 0.7, 1.9, 4.2}) CHECK(numerics::erf(-x) == -numerics::erf(x));
  CHECK(numerics::erf(0.0) == 0.0);
  CHECK(numerics::erf(6.5) == 1.0);
  CHECK(numerics::erf(-6.5) == -1.0);
}

TEST_CASE("erfc keeps relative accuracy in the upper tail") {
  for (double x = 2.0; x <= 25.0; x += 0.5) {
    const double expected = static_cast<double>(erfc_continued_fraction(x));
    CHECK(numerics::erfc(x) == Approx(expected).epsilon(1e-13));
  }
  for (double x = -2.0; x <= 2.0; x += 0.25) {
    CHECK(numerics::erfc(x) == Approx(1.0 - static_cast<double>(erf_series(x))).epsilon(1e-14));
  }
}

TEST_CASE("integrate reproduces known integrals") {
  const auto sine = numerics::integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
  CHECK(sine.value == Approx(2.0).epsilon(1e-13));
  CHECK(sine.error_estimate <= 1e-11);

  const auto gauss = numerics::integrate(
      [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }, -12.0, 12.0);
  CHECK(gauss.value == Approx(1.0).epsilon(1e-13));

  const auto poly = numerics::integrate([](double x) { return x * x * x - 2.0 * x; }, -1.0, 3.0);
  CHECK(poly.value == Approx(20.0 - 8.0).epsilon(1e-13));
}

TEST_CASE("integrate handles reversed and empty limits") {
  auto f = [](double x) { return std::exp(x); };
  const double forward = numerics::integrate(f, 0.0, 1.0).value;
  CHECK(numerics::integrate(f, 1.0, 0.0).value == Approx(-forward).epsilon(1e-15));
  CHECK(numerics::integrate(f, 0.5, 0.5).value == 0.0);
  CHECK(forward == Approx(std::numbers::e - 1.0).epsilon(1e-14));
}

TEST_CASE("integrate reports exhausted budgets and bad limits") {
  numerics::ToleranceSpec tight{1e-15, 1e-15, 2};
  auto spiky = [](double x) { return 1.0 / (1e-6 + x * x); };
  CHECK_THROWS_AS(numerics::integrate(spiky, -1.0, 1.0, tight), ConvergenceError);
  try {
    numerics::integrate(spiky, -1.0, 1.0, tight);
  } catch (const ConvergenceError& e) {
    CHECK(std::isfinite(e.estimate()));
    CHECK(e.error_bound() > 0.0);
  }
  CHECK_THROWS_AS(numerics::integrate(spiky, 0.0, std::numeric_limits<double>::infinity()), DomainError);
  CHECK_THROWS_AS(numerics::integrate(spiky, 0.0, 1.0, {0.0, 1e-9, 10}), DomainError);
}

TEST_CASE("find_root brackets and bisects") {
  const double root = numerics::find_root([](double x) { return std::cos(x); }, 0.0, 2.0);
  CHECK(root == Approx(std::numbers::pi / 2).margin(1e-12));
  CHECK(numerics::find_root([](double x) { return x - 0.25; }, 0.25, 1.0) == 0.25);
  CHECK_THROWS_AS(numerics::find_root([](double x) { return x * x + 1.0; }, -1.0, 1.0), DomainError);
  CHECK_THROWS_AS(numerics::find_root([](double x) { return x; }, 1.0, -1.0), DomainError);
}

TEST_CASE("golden_section_min and minimize_1d locate minima") {
  auto bowl = [](double x) { return (x - 1.3) * (x - 1.3) + 0.5; };
  const auto g = numerics::golden_section_min(bowl, -2.0, 4.0);
  CHECK(g.x == Approx(1.3).margin(1e-6));
  CHECK(g.value == Approx(0.5).margin(1e-12));

  // Multimodal: the grid scan must pick the global minimum.
  auto wavy = [](double x) { return std::cos(3.0 * x) + 0.1 * x; };
  const auto m = numerics::minimize_1d(wavy, 0.0, 2.0 * std::numbers::pi);
  CHECK(m.x == Approx(std::numbers::pi / 3.0 - std::asin(0.1 / 3.0) / 3.0).margin(1e-6));

  // +inf regions never win.
  auto holey = [](double x) {
    return x < 0.5 ? std::numeric_limits<double>::infinity() : (x - 0.7) * (x - 0.7);
  };
  CHECK(numerics::minimize_1d(holey, 0.0, 1.0).x == Approx(0.7).margin(1e-6));

  auto never = [](double) { return std::numeric_limits<double>::infinity(); };
  CHECK_THROWS_AS(numerics::minimize_1d(never, 0.0, 1.0), DomainError);
}

TEST_CASE("find_local_maxima counts periodic peaks") {
  const double period = 2.0 * std::numbers::pi;
  const auto xs = numerics::periodic_grid(0.0, period, 1024);
  std::vector<double> ys;
  for (double x : xs) ys.push_back(std::cos(3.0 * x));

  const auto peaks = numerics::find_local_maxima(xs, ys, period, 0.01);
  REQUIRE(peaks.size() == 3);
  // The peak at x = 0 sits on the seam and is found once.
  CHECK(peaks[0].x == Approx(0.0).margin(1e-12));
  CHECK(peaks[1].x == Approx(period / 3).margin(1e-2));
  for (const auto& p : peaks) CHECK(p.prominence == Approx(2.0).margin(1e-3));

  const auto refined = numerics::find_local_maxima(
      xs, ys, period, 0.01, numerics::RealFunction([](double x) { return std::cos(3.0 * x); }));
  REQUIRE(refined.size() == 3);
  CHECK(refined[1].x == Approx(period / 3).margin(1e-7));
}

TEST_CASE("find_local_maxima drops shallow bumps and merges plateaus") {
  const double period = 2.0 * std::numbers::pi;
  const auto xs = numerics::periodic_grid(0.0, period, 2048);
  std::vector<double> ys;
  for (double x : xs) ys.push_back(std::cos(x) + 0.001 * std::cos(40.0 * x));
  CHECK(numerics::find_local_maxima(xs, ys, period, 0.05).size() == 1);
  CHECK(numerics::find_local_maxima(xs, ys, period, 1e-6).size() > 1);

  std::vector<double> plateau(xs.size(), 0.0);
  for (std::size_t i = 100; i < 200; ++i) plateau[i] = 1.0;
  for (std::size_t i = 1000; i < 1100; ++i) plateau[i] = 1.0;
  CHECK(numerics::find_local_maxima(xs, plateau, period, 0.5).size() == 2);

  // Plateau wrapping across the seam counts once.
  std::vector<double> seam(xs.size(), 0.0);
  for (std::size_t i = 0; i < 20; ++i) seam[i] = 1.0;
  for (std::size_t i = xs.size() - 20; i < xs.size(); ++i) seam[i] = 1.0;
  CHECK(numerics::find_local_maxima(xs, seam, period, 0.5).size() == 1);

  std::vector<double> flat(xs.size(), 0.3);
  CHECK(numerics::find_local_maxima(xs, flat, period, 0.0).empty());
}

TEST_CASE("fit_power_law recovers exact power laws") {
  const std::vector<double> xs = {1.0, 10.0, 100.0, 1000.0};
  std::vector<double> ys;
  for (double x : xs) ys.push_back(2.5 * std::pow(x, -0.5));
  const auto fit = numerics::fit_power_law(xs, ys);
  CHECK(fit.exponent == Approx(-0.5).margin(1e-12));
  CHECK(fit.prefactor == Approx(2.5).epsilon(1e-12));
  CHECK(numerics::fit_prefactor(xs, ys, -0.5) == Approx(2.5).epsilon(1e-12));
  const std::vector<double> bad = {1.0, -1.0, 2.0, 3.0};
  CHECK_THROWS_AS(numerics::fit_power_law(xs, bad), DomainError);
}

TEST_CASE("grids") {
  const auto line = numerics::linspace(-1.0, 1.0, 5);
  REQUIRE(line.size() == 5);
  CHECK(line.front() == -1.0);
  CHECK(line.back() == 1.0);
  CHECK(line[2] == Approx(0.0).margin(1e-15));

  const auto ring = numerics::periodic_grid(0.0, 1.0, 4);
  REQUIRE(ring.size() == 4);
  CHECK(ring.back() == Approx(0.75));
}
