#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "superres/fringes.hpp"
#include "superres/numerics.hpp"

using namespace superres;
using Catch::Approx;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kLn2 = std::numbers::ln2;
}  // namespace

TEST_CASE("binary scheme has two fringes per period") {
  const auto scheme = BinningScheme::binary(0.5);
  for (double n : {5.0, 19.0, 132.0}) {
    const CoherentSource source(n);
    const auto analysis = analyze_fringes(scheme, source);
    REQUIRE(analysis.count() == 2);
    CHECK(analysis.fringes[0].phi_peak == Approx(0.0).margin(1e-8));
    CHECK(analysis.fringes[1].phi_peak == Approx(kPi).margin(1e-8));
    CHECK(count_fringes(scheme, source) == 2);
  }
}

TEST_CASE("binary visibility stays near unity") {
  const auto scheme = BinningScheme::binary(0.5);
  for (double n : {19.0, 132.0}) {
    const auto v = visibility(scheme, CoherentSource(n));
    CHECK(v.min > 0.99);
    CHECK(v.mean >= v.min);
    CHECK(v.mean <= 1.0);
  }
}

TEST_CASE("five-bin comb at N = 139 shows eight fringes") {
  const auto scheme = BinningScheme::multi(0.5, 3.17, 5);
  const CoherentSource source(139.0);
  const auto analysis = analyze_fringes(scheme, source);
  CHECK(analysis.count() == 8);
  for (const auto& f : analysis.fringes) {
    CHECK(f.visibility > 0.0);
    CHECK(f.visibility <= 1.0);
    CHECK(f.peak_contrast >= f.visibility);
    CHECK(f.visibility == Approx((f.peak - f.trough) / (f.peak + f.trough)));
  }
  CHECK(analysis.visibility_min() <= analysis.visibility_mean());
  CHECK(analysis.peak_contrast_min() <= analysis.peak_contrast_mean());
}

TEST_CASE("flat curves have no fringes") {
  const auto analysis = analyze_fringes(BinningScheme::binary(0.5), CoherentSource(0.0));
  CHECK(analysis.count() == 0);
  CHECK_THROWS_AS(visibility(BinningScheme::binary(0.5), CoherentSource(0.0)), DomainError);
  const auto summary = summarize(BinningScheme::binary(0.5), CoherentSource(0.0));
  CHECK(summary.fringe_count == 0);
  CHECK_FALSE(summary.fwhm.has_value());
  CHECK_FALSE(summary.min_sensitivity.has_value());
}

TEST_CASE("closed-form a0 FWHM") {
  CHECK(fwhm_a0_closed_form(CoherentSource(2.0 * kLn2)) == Approx(kPi).margin(1e-12));
  CHECK(fwhm_a0_closed_form(CoherentSource(132.0)) == Approx(2.0 * std::asin(std::sqrt(2.0 * kLn2 / 132.0))));
  CHECK_THROWS_AS(fwhm_a0_closed_form(CoherentSource(1.0)), DomainError);

  // Strictly decreasing and below pi past the threshold.
  double previous = kPi;
  for (double n = 2.0 * kLn2 * 1.001; n < 1e6; n *= 1.7) {
    const double w = fwhm_a0_closed_form(CoherentSource(n));
    CHECK(w < previous);
    CHECK(w < kPi);
    previous = w;
  }
  const double big = 1e8;
  CHECK(fwhm_a0_closed_form(CoherentSource(big)) * std::sqrt(big) ==
        Approx(2.0 * std::sqrt(2.0 * kLn2)).epsilon(1e-6));
}

TEST_CASE("numeric a0 FWHM matches the closed form at large N") {
  for (double n : {50.0, 132.0, 1000.0}) {
    const CoherentSource source(n);
    CHECK(fwhm_a0(source) == Approx(fwhm_a0_closed_form(source)).epsilon(1e-6));
  }
  // Half crossing at N = 132.
  CHECK(fwhm_a0(CoherentSource(132.0)) / 2 == Approx(0.102661).margin(1e-5));
}

TEST_CASE("finite-a FWHM beats the intensity fringe") {
  const auto scheme = BinningScheme::binary(0.5);
  for (double n : {5.0, 19.0, 132.0}) {
    const double w = fwhm(scheme, CoherentSource(n));
    CHECK(w > 0.0);
    CHECK(w <= kPi);
  }
  CHECK(kPi / fwhm(scheme, CoherentSource(132.0)) >= 12.0);
  CHECK(kIntensityFwhm / fwhm(scheme, CoherentSource(19.0)) > 1.0);
}

TEST_CASE("fwhm_numeric on a cosine") {
  // (1 + cos)/2 has half level at pi/2.
  CHECK(fwhm_numeric([](double phi) { return 0.5 * (1.0 + std::cos(phi)); }) == Approx(kPi).margin(1e-9));
  CHECK_THROWS_AS(fwhm_numeric([](double) { return 1.0; }), DomainError);
}

TEST_CASE("sampled analysis agrees with the analytic one") {
  const auto scheme = BinningScheme::binary(0.5);
  const CoherentSource source(19.0);
  const auto xs = numerics::periodic_grid(-kPi, 2 * kPi, 512);
  std::vector<double> ys;
  for (double x : xs) ys.push_back(response(scheme, source, x));
  CHECK(fwhm_sampled(xs, ys, 2 * kPi) == Approx(fwhm(scheme, source)).epsilon(2e-3));
  CHECK(analyze_fringes_sampled(xs, ys, 2 * kPi).count() == 2);

  const auto comb = BinningScheme::multi(0.5, 3.17, 5);
  const CoherentSource bright(139.0);
  std::vector<double> zs;
  for (double x : xs) zs.push_back(response(comb, bright, x));
  CHECK(analyze_fringes_sampled(xs, zs, 2 * kPi).count() == 8);
}

TEST_CASE("scan summary") {
  const auto summary = summarize(BinningScheme::binary(0.5), CoherentSource(132.0));
  REQUIRE(summary.fwhm.has_value());
  REQUIRE(summary.min_sensitivity.has_value());
  REQUIRE(summary.phi_at_min.has_value());
  CHECK(summary.fringe_count == 2);
  CHECK(*summary.phi_at_min > 0.0);
  CHECK(*summary.phi_at_min < kPi / 2);
  const auto direct = sensitivity(BinningScheme::binary(0.5), CoherentSource(132.0), *summary.phi_at_min);
  REQUIRE(direct.has_value());
  CHECK(*direct == Approx(*summary.min_sensitivity));
  CHECK(*summary.min_sensitivity * std::sqrt(132.0) == Approx(1.37).margin(0.05));
}
