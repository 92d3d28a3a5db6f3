#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rtpz/gaussian_reference.hpp"

using namespace rtpz::gauss;

namespace {
const double kTwoPi = 2.0 * std::numbers::pi;
}

TEST_CASE("spectral moments match the closed form") {
    CHECK(spectral_moments(1).sigma_sq == doctest::Approx(1.0));
    CHECK(spectral_moments(3).sigma_sq == doctest::Approx(14.0 / 27.0));
    CHECK(spectral_moments(1000000).sigma_sq == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
    for (int n : {1, 2, 5, 17, 400}) {
        const SpectralMoments sm = spectral_moments(n);
        CHECK(sm.sigma_sq > 1.0 / 3.0);
        CHECK(sm.sigma_sq <= 1.0);
        CHECK(sm.sigma == doctest::Approx(std::sqrt(sm.sigma_sq)));
    }
}

TEST_CASE("covariance matrix is diagonal with unit value variance") {
    const auto cov = covariance_matrix(3);
    CHECK(cov[0][0] == doctest::Approx(1.0));
    CHECK(cov[1][1] == doctest::Approx(14.0 / 27.0));
    CHECK(cov[0][1] == 0.0);
    CHECK(cov[1][0] == 0.0);
}

TEST_CASE("expected zero count over a period") {
    CHECK(exact_expected_zeros(1, 0.0, kTwoPi) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(exact_expected_zeros(50, 0.0, kTwoPi) ==
          doctest::Approx(58.60034129593445).epsilon(1e-12));
    const double e200 = exact_expected_zeros(200, 0.0, kTwoPi);
    CHECK(e200 == doctest::Approx(231.8060).epsilon(1e-6));
    CHECK(e200 / 200.0 == doctest::Approx(1.159030).epsilon(1e-6));
    // the large-n density limit is 2/sqrt(3) zeros per unit of (b-a)n/pi
    CHECK(exact_expected_zeros(100000, 0.0, kTwoPi) / 100000.0 ==
          doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-5));
}

TEST_CASE("expected zero count scales with the interval and the degree") {
    const double whole = exact_expected_zeros(30, 0.0, kTwoPi);
    CHECK(exact_expected_zeros(30, 0.0, std::numbers::pi) == doctest::Approx(whole / 2.0));
    CHECK(exact_expected_zeros(30, 1.0, 2.0) == doctest::Approx(whole / kTwoPi));
    double prev = 0.0;
    for (int n : {1, 2, 3, 10, 50, 100}) {
        const double e = exact_expected_zeros(n, 0.0, 1.0);
        CHECK(e > prev);
        prev = e;
    }
}

TEST_CASE("gaussian kac functional converges to the universal density") {
    CHECK(kUniversalZeroDensity == doctest::Approx(1.0 / (std::numbers::pi * std::sqrt(3.0))));

    CHECK(gaussian_kac_functional(10000, 1.3) ==
          doctest::Approx(kUniversalZeroDensity).epsilon(1e-3));

    double prev_err = 1.0;
    for (int n : {100, 1000, 10000, 100000}) {
        const double err = std::abs(gaussian_kac_functional(n, 1.3) - kUniversalZeroDensity);
        CHECK(err < prev_err);
        prev_err = err;
    }

    // n=1, r=1: window width 1, so the value is (1/2) E|U'| P(|U| <= 1)
    const double p_inside = std::erf(1.0 / std::sqrt(2.0));
    CHECK(gaussian_kac_functional(1, 1.0) ==
          doctest::Approx(0.5 * std::sqrt(2.0 / std::numbers::pi) * p_inside).epsilon(1e-12));
    CHECK(gaussian_kac_functional(1, 1.0) == doctest::Approx(0.2723).epsilon(1e-4));
}

TEST_CASE("absolute slope mass saturates at the full gaussian moment") {
    // E|U'| restricted to |U| < delta, delta large -> sigma_n sqrt(2/pi)
    const double full = spectral_moments(25).sigma * std::sqrt(2.0 / std::numbers::pi);
    CHECK(gaussian_abs_slope_mass(25, 10.0) == doctest::Approx(full).epsilon(1e-12));
    CHECK_THROWS_AS(gaussian_abs_slope_mass(25, 0.0), std::invalid_argument);
    // linear in delta for small widths: mass ~ 2 delta phi(0) sigma sqrt(2/pi)
    const double d = 1e-4;
    CHECK(gaussian_abs_slope_mass(25, d) ==
          doctest::Approx(2.0 * d * norm_pdf(0.0) * full).epsilon(1e-6));
}

TEST_CASE("small ball probability closed forms") {
    for (double d : {0.01, 0.1, 0.5, 1.0}) {
        CAPTURE(d);
        CHECK(gaussian_small_ball(1.0, d) ==
              doctest::Approx(1.0 - std::exp(-d * d / 2.0)).epsilon(1e-10));
    }
    CHECK(gaussian_small_ball(1.0, 0.1) == doctest::Approx(0.00498752).epsilon(1e-6));
    CHECK(gaussian_small_ball(1.0, 50.0) == doctest::Approx(1.0).epsilon(1e-5));
    // small-radius asymptote delta^2 / (2 sigma)
    const double sigma = 1.0 / std::sqrt(3.0);
    CHECK(gaussian_small_ball(sigma, 0.05) ==
          doctest::Approx(0.05 * 0.05 / (2.0 * sigma)).epsilon(0.01));
    CHECK(gaussian_small_ball(sigma, 0.05) == doctest::Approx(0.00216506).epsilon(0.01));
}

TEST_CASE("normal cdf and pdf reach library precision") {
    CHECK(norm_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(norm_cdf(1.0) == doctest::Approx(0.8413447460685429).epsilon(1e-15));
    CHECK(norm_cdf(-2.0) == doctest::Approx(0.0227501319481792).epsilon(1e-14));
    CHECK(norm_cdf(5.0) == doctest::Approx(0.9999997133484281).epsilon(1e-15));
    CHECK(norm_pdf(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-15));
    CHECK(norm_cdf(-8.0) + norm_cdf(8.0) == doctest::Approx(1.0).epsilon(1e-15));
}
