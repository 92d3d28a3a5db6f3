#pragma once

#include <array>

namespace rtpz::gauss {

// Spectral data of the rescaled degree-n ensemble with unit-variance
// coefficients: (U(t), U'(t)) is centered with covariance diag(1, sigma_n^2),
// sigma_n^2 = (1/n) sum_{k<=n} (k/n)^2 = (n+1)(2n+1)/(6 n^2) -> 1/3.
struct SpectralMoments {
    int n;
    double sigma_sq; // variance of U'
    double sigma;    // sqrt
};

SpectralMoments spectral_moments(int n);

// 2x2 covariance of (U(t), U'(t)); off-diagonal is exactly zero.
std::array<std::array<double, 2>, 2> covariance_matrix(int n);

// Expected number of real zeros of the Gaussian ensemble on [a,b] (argument
// of the normalized polynomial): ((b-a)/pi) * sqrt((n+1)(2n+1)/6).
double exact_expected_zeros(int n, double a, double b);

// (n^r/2) * E[ |U'| 1{|U| < n^-r} ] for the Gaussian ensemble; converges to
// 1/(pi sqrt 3) = 0.18377629... as n -> infinity.
double gaussian_kac_functional(int n, double r);

// Same expectation without the localizing prefactor, at a fixed width delta:
// E[ |U'| 1{|U| < delta} ] = sigma_n sqrt(2/pi) erf(delta/sqrt 2).
double gaussian_abs_slope_mass(int n, double delta);

// P( X^2 + Y^2 <= delta^2 ), X ~ N(0,1), Y ~ N(0,sigma^2); one-dimensional
// Gauss-Legendre quadrature after x = delta sin(u).  At sigma = 1 this equals
// 1 - exp(-delta^2/2) to quadrature accuracy (~1e-14).
double gaussian_small_ball(double sigma, double delta);

double norm_cdf(double x);
double norm_pdf(double x);

inline constexpr double kUniversalZeroDensity = 0.1837762984739307; // 1/(pi sqrt 3)

} // namespace rtpz::gauss
