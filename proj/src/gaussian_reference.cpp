#include "rtpz/gaussian_reference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rtpz::gauss {

namespace {

// 32-point Gauss-Legendre nodes/weights on [-1,1] (positive half; mirrored).
constexpr int kGL = 16;
constexpr double gl_x[kGL] = {
    0.0483076656877383162, 0.1444719615827964934, 0.2392873622521370745, 0.3318686022821276498,
    0.4213512761306353454, 0.5068999089322293900, 0.5877157572407623290, 0.6630442669302152010,
    0.7321821187402896804, 0.7944837959679424069, 0.8493676137325699701, 0.8963211557660521240,
    0.9349060759377396891, 0.9647622555875064307, 0.9856115115452683354, 0.9972638618494815635};
constexpr double gl_w[kGL] = {
    0.0965400885147278006, 0.0956387200792748594, 0.0938443990808045654, 0.0911738786957638847,
    0.0876520930044038111, 0.0833119242269467552, 0.0781938957870703065, 0.0723457941088485062,
    0.0658222227763618468, 0.0586840934785355471, 0.0509980592623761762, 0.0428358980222266807,
    0.0342738629130214331, 0.0253920653092620595, 0.0162743947309056706, 0.0070186100094700966};

} // namespace

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double norm_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

SpectralMoments spectral_moments(int n) {
    if (n < 1) throw std::invalid_argument("gaussian_reference: n must be >= 1");
    const double nn = n;
    const double s2 = (nn + 1.0) * (2.0 * nn + 1.0) / (6.0 * nn * nn);
    return {n, s2, std::sqrt(s2)};
}

std::array<std::array<double, 2>, 2> covariance_matrix(int n) {
    const auto sm = spectral_moments(n);
    return {{{1.0, 0.0}, {0.0, sm.sigma_sq}}};
}

double exact_expected_zeros(int n, double a, double b) {
    if (!(b > a)) throw std::invalid_argument("gaussian_reference: interval requires a < b");
    const double nn = n;
    return (b - a) / std::numbers::pi * std::sqrt((nn + 1.0) * (2.0 * nn + 1.0) / 6.0);
}

double gaussian_abs_slope_mass(int n, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("gaussian_reference: delta must be positive");
    const auto sm = spectral_moments(n);
    return sm.sigma * std::sqrt(2.0 / std::numbers::pi) * std::erf(delta / std::numbers::sqrt2);
}

double gaussian_kac_functional(int n, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("gaussian_reference: r must be positive");
    const double nr = std::pow(static_cast<double>(n), r);
    return 0.5 * nr * gaussian_abs_slope_mass(n, 1.0 / nr);
}

double gaussian_small_ball(double sigma, double delta) {
    if (!(sigma > 0.0) || !(delta > 0.0))
        throw std::invalid_argument("gaussian_reference: sigma and delta must be positive");
    // P = 2 int_0^delta phi(x) erf( sqrt(delta^2-x^2) / (sigma sqrt 2) ) dx,
    // substituted x = delta sin(u) to keep the integrand smooth at x = delta.
    const double half_pi = 0.5 * std::numbers::pi;
    auto integrand = [&](double u) {
        const double s = std::sin(u), c = std::cos(u);
        return norm_pdf(delta * s) * std::erf(delta * c / (sigma * std::numbers::sqrt2)) * c;
    };
    double acc = 0.0;
    const double mid = 0.5 * half_pi, half = 0.5 * half_pi;
    for (int i = 0; i < kGL; ++i) {
        acc += gl_w[i] * (integrand(mid + half * gl_x[i]) + integrand(mid - half * gl_x[i]));
    }
    // the fixed-order rule can overshoot by ~1e-5 for huge delta; it is a probability
    return std::clamp(2.0 * delta * half * acc, 0.0, 1.0);
}

} // namespace rtpz::gauss
