#pragma once

#include <functional>
#include <vector>

#include "rtpz/distributions.hpp"

namespace rtpz::edgeworth {

using dist::CoefficientLaw;

// Average standardized cumulants of a summand family after whitening by the
// inverse square root of the mean covariance.  1-D tables fill chi (chi[m] for
// m <= order); 2-D tables fill chi2 (chi2[p][q] for p+q <= order) for the
// (value, derivative) summand family at a fixed angle, where the second
// coordinate was whitened by 1/sigma_n.
struct CumulantTable {
    int dim = 1;
    int order = 0;
    std::vector<double> chi;
    std::vector<std::vector<double>> chi2;
    double sigma_n = 1.0;
    long family_n = 0;
    double family_t = 0.0;
};

// Correction polynomials P_l, l = 1..s-2, of the expansion
// (1 + sum n^{-l/2} P_l(z)) rho(z), stored over plain monomials z^m before the
// Hermite substitution; poly[l][m] is the z^m coefficient of P_l.
struct EdgeworthApprox {
    int s = 2;
    std::vector<std::vector<double>> poly;
};

// Exact mean cumulants of the listed laws, whitened by the family's standard
// deviation.  The family must be centered.
CumulantTable average_cumulants(const std::vector<CoefficientLaw>& laws, int s);

// Bivariate table for the summands X_i = (a_i c_i + b_i s_i, d_i (b_i c_i - a_i s_i))
// with c_i = cos(i t / n), s_i = sin(i t / n), d_i = i / n, and a_i, b_i drawn
// from a standardized law.  The mean covariance is diag(1, sigma_n^2); the
// table stores cumulants of the whitened family.
CumulantTable average_cumulants_bivariate(const CoefficientLaw& law, long n, double t, int s);

// Builds P_1..P_{s-2} from a 1-D table via exp-series composition of
// u_l(z) = chi_{l+2} z^{l+2} / (l+2)!.
EdgeworthApprox build_corrections_1d(const CumulantTable& table, int s);

// Phi(x) plus the order s-2 Edgeworth CDF correction for the normalized sum
// of n summands with the given cumulants; s in {3, 4, 5}.  s = 2 is accepted
// and returns Phi(x) exactly.
double edgeworth_cdf_1d(const CumulantTable& table, long n, int s, double x);

// Exact distribution of a finite-atom sum, queryable as a CDF.
class DiscreteCdf {
public:
    DiscreteCdf(std::vector<double> atoms, std::vector<double> weights);

    double cdf(double x) const;      // P(X <= x)
    double cdf_left(double x) const; // P(X < x)
    double total_mass() const;
    const std::vector<double>& atoms() const { return atoms_; }
    const std::vector<double>& weights() const { return weights_; }

private:
    std::vector<double> atoms_;
    std::vector<double> weights_;
    std::vector<double> cum_;
};

// Exact law of (X_1 + ... + X_n)/sqrt(n) for a purely discrete law, by
// iterated convolution of atom lists; colliding atoms merge at 1e-14
// resolution.  Guarded against product spaces above 2e7 atoms.
DiscreteCdf exact_sum_cdf_oracle(const CoefficientLaw& law, int n);

// Kolmogorov distance of a discrete CDF to a continuous one: the sup is
// attained at the atoms, approached from either side.
double kolmogorov_distance(const DiscreteCdf& F, const std::function<double(double)>& G);
// Generic probe-grid variant.
double kolmogorov_distance(const std::function<double(double)>& F,
                           const std::function<double(double)>& G,
                           const std::vector<double>& probes);

// Corrected Kac functional
//   (n^r / 2) E[ |U'| 1{|U| <= n^-r} ]
// evaluated on the Edgeworth approximation of the bivariate table up to
// correction order l_max <= 2.  All integrals are closed-form: Hermite-times-
// Gaussian antiderivatives in the value coordinate, half-line Gaussian moments
// in the slope coordinate.  l_max = 0 reduces to the exact Gaussian value.
double edgeworth_kac_functional(const CumulantTable& table, long n, double r, int l_max);

// Integral of the oscillation of g(x,y) = |y| 1{|x| < delta} over Euclidean
// eps-balls against the standard bivariate Gaussian.  Piecewise closed form:
// away from the boundary strips the oscillation is min(2 eps, |y| + eps);
// inside them it is |y| + eps.
double gaussian_averaged_modulus(double delta, double eps);

} // namespace rtpz::edgeworth
