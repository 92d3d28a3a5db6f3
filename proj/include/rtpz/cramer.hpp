#pragma once

#include <vector>

#include "rtpz/distributions.hpp"

namespace rtpz::cramer {

using dist::CoefficientLaw;

// Verdict of a finite scan of |phi(t)| <= 1 - C/|t|^b over [R, T_max].
// A pass is evidence on the scanned range, not a proof for all t.
struct CramerCertificate {
    double b = 0.0;
    double C = 0.0;
    double R = 0.0;
    double T_max = 0.0;
    bool pass = false;
    double worst_t = 0.0;
    double worst_margin = 0.0; // min over scan of (1 - |phi(t)|) * |t|^b - C
};

// Per-window sup of |phi| over a tiling of [R, T_max], with the location of
// each sup.  Windows are equal-width: [center - half_width, center + half_width].
struct EnvelopeTable {
    double half_width = 0.0;
    std::vector<double> centers;
    std::vector<double> sup_abs_phi;
    std::vector<double> argmax_t;
};

struct CramerFit {
    double b_hat = 0.0;
    double C_hat = 0.0;
    double residual = 0.0; // RMS of log(1 - sup) around the fitted line
};

// Tiles [R, T_max] into windows of width <= window and records each window's
// sup |phi|: dense grid (step <= window/64) plus golden-section refinement
// around the grid argmax.
EnvelopeTable envelope(const CoefficientLaw& law, double R, double T_max,
                       double window, int refine_iters = 40);

// Scans (1 - |phi(t)|) * |t|^b - C over grid points and refined window maxima
// of [R, T_max]; pass iff the margin never goes negative.
CramerCertificate probe_weak_cramer(const CoefficientLaw& law, double b, double C,
                                    double R, double T_max);

// Least-squares fit of log(1 - sup|phi|) = log C - b log t over the window
// argmax points with sup < 1.  Needs at least 8 such windows; a flat envelope
// (all usable sups equal) is rejected as degenerate.
CramerFit fit_cramer_exponent(const EnvelopeTable& envelope);

// Lower bound for 1 - |phi(t)| of a law with atoms U_1 < ... < U_m and
// minimum weight c_min:
//   1 - |phi(t)| >= (c_min^2 / pi^2) * sum_{j>=2} dist(t (U_1 - U_j), 2 pi Z)^2
// Accepts any law that enumerates to at least two atoms.
double lattice_distance_lower_bound(const CoefficientLaw& law, double t);

// Arithmetic mean of |phi_i(t)| over a family of laws.
double mean_envelope(const std::vector<CoefficientLaw>& laws, double t);

// Mean of |phi(alpha_i)| * |phi(beta_i)| over i = 1..n for the bivariate
// summands of the (value, derivative) pair at angle t and dual point
// s = (s1, s2):
//   alpha_i = s1 cos(i t / n) - s2 (i/n) sin(i t / n)
//   beta_i  = s1 sin(i t / n) + s2 (i/n) cos(i t / n)
double bivariate_mean_abs_cf(const CoefficientLaw& law, long n, double t,
                             double s1, double s2);

// Numerically estimated sup over r <= t <= R of |phi| (single law) or of the
// mean envelope (family): grid scan plus golden-section refinement.
double local_cramer_sup(const CoefficientLaw& law, double r, double R, long grid);
double local_cramer_sup(const std::vector<CoefficientLaw>& laws, double r, double R, long grid);

} // namespace rtpz::cramer
