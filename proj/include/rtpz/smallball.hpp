#pragma once

#include <string>
#include <vector>

#include "rtpz/distributions.hpp"
#include "rtpz/rng.hpp"

namespace rtpz::smallball {

using dist::CoefficientLaw;

struct SmallBallEstimate {
    std::string law_id;
    long n = 0;
    double t = 0.0;
    double gamma = 0.0;
    long trials = 0;
    long hits = 0;
    double estimate = 0.0;  // hits / trials
    double std_error = 0.0; // sqrt(estimate (1 - estimate) / trials)
    double radius = 0.0;    // n^-gamma
    // One-sided 95% upper bound: rule of three (3/trials) when no trial hit,
    // estimate + 1.645 se otherwise.
    double upper95 = 0.0;
};

// Fraction of trials with ||(U_n(t), U_n'(t))||_2 <= n^-gamma, where U_n is
// the rescaled polynomial with fresh coefficients per trial and zero phases.
// Trial k draws from stream.substream(k), so hit counts do not depend on how
// trials are batched.
SmallBallEstimate small_ball_mc(const CoefficientLaw& law, long n, double t, double gamma,
                                long trials, const RngStream& stream);

struct DecayFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0; // RMS of log(estimate) around the fitted line
    long used = 0;
    long excluded = 0; // zero-hit entries dropped from the fit
};

// Least-squares slope of log(estimate) against log(n).  The small-ball decay
// bound predicts slope <= -2 gamma for laws in the admissible class.
DecayFit fit_decay_exponent(const std::vector<SmallBallEstimate>& estimates);

} // namespace rtpz::smallball
