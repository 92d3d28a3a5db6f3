#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rtpz/distributions.hpp"
#include "rtpz/rng.hpp"

namespace rtpz::poly {

// Evaluation scaling:
//   Raw        P(t)   = sum_k a_k cos(kt + th_k) + b_k sin(kt + th_k)
//   Normalized u(t)   = P(t) / sqrt(n)
//   Rescaled   U(t)   = u(t/n), so U^(d)(t) = u^(d)(t/n) / n^d
enum class EvalMode { Raw, Normalized, Rescaled };

struct PhasePolicy {
    enum class Kind { Zero, Constant, UniformRandom, Explicit } kind = Kind::Zero;
    double constant = 0.0;
    std::uint64_t seed = 0;
    std::vector<double> values;

    static PhasePolicy zero() { return {}; }
    static PhasePolicy constant_phase(double c) { return {Kind::Constant, c, 0, {}}; }
    static PhasePolicy uniform_random(std::uint64_t seed) { return {Kind::UniformRandom, 0.0, seed, {}}; }
    static PhasePolicy explicit_phases(std::vector<double> v) { return {Kind::Explicit, 0.0, 0, std::move(v)}; }
};

class TrigPolynomial {
public:
    // Degree n >= 1; a, b, theta all length n (theta may be empty for zero phases).
    TrigPolynomial(std::vector<double> a, std::vector<double> b, std::vector<double> theta = {});

    int degree() const { return n_; }
    const std::vector<double>& coeff_a() const { return a_; }
    const std::vector<double>& coeff_b() const { return b_; }
    const std::vector<double>& phases() const { return theta_; }

    // d in 0..3.  Per-term angle recurrence from the reduced argument plus
    // compensated accumulation; no transcendental call sees an argument of
    // size k*t.
    double eval(double t, int deriv, EvalMode mode) const;
    // Fused value+derivative of the same mode (one recurrence pass).
    void eval_pair(double t, EvalMode mode, double& f, double& fp) const;
    // Fused value and first two derivatives (one recurrence pass).
    void eval_triple(double t, EvalMode mode, double& f, double& fp, double& fpp) const;
    std::vector<double> eval_grid(double lo, double hi, std::size_t points, int deriv, EvalMode mode) const;

    // Certified amplitude bound: sup |f^(d)| <= scale * sum (|a_k|+|b_k|) w_k^d
    // with weights k (raw/normalized) or k/n (rescaled).
    double sup_bound(int deriv, EvalMode mode) const;

private:
    int n_;
    std::vector<double> a_, b_, theta_;
    std::vector<double> cos_th_, sin_th_; // empty when all phases are zero
    bool zero_phase_;

    double kernel(double x, int deriv) const;
    void kernel_pair(double x, int d0, double& v0, double& v1) const;
    void kernel_triple(double x, double& v0, double& v1, double& v2) const;
};

// Draws the 2n coefficients a_1..a_n, b_1..b_n from a standardized law
// (enforced: |mean| <= 1e-9, |var-1| <= 1e-9) and applies the phase policy.
TrigPolynomial sample_polynomial(const dist::CoefficientLaw& law, int n,
                                 const PhasePolicy& phase, RngStream& stream);

std::vector<double> realize_phases(const PhasePolicy& policy, int n);

} // namespace rtpz::poly
