#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "rtpz/rng.hpp"

namespace rtpz::dist {

enum class LawKind { Gaussian, UniformInterval, DiscreteAtoms, BlockedCosine, Affine };

// Moments of a coefficient law: raw E[X^k], absolute E[|X|^k] and cumulants,
// all for k = 1..order.  Index 0 is unused and holds the order-0 value (1).
struct MomentSummary {
    double mean = 0.0;
    double variance = 0.0;
    std::vector<double> raw;
    std::vector<double> abs;
    std::vector<double> cumulant;
    int order() const { return static_cast<int>(raw.size()) - 1; }
};

// Immutable value type describing the distribution of one random coefficient.
// Copies share the underlying description; all methods are const and safe to
// call concurrently.
class CoefficientLaw {
public:
    static CoefficientLaw gaussian(double mean, double variance);
    static CoefficientLaw uniform_interval(double lo, double hi);
    static CoefficientLaw discrete_atoms(std::vector<double> atoms, std::vector<double> weights);
    static CoefficientLaw blocked_cosine(int period);
    static CoefficientLaw affine(const CoefficientLaw& base, double shift, double scale);

    // Builtins used by the experiments.
    static CoefficientLaw make_rademacher();
    static CoefficientLaw make_sqrt_primes();          // standardized sqrt{1,2,3,5,7}, uniform weights
    static CoefficientLaw make_cos_atoms(int p);       // uniform on cos(2*pi*i/p), i=1..p-1, p prime >= 5
    static CoefficientLaw make_sqrt_poisson(double lambda, int truncation = -1); // standardized sqrt(Poisson)
    static CoefficientLaw make_blocked_cosine(int p);

    LawKind kind() const;

    double mean() const;
    double variance() const;

    std::complex<double> char_fn(double t) const;
    double abs_char_fn(double t) const { return std::abs(char_fn(t)); }

    // order <= 12; throws std::invalid_argument beyond (unsupported order).
    MomentSummary moments(int order = 6) const;

    CoefficientLaw standardized() const;
    bool is_standardized(double tol = 1e-9) const;

    // Fills out with draws; draw j depends only on (stream key, stream counter + 2j),
    // so identical streams give identical output across runs and thread layouts.
    void sample(RngStream& stream, std::span<double> out) const;
    std::vector<double> sample(RngStream& stream, std::size_t count) const;

    bool is_discrete() const;
    // Sorted atom/weight lists for purely discrete laws (BlockedCosine laws are
    // expanded from their 2^p sign patterns, duplicates merged).  Throws for
    // laws with a continuous component.
    void atomize(std::vector<double>& atoms, std::vector<double>& weights) const;

    // Structural parameters (valid for the matching kind).
    double param_mean() const;      // Gaussian
    double param_variance() const;  // Gaussian
    double param_lo() const;        // UniformInterval
    double param_hi() const;        // UniformInterval
    int param_period() const;       // BlockedCosine
    double param_shift() const;     // Affine
    double param_scale() const;     // Affine
    CoefficientLaw base() const;    // Affine
    const std::vector<double>& atom_values() const;   // DiscreteAtoms
    const std::vector<double>& atom_weights() const;  // DiscreteAtoms

    // Short stable identifier used in CSV output, e.g. "gaussian(0,1)".
    std::string describe() const;

private:
    struct Data;
    explicit CoefficientLaw(std::shared_ptr<const Data> d) : data_(std::move(d)) {}
    std::shared_ptr<const Data> data_;
};

// Moment/cumulant conversions (raw moment and cumulant vectors indexed 1..order,
// element 0 ignored).  kappa_1 = m_1, kappa_n = m_n - sum C(n-1,j-1) kappa_j m_{n-j}.
std::vector<double> cumulants_from_moments(const std::vector<double>& raw);
std::vector<double> moments_from_cumulants(const std::vector<double>& cum);

bool is_prime(int p);

} // namespace rtpz::dist
