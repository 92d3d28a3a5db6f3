#include "rtpz/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace rtpz::dist {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr int kMaxMomentOrder = 12;

double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
    return r;
}

// Half-line Gaussian moments I_k = int_0^inf x^k N(mu,sigma^2)(x) dx, used for
// absolute moments of a shifted Gaussian: E|X|^k = I_k(mu) + I_k(-mu).
std::vector<double> gaussian_half_moments(double mu, double sigma, int order) {
    std::vector<double> I(order + 1);
    const double z = mu / sigma;
    const double Phi = 0.5 * std::erfc(-z / std::numbers::sqrt2);
    const double phi0 = std::exp(-0.5 * z * z) / (sigma * std::sqrt(two_pi));
    I[0] = Phi;
    if (order >= 1) I[1] = mu * Phi + sigma * sigma * phi0;
    for (int k = 2; k <= order; ++k)
        I[k] = mu * I[k - 1] + (k - 1) * sigma * sigma * I[k - 2];
    return I;
}

} // namespace

std::vector<double> cumulants_from_moments(const std::vector<double>& raw) {
    const int s = static_cast<int>(raw.size()) - 1;
    std::vector<double> kap(s + 1, 0.0);
    for (int n = 1; n <= s; ++n) {
        double acc = raw[n];
        for (int j = 1; j < n; ++j) acc -= binom(n - 1, j - 1) * kap[j] * raw[n - j];
        kap[n] = acc;
    }
    return kap;
}

std::vector<double> moments_from_cumulants(const std::vector<double>& cum) {
    const int s = static_cast<int>(cum.size()) - 1;
    std::vector<double> m(s + 1, 0.0);
    m[0] = 1.0;
    for (int n = 1; n <= s; ++n) {
        double acc = 0.0;
        for (int j = 1; j <= n; ++j) acc += binom(n - 1, j - 1) * cum[j] * m[n - j];
        m[n] = acc;
    }
    return m;
}

bool is_prime(int p) {
    if (p < 2) return false;
    for (int d = 2; static_cast<long>(d) * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

struct CoefficientLaw::Data {
    LawKind kind;
    // Gaussian
    double mean = 0.0, variance = 1.0;
    // UniformInterval
    double lo = 0.0, hi = 1.0;
    // DiscreteAtoms: sorted atoms, matching weights, cumulative weights for
    // inverse-CDF sampling.
    std::vector<double> atoms, weights, cumweights;
    // BlockedCosine
    int period = 0;
    std::vector<double> block_coeffs; // cos(2*pi*l/p), l = 1..p
    // Affine: X = shift + scale * Y
    std::shared_ptr<const Data> base;
    double shift = 0.0, scale = 1.0;
};

CoefficientLaw CoefficientLaw::gaussian(double mean, double variance) {
    if (!(variance > 0.0)) throw std::invalid_argument("distributions: gaussian variance must be positive");
    auto d = std::make_shared<CoefficientLaw::Data>();
    d->kind = LawKind::Gaussian;
    d->mean = mean;
    d->variance = variance;
    return CoefficientLaw(std::move(d));
}

CoefficientLaw CoefficientLaw::uniform_interval(double lo, double hi) {
    if (!(lo < hi)) throw std::invalid_argument("distributions: uniform interval requires lo < hi");
    auto d = std::make_shared<CoefficientLaw::Data>();
    d->kind = LawKind::UniformInterval;
    d->lo = lo;
    d->hi = hi;
    return CoefficientLaw(std::move(d));
}

CoefficientLaw CoefficientLaw::discrete_atoms(std::vector<double> atoms, std::vector<double> weights) {
    if (atoms.size() != weights.size() || atoms.empty())
        throw std::invalid_argument("distributions: atoms and weights must be non-empty and matched");
    std::vector<std::size_t> idx(atoms.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return atoms[a] < atoms[b]; });
    std::vector<double> za(atoms.size()), wa(atoms.size());
    for (std::size_t i = 0; i < idx.size(); ++i) { za[i] = atoms[idx[i]]; wa[i] = weights[idx[i]]; }
    double total = 0.0;
    for (double w : wa) {
        if (!(w > 0.0)) throw std::invalid_argument("distributions: atom weights must be positive");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("distributions: atom weights must sum to 1 (degenerate law)");
    for (std::size_t i = 1; i < za.size(); ++i)
        if (!(za[i] > za[i - 1]))
            throw std::invalid_argument("distributions: duplicate atoms, merge weights first");
    auto d = std::make_shared<CoefficientLaw::Data>();
    d->kind = LawKind::DiscreteAtoms;
    d->atoms = std::move(za);
    d->weights = std::move(wa);
    d->cumweights.resize(d->weights.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < d->weights.size(); ++i) { acc += d->weights[i]; d->cumweights[i] = acc; }
    d->cumweights.back() = 1.0;
    return CoefficientLaw(std::move(d));
}

CoefficientLaw CoefficientLaw::blocked_cosine(int period) {
    if (period < 3) throw std::invalid_argument("distributions: blocked cosine period must be >= 3");
    if (period > 62) throw std::invalid_argument("distributions: blocked cosine period too large");
    auto d = std::make_shared<CoefficientLaw::Data>();
    d->kind = LawKind::BlockedCosine;
    d->period = period;
    d->block_coeffs.resize(period);
    for (int l = 1; l <= period; ++l)
        d->block_coeffs[l - 1] = std::cos(two_pi * l / period);
    return CoefficientLaw(std::move(d));
}

CoefficientLaw CoefficientLaw::affine(const CoefficientLaw& base, double shift, double scale) {
    if (scale == 0.0) throw std::invalid_argument("distributions: affine scale must be nonzero (degenerate law)");
    auto d = std::make_shared<CoefficientLaw::Data>();
    d->kind = LawKind::Affine;
    d->base = base.data_;
    d->shift = shift;
    d->scale = scale;
    return CoefficientLaw(std::move(d));
}

CoefficientLaw CoefficientLaw::make_rademacher() {
    return discrete_atoms({-1.0, 1.0}, {0.5, 0.5});
}

CoefficientLaw CoefficientLaw::make_sqrt_primes() {
    std::vector<double> a = {1.0, std::sqrt(2.0), std::sqrt(3.0), std::sqrt(5.0), std::sqrt(7.0)};
    std::vector<double> w(5, 0.2);
    return discrete_atoms(std::move(a), std::move(w)).standardized();
}

CoefficientLaw CoefficientLaw::make_cos_atoms(int p) {
    if (p < 5 || !is_prime(p))
        throw std::invalid_argument("distributions: cos-atoms law requires a prime p >= 5");
    // cos(2*pi*i/p) = cos(2*pi*(p-i)/p): fold i and p-i together, each distinct
    // value keeps the total weight of its preimages.
    std::vector<double> atoms, weights;
    const double w = 1.0 / (p - 1);
    for (int i = 1; i <= (p - 1) / 2; ++i) {
        atoms.push_back(std::cos(two_pi * i / p));
        weights.push_back(2.0 * w);
    }
    return discrete_atoms(std::move(atoms), std::move(weights));
}

CoefficientLaw CoefficientLaw::make_sqrt_poisson(double lambda, int truncation) {
    if (!(lambda > 0.0)) throw std::invalid_argument("distributions: sqrt-poisson lambda must be positive");
    int K = truncation;
    if (K < 0) {
        // Smallest K with truncated mass >= 1 - 1e-13.
        double pmf = std::exp(-lambda), mass = pmf;
        K = 0;
        while (1.0 - mass > 1e-13 && K < 4096) {
            ++K;
            pmf *= lambda / K;
            mass += pmf;
        }
    }
    std::vector<double> atoms(K + 1), weights(K + 1);
    double pmf = std::exp(-lambda), mass = 0.0;
    for (int k = 0; k <= K; ++k) {
        atoms[k] = std::sqrt(static_cast<double>(k));
        weights[k] = pmf;
        mass += pmf;
        pmf *= lambda / (k + 1);
    }
    if (mass < 1.0 - 1e-12)
        throw std::invalid_argument("distributions: sqrt-poisson truncation keeps less than 1 - 1e-12 mass");
    for (double& w : weights) w /= mass;
    return discrete_atoms(std::move(atoms), std::move(weights)).standardized();
}

CoefficientLaw CoefficientLaw::make_blocked_cosine(int p) { return blocked_cosine(p); }

LawKind CoefficientLaw::kind() const { return data_->kind; }

double CoefficientLaw::mean() const {
    const Data& d = *data_;
    switch (d.kind) {
        case LawKind::Gaussian: return d.mean;
        case LawKind::UniformInterval: return 0.5 * (d.lo + d.hi);
        case LawKind::DiscreteAtoms: {
            double m = 0.0;
            for (std::size_t i = 0; i < d.atoms.size(); ++i) m += d.weights[i] * d.atoms[i];
            return m;
        }
        case LawKind::BlockedCosine: return 0.0;
        case LawKind::Affine: return d.shift + d.scale * CoefficientLaw(d.base).mean();
    }
    return 0.0;
}

double CoefficientLaw::variance() const {
    const Data& d = *data_;
    switch (d.kind) {
        case LawKind::Gaussian: return d.variance;
        case LawKind::UniformInterval: {
            const double w = d.hi - d.lo;
            return w * w / 12.0;
        }
        case LawKind::DiscreteAtoms: {
            const double m = mean();
            double v = 0.0;
            for (std::size_t i = 0; i < d.atoms.size(); ++i) {
                const double c = d.atoms[i] - m;
                v += d.weights[i] * c * c;
            }
            return v;
        }
        case LawKind::BlockedCosine: {
            // sum cos^2(2*pi*l/p) = p/2 for p >= 3
            double v = 0.0;
            for (double c : d.block_coeffs) v += c * c;
            return v;
        }
        case LawKind::Affine: return d.scale * d.scale * CoefficientLaw(d.base).variance();
    }
    return 0.0;
}

std::complex<double> CoefficientLaw::char_fn(double t) const {
    const Data& d = *data_;
    switch (d.kind) {
        case LawKind::Gaussian:
            return std::exp(std::complex<double>(-0.5 * d.variance * t * t, d.mean * t));
        case LawKind::UniformInterval: {
            const double c = 0.5 * (d.lo + d.hi), h = 0.5 * (d.hi - d.lo);
            const double x = h * t;
            const double sinc = std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
            return std::polar(1.0, c * t) * sinc;
        }
        case LawKind::DiscreteAtoms: {
            std::complex<double> acc(0.0, 0.0);
            for (std::size_t i = 0; i < d.atoms.size(); ++i)
                acc += d.weights[i] * std::polar(1.0, t * d.atoms[i]);
            return acc;
        }
        case LawKind::BlockedCosine: {
            double prod = 1.0;
            for (double c : d.block_coeffs) prod *= std::cos(c * t);
            return {prod, 0.0};
        }
        case LawKind::Affine:
            return std::polar(1.0, d.shift * t) * CoefficientLaw(d.base).char_fn(d.scale * t);
    }
    return {1.0, 0.0};
}

bool CoefficientLaw::is_discrete() const {
    switch (data_->kind) {
        case LawKind::DiscreteAtoms:
        case LawKind::BlockedCosine: return true;
        case LawKind::Affine: return CoefficientLaw(data_->base).is_discrete();
        default: return false;
    }
}

void CoefficientLaw::atomize(std::vector<double>& atoms, std::vector<double>& weights) const {
    const Data& d = *data_;
    switch (d.kind) {
        case LawKind::DiscreteAtoms:
            atoms = d.atoms;
            weights = d.weights;
            return;
        case LawKind::BlockedCosine: {
            if (d.period > 22)
                throw std::invalid_argument("distributions: blocked cosine atom enumeration supported for period <= 22");
            const std::uint64_t patterns = 1ULL << d.period;
            std::vector<std::pair<double, double>> vals(patterns);
            for (std::uint64_t bits = 0; bits < patterns; ++bits) {
                double s = 0.0;
                for (int l = 0; l < d.period; ++l)
                    s += (bits >> l) & 1ULL ? d.block_coeffs[l] : -d.block_coeffs[l];
                vals[bits] = {s, 1.0 / static_cast<double>(patterns)};
            }
            std::sort(vals.begin(), vals.end());
            atoms.clear();
            weights.clear();
            for (const auto& [z, w] : vals) {
                if (!atoms.empty() && z - atoms.back() <= 1e-12) {
                    weights.back() += w;
                } else {
                    atoms.push_back(z);
                    weights.push_back(w);
                }
            }
            return;
        }
        case LawKind::Affine: {
            CoefficientLaw(d.base).atomize(atoms, weights);
            for (double& z : atoms) z = d.shift + d.scale * z;
            if (d.scale < 0.0) {
                std::reverse(atoms.begin(), atoms.end());
                std::reverse(weights.begin(), weights.end());
            }
            return;
        }
        default:
            throw std::invalid_argument("distributions: law has a continuous component, no atom list");
    }
}

MomentSummary CoefficientLaw::moments(int order) const {
    if (order < 2 || order > kMaxMomentOrder)
        throw std::invalid_argument("distributions: moment order must be in [2, 12]");
    const Data& d = *data_;
    MomentSummary ms;
    ms.raw.assign(order + 1, 0.0);
    ms.abs.assign(order + 1, 0.0);
    ms.raw[0] = ms.abs[0] = 1.0;

    switch (d.kind) {
        case LawKind::Gaussian: {
            // Raw: m_k = mu m_{k-1} + (k-1) v m_{k-2}.
            ms.raw[1] = d.mean;
            for (int k = 2; k <= order; ++k)
                ms.raw[k] = d.mean * ms.raw[k - 1] + (k - 1) * d.variance * ms.raw[k - 2];
            const double sig = std::sqrt(d.variance);
            const auto Ip = gaussian_half_moments(d.mean, sig, order);
            const auto Im = gaussian_half_moments(-d.mean, sig, order);
            for (int k = 1; k <= order; ++k) ms.abs[k] = Ip[k] + Im[k];
            break;
        }
        case LawKind::UniformInterval: {
            for (int k = 1; k <= order; ++k)
                ms.raw[k] = (std::pow(d.hi, k + 1) - std::pow(d.lo, k + 1)) / ((k + 1) * (d.hi - d.lo));
            for (int k = 1; k <= order; ++k) {
                double v;
                if (d.lo >= 0.0) {
                    v = ms.raw[k];
                } else if (d.hi <= 0.0) {
                    v = (std::pow(-d.lo, k + 1) - std::pow(-d.hi, k + 1)) / ((k + 1) * (d.hi - d.lo));
                } else {
                    v = (std::pow(d.hi, k + 1) + std::pow(-d.lo, k + 1)) / ((k + 1) * (d.hi - d.lo));
                }
                ms.abs[k] = v;
            }
            break;
        }
        case LawKind::DiscreteAtoms:
        case LawKind::Affine: {
            if (is_discrete()) {
                std::vector<double> z, w;
                atomize(z, w);
                for (int k = 1; k <= order; ++k) {
                    double r = 0.0, a = 0.0;
                    for (std::size_t i = 0; i < z.size(); ++i) {
                        const double p = std::pow(z[i], k);
                        r += w[i] * p;
                        a += w[i] * std::abs(p);
                    }
                    ms.raw[k] = r;
                    ms.abs[k] = a;
                }
            } else {
                // Affine over a continuous base: raw moments by binomial
                // expansion, absolute moments per base family.
                const CoefficientLaw b(d.base);
                if (b.kind() == LawKind::Gaussian)
                    return gaussian(d.shift + d.scale * b.param_mean(),
                                    d.scale * d.scale * b.param_variance())
                        .moments(order);
                if (b.kind() == LawKind::UniformInterval) {
                    double a0 = d.shift + d.scale * b.param_lo();
                    double a1 = d.shift + d.scale * b.param_hi();
                    if (a0 > a1) std::swap(a0, a1);
                    return uniform_interval(a0, a1).moments(order);
                }
                throw std::invalid_argument("distributions: unsupported affine base for moments");
            }
            break;
        }
        case LawKind::BlockedCosine: {
            // Cumulants are additive over the independent signed summands:
            // kappa_m(Y) = kappa_m(eps) * sum_l cos(2*pi*l/p)^m.
            std::vector<double> rade_raw(order + 1, 0.0);
            rade_raw[0] = 1.0;
            for (int k = 2; k <= order; k += 2) rade_raw[k] = 1.0;
            const auto rade_cum = cumulants_from_moments(rade_raw);
            std::vector<double> cum(order + 1, 0.0);
            for (int m = 2; m <= order; ++m) {
                double s = 0.0;
                for (double c : d.block_coeffs) s += std::pow(c, m);
                cum[m] = rade_cum[m] * s;
            }
            ms.raw = moments_from_cumulants(cum);
            std::vector<double> z, w;
            atomize(z, w);
            for (int k = 1; k <= order; ++k) {
                double a = 0.0;
                for (std::size_t i = 0; i < z.size(); ++i) a += w[i] * std::pow(std::abs(z[i]), k);
                ms.abs[k] = a;
            }
            break;
        }
    }

    ms.cumulant = cumulants_from_moments(ms.raw);
    ms.mean = ms.raw[1];
    ms.variance = ms.cumulant[2];
    return ms;
}

bool CoefficientLaw::is_standardized(double tol) const {
    return std::abs(mean()) <= tol && std::abs(variance() - 1.0) <= tol;
}

CoefficientLaw CoefficientLaw::standardized() const {
    const double m = mean();
    const double v = variance();
    if (!(v > 0.0)) throw std::invalid_argument("distributions: cannot standardize a degenerate law");
    if (std::abs(m) <= 1e-15 && std::abs(v - 1.0) <= 1e-15) return *this;
    const double s = std::sqrt(v);
    const Data& d = *data_;
    switch (d.kind) {
        case LawKind::Gaussian:
            return gaussian(0.0, 1.0);
        case LawKind::UniformInterval:
            return uniform_interval((d.lo - m) / s, (d.hi - m) / s);
        case LawKind::DiscreteAtoms: {
            std::vector<double> z(d.atoms.size());
            for (std::size_t i = 0; i < z.size(); ++i) z[i] = (d.atoms[i] - m) / s;
            return discrete_atoms(std::move(z), d.weights);
        }
        case LawKind::BlockedCosine:
            return affine(*this, -m / s, 1.0 / s);
        case LawKind::Affine: {
            // Flatten nested affine maps onto the innermost base, then
            // standardize that single map: (tsh + tsc*Y - m)/s.
            double tsh = d.shift, tsc = d.scale;
            auto bb = d.base;
            while (bb->kind == LawKind::Affine) {
                tsh += tsc * bb->shift;
                tsc *= bb->scale;
                bb = bb->base;
            }
            const CoefficientLaw inner(bb);
            const double nsh = (tsh - m) / s, nsc = tsc / s;
            switch (inner.kind()) {
                case LawKind::Gaussian:
                    return gaussian(0.0, 1.0);
                case LawKind::UniformInterval: {
                    double a0 = nsh + nsc * bb->lo, a1 = nsh + nsc * bb->hi;
                    if (a0 > a1) std::swap(a0, a1);
                    return uniform_interval(a0, a1);
                }
                case LawKind::DiscreteAtoms: {
                    std::vector<double> z(bb->atoms.size()), w = bb->weights;
                    for (std::size_t i = 0; i < z.size(); ++i) z[i] = nsh + nsc * bb->atoms[i];
                    if (nsc < 0.0) {
                        std::reverse(z.begin(), z.end());
                        std::reverse(w.begin(), w.end());
                    }
                    return discrete_atoms(std::move(z), std::move(w));
                }
                default:
                    return affine(inner, nsh, nsc);
            }
        }
    }
    throw std::logic_error("distributions: unreachable");
}

void CoefficientLaw::sample(RngStream& stream, std::span<double> out) const {
    const Data& d = *data_;
    switch (d.kind) {
        case LawKind::Gaussian: {
            const double sig = std::sqrt(d.variance);
            for (double& x : out) x = d.mean + sig * stream.next_gaussian();
            return;
        }
        case LawKind::UniformInterval:
            for (double& x : out) {
                x = d.lo + (d.hi - d.lo) * stream.next_unit();
                stream.skip(1);
            }
            return;
        case LawKind::DiscreteAtoms:
            for (double& x : out) {
                const double u = stream.next_unit();
                stream.skip(1);
                const auto it = std::lower_bound(d.cumweights.begin(), d.cumweights.end(), u);
                const std::size_t idx = std::min<std::size_t>(it - d.cumweights.begin(), d.atoms.size() - 1);
                x = d.atoms[idx];
            }
            return;
        case LawKind::BlockedCosine:
            for (double& x : out) {
                const std::uint64_t bits = stream.next_u64();
                stream.skip(1);
                double s = 0.0;
                for (int l = 0; l < d.period; ++l)
                    s += (bits >> l) & 1ULL ? d.block_coeffs[l] : -d.block_coeffs[l];
                x = s;
            }
            return;
        case LawKind::Affine: {
            CoefficientLaw(d.base).sample(stream, out);
            for (double& x : out) x = d.shift + d.scale * x;
            return;
        }
    }
}

std::vector<double> CoefficientLaw::sample(RngStream& stream, std::size_t count) const {
    std::vector<double> out(count);
    sample(stream, std::span<double>(out));
    return out;
}

double CoefficientLaw::param_mean() const { return data_->mean; }
double CoefficientLaw::param_variance() const { return data_->variance; }
double CoefficientLaw::param_lo() const { return data_->lo; }
double CoefficientLaw::param_hi() const { return data_->hi; }
int CoefficientLaw::param_period() const { return data_->period; }
double CoefficientLaw::param_shift() const { return data_->shift; }
double CoefficientLaw::param_scale() const { return data_->scale; }
CoefficientLaw CoefficientLaw::base() const { return CoefficientLaw(data_->base); }
const std::vector<double>& CoefficientLaw::atom_values() const { return data_->atoms; }
const std::vector<double>& CoefficientLaw::atom_weights() const { return data_->weights; }

std::string CoefficientLaw::describe() const {
    const Data& d = *data_;
    char buf[128];
    switch (d.kind) {
        case LawKind::Gaussian:
            std::snprintf(buf, sizeof buf, "gaussian(%g,%g)", d.mean, d.variance);
            return buf;
        case LawKind::UniformInterval:
            std::snprintf(buf, sizeof buf, "uniform(%g,%g)", d.lo, d.hi);
            return buf;
        case LawKind::DiscreteAtoms:
            std::snprintf(buf, sizeof buf, "atoms[%zu]", d.atoms.size());
            return buf;
        case LawKind::BlockedCosine:
            std::snprintf(buf, sizeof buf, "blocked-cosine(%d)", d.period);
            return buf;
        case LawKind::Affine:
            return "affine(" + CoefficientLaw(d.base).describe() + ")";
    }
    return "?";
}

} // namespace rtpz::dist
