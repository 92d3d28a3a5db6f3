#include "rtpz/edgeworth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rtpz/gaussian_reference.hpp"

namespace rtpz::edgeworth {

namespace {

using Poly1 = std::vector<double>; // coefficients over z^m

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

double ipow(double x, int p) {
    double r = 1.0;
    for (int i = 0; i < p; ++i) r *= x;
    return r;
}

Poly1 poly_mul(const Poly1& a, const Poly1& b) {
    if (a.empty() || b.empty()) return {};
    Poly1 c(a.size() + b.size() - 1, 0.0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

void poly_axpy(Poly1& dst, const Poly1& src, double c) {
    if (dst.size() < src.size()) dst.resize(src.size(), 0.0);
    for (size_t i = 0; i < src.size(); ++i) dst[i] += c * src[i];
}

// Probabilists' Hermite polynomials He_m.
double he_eval(int m, double x) {
    double h0 = 1.0, h1 = x;
    if (m == 0) return h0;
    for (int k = 1; k < m; ++k) {
        const double h2 = x * h1 - static_cast<double>(k) * h0;
        h0 = h1;
        h1 = h2;
    }
    return h1;
}

std::vector<Poly1> he_coeff_table(int max_m) {
    std::vector<Poly1> he(max_m + 1);
    he[0] = {1.0};
    if (max_m >= 1) he[1] = {0.0, 1.0};
    for (int m = 2; m <= max_m; ++m) {
        Poly1 p(m + 1, 0.0);
        for (size_t i = 0; i < he[m - 1].size(); ++i) p[i + 1] += he[m - 1][i];
        for (size_t i = 0; i < he[m - 2].size(); ++i) p[i] -= (m - 1) * he[m - 2][i];
        he[m] = std::move(p);
    }
    return he;
}

// exp-series composition: with U(w) = sum_{l>=1} u_l w^l, the coefficients of
// exp(U) = sum P_l w^l satisfy l P_l = sum_{j=1}^{l} j u_j P_{l-j}.
template <typename Poly, typename Mul, typename Axpy>
std::vector<Poly> compose_exp(const std::vector<Poly>& u, int l_max, Poly one,
                              const Mul& mul, const Axpy& axpy) {
    std::vector<Poly> P(l_max + 1);
    P[0] = std::move(one);
    for (int l = 1; l <= l_max; ++l) {
        Poly acc{};
        for (int j = 1; j <= l; ++j) {
            if (u[j].empty()) continue;
            axpy(acc, mul(u[j], P[l - j]), static_cast<double>(j));
        }
        axpy(P[l], acc, 1.0 / static_cast<double>(l));
    }
    return P;
}

// int_{-delta}^{delta} He_m(x) phi(x) dx: the antiderivative of He_m phi is
// -He_{m-1} phi, and odd m integrates to zero by symmetry.
double band_hermite_mass(int m, double delta) {
    if (m == 0) return std::erf(delta / std::numbers::sqrt2);
    if (m % 2 == 1) return 0.0;
    return -2.0 * he_eval(m - 1, delta) * gauss::norm_pdf(delta);
}

// int |y| He_m(y) phi(y) dy via half-line moments T_q = int_0^inf y^q phi,
// T_q = (q-1) T_{q-2}, T_0 = 1/2, T_1 = phi(0).
double abs_hermite_moment(int m, const std::vector<Poly1>& he) {
    if (m % 2 == 1) return 0.0;
    std::vector<double> T(m + 2);
    T[0] = 0.5;
    T[1] = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    for (int q = 2; q <= m + 1; ++q) T[q] = (q - 1) * T[q - 2];
    double acc = 0.0;
    for (size_t p = 0; p < he[m].size(); ++p) acc += he[m][p] * 2.0 * T[p + 1];
    return acc;
}

} // namespace

CumulantTable average_cumulants(const std::vector<CoefficientLaw>& laws, int s) {
    if (laws.empty()) throw std::invalid_argument("edgeworth: cumulant family is empty");
    if (s < 2 || s > 6) throw std::invalid_argument("edgeworth: cumulant order must be in [2, 6]");
    std::vector<double> mean_k(s + 1, 0.0);
    for (const CoefficientLaw& law : laws) {
        const dist::MomentSummary ms = law.moments(s);
        for (int m = 1; m <= s; ++m) mean_k[m] += ms.cumulant[m];
    }
    for (int m = 1; m <= s; ++m) mean_k[m] /= static_cast<double>(laws.size());
    if (std::abs(mean_k[1]) > 1e-9)
        throw std::invalid_argument("edgeworth: cumulant family must be centered");
    if (!(mean_k[2] > 0.0))
        throw std::invalid_argument("edgeworth: cumulant family is degenerate");

    CumulantTable table;
    table.dim = 1;
    table.order = s;
    table.chi.assign(s + 1, 0.0);
    const double sigma = std::sqrt(mean_k[2]);
    for (int m = 2; m <= s; ++m) table.chi[m] = mean_k[m] / ipow(sigma, m);
    return table;
}

CumulantTable average_cumulants_bivariate(const CoefficientLaw& law, long n, double t, int s) {
    if (n < 1) throw std::invalid_argument("edgeworth: bivariate family needs n >= 1");
    if (s < 2 || s > 6) throw std::invalid_argument("edgeworth: cumulant order must be in [2, 6]");
    if (!law.is_standardized())
        throw std::invalid_argument("edgeworth: bivariate family needs a standardized law");

    const dist::MomentSummary ms = law.moments(s);

    CumulantTable table;
    table.dim = 2;
    table.order = s;
    table.family_n = n;
    table.family_t = t;
    table.chi2.assign(s + 1, std::vector<double>(s + 1, 0.0));

    double sig2 = 0.0;
    for (long i = 1; i <= n; ++i) {
        const double d = static_cast<double>(i) / static_cast<double>(n);
        const double arg = static_cast<double>(i) * t / static_cast<double>(n);
        const double c = std::cos(arg), si = std::sin(arg);
        sig2 += d * d;
        // cumulants of a_i (c, -d si) + b_i (si, d c) add across the two
        // independent coefficients and scale like the weight powers
        for (int m = 2; m <= s; ++m) {
            const double km = ms.cumulant[m];
            if (km == 0.0) continue;
            for (int p = 0; p <= m; ++p) {
                const int q = m - p;
                table.chi2[p][q] += km * (ipow(c, p) * ipow(-d * si, q) +
                                          ipow(si, p) * ipow(d * c, q));
            }
        }
    }
    sig2 /= static_cast<double>(n);
    table.sigma_n = std::sqrt(sig2);
    for (int p = 0; p <= s; ++p)
        for (int q = 0; q + p <= s; ++q)
            table.chi2[p][q] /= static_cast<double>(n) * ipow(table.sigma_n, q);
    return table;
}

EdgeworthApprox build_corrections_1d(const CumulantTable& table, int s) {
    if (table.dim != 1) throw std::invalid_argument("edgeworth: 1-D corrections need a 1-D table");
    if (s < 2 || s > 5) throw std::invalid_argument("edgeworth: s must be in {2, 3, 4, 5}");
    if (table.order < s) throw std::invalid_argument("edgeworth: table order below requested s");

    const int l_max = s - 2;
    std::vector<Poly1> u(l_max + 1);
    for (int l = 1; l <= l_max; ++l) {
        Poly1 p(l + 3, 0.0);
        p[l + 2] = table.chi[l + 2] / factorial(l + 2);
        u[l] = std::move(p);
    }
    auto P = compose_exp<Poly1>(
        u, l_max, Poly1{1.0}, [](const Poly1& a, const Poly1& b) { return poly_mul(a, b); },
        [](Poly1& d, const Poly1& src, double c) { poly_axpy(d, src, c); });

    EdgeworthApprox approx;
    approx.s = s;
    approx.poly = std::move(P);
    return approx;
}

double edgeworth_cdf_1d(const CumulantTable& table, long n, int s, double x) {
    if (n < 1) throw std::invalid_argument("edgeworth: n must be >= 1");
    const EdgeworthApprox approx = build_corrections_1d(table, s);
    double F = gauss::norm_cdf(x);
    const double phi = gauss::norm_pdf(x);
    for (int l = 1; l <= s - 2; ++l) {
        const double scale = std::pow(static_cast<double>(n), -0.5 * l);
        const Poly1& P = approx.poly[l];
        double corr = 0.0;
        for (size_t m = 1; m < P.size(); ++m)
            if (P[m] != 0.0) corr += P[m] * he_eval(static_cast<int>(m) - 1, x);
        F -= scale * corr * phi;
    }
    return F;
}

DiscreteCdf::DiscreteCdf(std::vector<double> atoms, std::vector<double> weights)
    : atoms_(std::move(atoms)), weights_(std::move(weights)) {
    if (atoms_.size() != weights_.size() || atoms_.empty())
        throw std::invalid_argument("edgeworth: atom/weight lists must match and be nonempty");
    if (!std::is_sorted(atoms_.begin(), atoms_.end()))
        throw std::invalid_argument("edgeworth: atoms must be sorted");
    cum_.resize(atoms_.size());
    double acc = 0.0;
    for (size_t i = 0; i < weights_.size(); ++i) {
        if (weights_[i] < 0.0) throw std::invalid_argument("edgeworth: negative weight");
        acc += weights_[i];
        cum_[i] = acc;
    }
}

double DiscreteCdf::cdf(double x) const {
    const auto it = std::upper_bound(atoms_.begin(), atoms_.end(), x);
    return it == atoms_.begin() ? 0.0 : cum_[static_cast<size_t>(it - atoms_.begin()) - 1];
}

double DiscreteCdf::cdf_left(double x) const {
    const auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x);
    return it == atoms_.begin() ? 0.0 : cum_[static_cast<size_t>(it - atoms_.begin()) - 1];
}

double DiscreteCdf::total_mass() const { return cum_.back(); }

DiscreteCdf exact_sum_cdf_oracle(const CoefficientLaw& law, int n) {
    if (n < 1) throw std::invalid_argument("edgeworth: oracle needs n >= 1");
    std::vector<double> base_atoms, base_w;
    law.atomize(base_atoms, base_w);

    constexpr double collide = 1e-14;
    constexpr size_t cap = 20'000'000;
    std::vector<std::pair<double, double>> acc;
    acc.reserve(base_atoms.size());
    for (size_t i = 0; i < base_atoms.size(); ++i) acc.emplace_back(base_atoms[i], base_w[i]);

    std::vector<std::pair<double, double>> next;
    for (int step = 2; step <= n; ++step) {
        if (acc.size() * base_atoms.size() > cap)
            throw std::invalid_argument("edgeworth: oracle product space exceeds 2e7 atoms");
        next.clear();
        next.reserve(acc.size() * base_atoms.size());
        for (const auto& [a, wa] : acc)
            for (size_t j = 0; j < base_atoms.size(); ++j)
                next.emplace_back(a + base_atoms[j], wa * base_w[j]);
        std::sort(next.begin(), next.end());
        acc.clear();
        for (const auto& [a, w] : next) {
            if (!acc.empty() && a - acc.back().first <= collide)
                acc.back().second += w;
            else
                acc.emplace_back(a, w);
        }
    }

    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    std::vector<double> atoms(acc.size()), weights(acc.size());
    for (size_t i = 0; i < acc.size(); ++i) {
        atoms[i] = acc[i].first * scale;
        weights[i] = acc[i].second;
    }
    return DiscreteCdf(std::move(atoms), std::move(weights));
}

double kolmogorov_distance(const DiscreteCdf& F, const std::function<double(double)>& G) {
    double d = 0.0;
    const std::vector<double>& atoms = F.atoms();
    for (const double a : atoms) {
        const double g = G(a);
        d = std::max(d, std::abs(F.cdf(a) - g));
        d = std::max(d, std::abs(F.cdf_left(a) - g));
    }
    return d;
}

double kolmogorov_distance(const std::function<double(double)>& F,
                           const std::function<double(double)>& G,
                           const std::vector<double>& probes) {
    double d = 0.0;
    for (const double p : probes) d = std::max(d, std::abs(F(p) - G(p)));
    return d;
}

double edgeworth_kac_functional(const CumulantTable& table, long n, double r, int l_max) {
    if (table.dim != 2) throw std::invalid_argument("edgeworth: kac functional needs a 2-D table");
    if (l_max < 0 || l_max > 2) throw std::invalid_argument("edgeworth: l_max must be in {0, 1, 2}");
    if (table.order < l_max + 2)
        throw std::invalid_argument("edgeworth: table order below l_max + 2");
    if (n < 1) throw std::invalid_argument("edgeworth: n must be >= 1");

    const double delta = std::pow(static_cast<double>(n), -r);

    // 2-D polynomials over monomials x^p y^q
    using Poly2 = std::vector<std::vector<double>>;
    auto mul2 = [](const Poly2& a, const Poly2& b) {
        if (a.empty() || b.empty()) return Poly2{};
        Poly2 c(a.size() + b.size() - 1);
        size_t bw = 0;
        for (const auto& row : b) bw = std::max(bw, row.size());
        size_t aw = 0;
        for (const auto& row : a) aw = std::max(aw, row.size());
        for (auto& row : c) row.assign(aw + bw - 1, 0.0);
        for (size_t i = 0; i < a.size(); ++i)
            for (size_t j = 0; j < a[i].size(); ++j) {
                if (a[i][j] == 0.0) continue;
                for (size_t k = 0; k < b.size(); ++k)
                    for (size_t l = 0; l < b[k].size(); ++l) c[i + k][j + l] += a[i][j] * b[k][l];
            }
        return c;
    };
    auto axpy2 = [](Poly2& dst, const Poly2& src, double c) {
        if (dst.size() < src.size()) dst.resize(src.size());
        for (size_t i = 0; i < src.size(); ++i) {
            if (dst[i].size() < src[i].size()) dst[i].resize(src[i].size(), 0.0);
            for (size_t j = 0; j < src[i].size(); ++j) dst[i][j] += c * src[i][j];
        }
    };

    std::vector<Poly2> u(l_max + 1);
    for (int l = 1; l <= l_max; ++l) {
        const int m = l + 2;
        Poly2 p(m + 1);
        for (auto& row : p) row.assign(m + 1, 0.0);
        for (int px = 0; px <= m; ++px)
            p[px][m - px] = table.chi2[px][m - px] / (factorial(px) * factorial(m - px));
        u[l] = std::move(p);
    }
    const auto P = compose_exp<Poly2>(u, l_max, Poly2{{1.0}}, mul2, axpy2);

    const std::vector<Poly1> he = he_coeff_table(3 * l_max + 2);
    double total = 0.0;
    for (int l = 0; l <= l_max; ++l) {
        const double scale = std::pow(static_cast<double>(n), -0.5 * l);
        double term = 0.0;
        for (size_t p = 0; p < P[l].size(); ++p)
            for (size_t q = 0; q < P[l][p].size(); ++q) {
                if (P[l][p][q] == 0.0) continue;
                term += P[l][p][q] * band_hermite_mass(static_cast<int>(p), delta) *
                        abs_hermite_moment(static_cast<int>(q), he);
            }
        total += scale * term;
    }
    return 0.5 * std::pow(static_cast<double>(n), r) * table.sigma_n * total;
}

double gaussian_averaged_modulus(double delta, double eps) {
    if (!(delta > 0.0) || eps < 0.0)
        throw std::invalid_argument("edgeworth: modulus needs delta > 0 and eps >= 0");
    if (eps == 0.0) return 0.0;
    const double phi0 = gauss::norm_pdf(0.0);
    const double phie = gauss::norm_pdf(eps);
    const double Phie = gauss::norm_cdf(eps);
    // oscillation min(2 eps, |y| + eps) where the ball stays inside the band
    const double osc_inside =
        2.0 * (phi0 - phie) + eps * (2.0 * Phie - 1.0) + 4.0 * eps * (1.0 - Phie);
    // oscillation |y| + eps where the ball straddles a boundary strip
    const double osc_straddle = std::sqrt(2.0 / std::numbers::pi) + eps;
    const double p_inside = std::max(0.0, 2.0 * gauss::norm_cdf(delta - eps) - 1.0);
    const double p_straddle = delta >= eps
                                  ? 2.0 * (gauss::norm_cdf(delta + eps) - gauss::norm_cdf(delta - eps))
                                  : 2.0 * gauss::norm_cdf(delta + eps) - 1.0;
    return p_inside * osc_inside + p_straddle * osc_straddle;
}

} // namespace rtpz::edgeworth
