#include "rtpz/cramer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace rtpz::cramer {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Golden-section maximization on [lo, hi]; assumes local unimodality, which
// holds for |phi| once the bracket comes from a dense grid.
double golden_max(const std::function<double(double)>& f, double lo, double hi,
                  int iters, double& argmax) {
    constexpr double invphi = 0.6180339887498948482;
    double x1 = hi - invphi * (hi - lo);
    double x2 = lo + invphi * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters; ++i) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = f(x1);
        }
    }
    argmax = f1 > f2 ? x1 : x2;
    return std::max(f1, f2);
}

struct WindowScan {
    double sup = 0.0;
    double argmax = 0.0;
};

WindowScan scan_window(const std::function<double(double)>& f, double lo, double hi,
                       int steps, int refine_iters) {
    WindowScan ws;
    const double h = (hi - lo) / steps;
    double best = -1.0, best_t = lo;
    for (int i = 0; i <= steps; ++i) {
        const double t = i == steps ? hi : lo + h * i;
        const double v = f(t);
        if (v > best) {
            best = v;
            best_t = t;
        }
    }
    double ref_t = best_t;
    const double ref = golden_max(f, std::max(lo, best_t - h), std::min(hi, best_t + h),
                                  refine_iters, ref_t);
    ws.sup = std::max(best, ref);
    ws.argmax = ref > best ? ref_t : best_t;
    return ws;
}

} // namespace

EnvelopeTable envelope(const CoefficientLaw& law, double R, double T_max,
                       double window, int refine_iters) {
    if (!(0.0 < R && R < T_max)) throw std::invalid_argument("cramer: requires 0 < R < T_max");
    if (!(window > 0.0)) throw std::invalid_argument("cramer: window width must be positive");
    const long nw = std::max<long>(1, static_cast<long>(std::ceil((T_max - R) / window)));
    const double w = (T_max - R) / static_cast<double>(nw);
    auto f = [&](double t) { return law.abs_char_fn(t); };

    EnvelopeTable table;
    table.half_width = 0.5 * w;
    table.centers.reserve(nw);
    table.sup_abs_phi.reserve(nw);
    table.argmax_t.reserve(nw);
    for (long k = 0; k < nw; ++k) {
        const double lo = R + w * static_cast<double>(k);
        const double hi = k == nw - 1 ? T_max : lo + w;
        const WindowScan ws = scan_window(f, lo, hi, 64, refine_iters);
        table.centers.push_back(0.5 * (lo + hi));
        table.sup_abs_phi.push_back(ws.sup);
        table.argmax_t.push_back(ws.argmax);
    }
    return table;
}

CramerCertificate probe_weak_cramer(const CoefficientLaw& law, double b, double C,
                                    double R, double T_max) {
    if (!(b > 0.0) || !(C > 0.0)) throw std::invalid_argument("cramer: b and C must be positive");
    if (!(0.0 < R && R < T_max)) throw std::invalid_argument("cramer: requires 0 < R < T_max");
    CramerCertificate cert;
    cert.b = b;
    cert.C = C;
    cert.R = R;
    cert.T_max = T_max;
    cert.worst_margin = std::numeric_limits<double>::infinity();

    auto margin_at = [&](double t) { return (1.0 - law.abs_char_fn(t)) * std::pow(t, b) - C; };
    auto consider = [&](double t) {
        const double m = margin_at(t);
        if (m < cert.worst_margin) {
            cert.worst_margin = m;
            cert.worst_t = t;
        }
    };

    const double window = std::min(2.0, T_max - R);
    const long nw = std::max<long>(1, static_cast<long>(std::ceil((T_max - R) / window)));
    const double w = (T_max - R) / static_cast<double>(nw);
    auto f = [&](double t) { return law.abs_char_fn(t); };
    for (long k = 0; k < nw; ++k) {
        const double lo = R + w * static_cast<double>(k);
        const double hi = k == nw - 1 ? T_max : lo + w;
        const double h = (hi - lo) / 64.0;
        for (int i = 0; i <= 64; ++i) consider(i == 64 ? hi : lo + h * i);
        const WindowScan ws = scan_window(f, lo, hi, 64, 40);
        consider(ws.argmax);
    }
    cert.pass = cert.worst_margin >= 0.0;
    return cert;
}

CramerFit fit_cramer_exponent(const EnvelopeTable& envelope) {
    std::vector<double> xs, ys;
    for (size_t i = 0; i < envelope.sup_abs_phi.size(); ++i) {
        const double gap = 1.0 - envelope.sup_abs_phi[i];
        if (gap > 0.0 && envelope.argmax_t[i] > 0.0) {
            xs.push_back(std::log(envelope.argmax_t[i]));
            ys.push_back(std::log(gap));
        }
    }
    if (xs.size() < 8)
        throw std::invalid_argument("cramer: exponent fit needs at least 8 windows with sup < 1");
    const double span = *std::max_element(ys.begin(), ys.end()) -
                        *std::min_element(ys.begin(), ys.end());
    if (span < 1e-12)
        throw std::runtime_error("cramer: flat envelope, exponent fit is degenerate");

    const size_t m = xs.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < m; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double det = m * sxx - sx * sx;
    if (std::abs(det) < 1e-12 * m * sxx)
        throw std::runtime_error("cramer: degenerate abscissae in exponent fit");
    const double slope = (m * sxy - sx * sy) / det;
    const double intercept = (sy - slope * sx) / m;

    CramerFit fit;
    fit.b_hat = -slope;
    fit.C_hat = std::exp(intercept);
    double ss = 0.0;
    for (size_t i = 0; i < m; ++i) {
        const double r = ys[i] - (intercept + slope * xs[i]);
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / m);
    return fit;
}

double lattice_distance_lower_bound(const CoefficientLaw& law, double t) {
    std::vector<double> atoms, weights;
    law.atomize(atoms, weights);
    if (atoms.size() < 2)
        throw std::invalid_argument("cramer: lattice bound needs a law with at least two atoms");
    const double c_min = *std::min_element(weights.begin(), weights.end());
    double s = 0.0;
    for (size_t j = 1; j < atoms.size(); ++j) {
        const double d = std::remainder(t * (atoms[0] - atoms[j]), two_pi);
        s += d * d;
    }
    return c_min * c_min / (std::numbers::pi * std::numbers::pi) * s;
}

double mean_envelope(const std::vector<CoefficientLaw>& laws, double t) {
    if (laws.empty()) throw std::invalid_argument("cramer: mean envelope over an empty family");
    double s = 0.0;
    for (const CoefficientLaw& law : laws) s += law.abs_char_fn(t);
    return s / static_cast<double>(laws.size());
}

double bivariate_mean_abs_cf(const CoefficientLaw& law, long n, double t,
                             double s1, double s2) {
    if (n < 1) throw std::invalid_argument("cramer: bivariate family needs n >= 1");
    double acc = 0.0;
    for (long i = 1; i <= n; ++i) {
        const double arg = static_cast<double>(i) * t / static_cast<double>(n);
        const double c = std::cos(arg), s = std::sin(arg);
        const double d = static_cast<double>(i) / static_cast<double>(n);
        const double alpha = s1 * c - s2 * d * s;
        const double beta = s1 * s + s2 * d * c;
        acc += law.abs_char_fn(alpha) * law.abs_char_fn(beta);
    }
    return acc / static_cast<double>(n);
}

namespace {

double sup_of(const std::function<double(double)>& f, double r, double R, long grid) {
    if (!(0.0 < r && r < R)) throw std::invalid_argument("cramer: requires 0 < r < R");
    if (grid < 2) throw std::invalid_argument("cramer: sup scan needs at least 2 grid points");
    const double h = (R - r) / static_cast<double>(grid);
    double best = -1.0, best_t = r;
    for (long i = 0; i <= grid; ++i) {
        const double t = i == grid ? R : r + h * static_cast<double>(i);
        const double v = f(t);
        if (v > best) {
            best = v;
            best_t = t;
        }
    }
    double ref_t = best_t;
    const double ref = golden_max(f, std::max(r, best_t - h), std::min(R, best_t + h), 40, ref_t);
    return std::max(best, ref);
}

} // namespace

double local_cramer_sup(const CoefficientLaw& law, double r, double R, long grid) {
    return sup_of([&](double t) { return law.abs_char_fn(t); }, r, R, grid);
}

double local_cramer_sup(const std::vector<CoefficientLaw>& laws, double r, double R, long grid) {
    if (laws.empty()) throw std::invalid_argument("cramer: sup over an empty family");
    return sup_of([&](double t) { return mean_envelope(laws, t); }, r, R, grid);
}

} // namespace rtpz::cramer
