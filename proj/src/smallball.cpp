#include "rtpz/smallball.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace rtpz::smallball {

SmallBallEstimate small_ball_mc(const CoefficientLaw& law, long n, double t, double gamma,
                                long trials, const RngStream& stream) {
    if (n < 1) throw std::invalid_argument("smallball: n must be >= 1");
    if (trials < 1) throw std::invalid_argument("smallball: trials must be >= 1");
    if (!law.is_standardized())
        throw std::invalid_argument("smallball: law must be standardized (mean 0, variance 1)");

    SmallBallEstimate est;
    est.law_id = law.describe();
    est.n = n;
    est.t = t;
    est.gamma = gamma;
    est.trials = trials;
    est.radius = std::pow(static_cast<double>(n), -gamma);

    // U_n(t) = n^{-1/2} sum a_k cos(k t / n) + b_k sin(k t / n)
    // U_n'(t) = n^{-1/2} sum (k/n) (-a_k sin(k t / n) + b_k cos(k t / n))
    std::vector<double> c(n), s(n), d(n);
    for (long k = 1; k <= n; ++k) {
        const double arg = static_cast<double>(k) * t / static_cast<double>(n);
        c[k - 1] = std::cos(arg);
        s[k - 1] = std::sin(arg);
        d[k - 1] = static_cast<double>(k) / static_cast<double>(n);
    }

    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
    const double r2 = est.radius * est.radius;
    std::vector<double> coeffs(2 * n);
    long hits = 0;
    for (long trial = 0; trial < trials; ++trial) {
        RngStream ts = stream.substream(static_cast<std::uint64_t>(trial));
        law.sample(ts, coeffs);
        double v = 0.0, w = 0.0;
        for (long k = 0; k < n; ++k) {
            const double a = coeffs[k], b = coeffs[n + k];
            v += a * c[k] + b * s[k];
            w += d[k] * (b * c[k] - a * s[k]);
        }
        v *= inv_sqrt_n;
        w *= inv_sqrt_n;
        if (v * v + w * w <= r2) ++hits;
    }

    est.hits = hits;
    est.estimate = static_cast<double>(hits) / static_cast<double>(trials);
    est.std_error = std::sqrt(est.estimate * (1.0 - est.estimate) / static_cast<double>(trials));
    est.upper95 = hits == 0 ? 3.0 / static_cast<double>(trials)
                            : est.estimate + 1.645 * est.std_error;
    return est;
}

DecayFit fit_decay_exponent(const std::vector<SmallBallEstimate>& estimates) {
    DecayFit fit;
    std::vector<double> xs, ys;
    std::set<long> ns;
    for (const SmallBallEstimate& e : estimates) {
        if (e.hits == 0) {
            ++fit.excluded;
            continue;
        }
        xs.push_back(std::log(static_cast<double>(e.n)));
        ys.push_back(std::log(e.estimate));
        ns.insert(e.n);
    }
    if (ns.size() < 3)
        throw std::invalid_argument("smallball: decay fit needs >= 3 distinct n with nonzero hits");

    const size_t m = xs.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < m; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double det = m * sxx - sx * sx;
    fit.slope = (m * sxy - sx * sy) / det;
    fit.intercept = (sy - fit.slope * sx) / m;
    double ss = 0.0;
    for (size_t i = 0; i < m; ++i) {
        const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / m);
    fit.used = static_cast<long>(m);
    return fit;
}

} // namespace rtpz::smallball
