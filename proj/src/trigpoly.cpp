#include "rtpz/trigpoly.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rtpz::poly {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Neumaier compensated accumulation; the correction catches cancellation
// between the n cosine terms, which are O(1) each while partial sums swing.
struct Kahan {
    double s = 0.0, c = 0.0;
    void add(double x) {
        const double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    double value() const { return s + c; }
};

} // namespace

TrigPolynomial::TrigPolynomial(std::vector<double> a, std::vector<double> b, std::vector<double> theta)
    : n_(static_cast<int>(a.size())), a_(std::move(a)), b_(std::move(b)), theta_(std::move(theta)) {
    if (n_ < 1) throw std::invalid_argument("trigpoly: degree must be >= 1");
    if (b_.size() != a_.size())
        throw std::invalid_argument("trigpoly: a and b must have equal length");
    if (!theta_.empty() && theta_.size() != a_.size())
        throw std::invalid_argument("trigpoly: theta must be empty or length n");
    zero_phase_ = true;
    for (double th : theta_)
        if (th != 0.0) { zero_phase_ = false; break; }
    if (!zero_phase_) {
        cos_th_.resize(n_);
        sin_th_.resize(n_);
        for (int k = 0; k < n_; ++k) {
            cos_th_[k] = std::cos(theta_[k]);
            sin_th_[k] = std::sin(theta_[k]);
        }
    }
}

// Accumulates sum_k w_k [ a_k cos(kx+th_k+d*pi/2) + b_k sin(kx+th_k+d*pi/2) ]
// with w_k = k^d; cos/sin of kx by the angle-addition recurrence from the
// reduced argument.
double TrigPolynomial::kernel(double x, int d) const {
    const double xr = std::remainder(x, two_pi);
    const double cw = std::cos(xr), sw = std::sin(xr);
    double ck = 1.0, sk = 0.0; // cos(0*x), sin(0*x)
    Kahan acc;
    for (int k = 1; k <= n_; ++k) {
        const double cn = ck * cw - sk * sw;
        const double sn = sk * cw + ck * sw;
        ck = cn;
        sk = sn;
        double c = ck, s = sk;
        if (!zero_phase_) {
            const double ct = cos_th_[k - 1], st = sin_th_[k - 1];
            c = ck * ct - sk * st;
            s = sk * ct + ck * st;
        }
        const double ak = a_[k - 1], bk = b_[k - 1];
        double term;
        switch (d & 3) {
            case 0: term = ak * c + bk * s; break;
            case 1: term = -ak * s + bk * c; break;
            case 2: term = -ak * c - bk * s; break;
            default: term = ak * s - bk * c; break;
        }
        double w = 1.0;
        if (d == 1) w = k;
        else if (d == 2) w = static_cast<double>(k) * k;
        else if (d == 3) w = static_cast<double>(k) * k * k;
        acc.add(w * term);
    }
    return acc.value();
}

void TrigPolynomial::kernel_pair(double x, int /*d0*/, double& v0, double& v1) const {
    const double xr = std::remainder(x, two_pi);
    const double cw = std::cos(xr), sw = std::sin(xr);
    double ck = 1.0, sk = 0.0;
    Kahan acc0, acc1;
    for (int k = 1; k <= n_; ++k) {
        const double cn = ck * cw - sk * sw;
        const double sn = sk * cw + ck * sw;
        ck = cn;
        sk = sn;
        double c = ck, s = sk;
        if (!zero_phase_) {
            const double ct = cos_th_[k - 1], st = sin_th_[k - 1];
            c = ck * ct - sk * st;
            s = sk * ct + ck * st;
        }
        const double ak = a_[k - 1], bk = b_[k - 1];
        acc0.add(ak * c + bk * s);
        acc1.add(k * (-ak * s + bk * c));
    }
    v0 = acc0.value();
    v1 = acc1.value();
}

double TrigPolynomial::eval(double t, int deriv, EvalMode mode) const {
    if (deriv < 0 || deriv > 3) throw std::invalid_argument("trigpoly: derivative order must be 0..3");
    const double rootn = std::sqrt(static_cast<double>(n_));
    switch (mode) {
        case EvalMode::Raw:
            return kernel(t, deriv);
        case EvalMode::Normalized:
            return kernel(t, deriv) / rootn;
        case EvalMode::Rescaled: {
            const double nd = std::pow(static_cast<double>(n_), deriv);
            return kernel(t / n_, deriv) / (rootn * nd);
        }
    }
    return 0.0;
}

void TrigPolynomial::kernel_triple(double x, double& v0, double& v1, double& v2) const {
    const double xr = std::remainder(x, two_pi);
    const double cw = std::cos(xr), sw = std::sin(xr);
    double ck = 1.0, sk = 0.0;
    Kahan acc0, acc1, acc2;
    for (int k = 1; k <= n_; ++k) {
        const double cn = ck * cw - sk * sw;
        const double sn = sk * cw + ck * sw;
        ck = cn;
        sk = sn;
        double c = ck, s = sk;
        if (!zero_phase_) {
            const double ct = cos_th_[k - 1], st = sin_th_[k - 1];
            c = ck * ct - sk * st;
            s = sk * ct + ck * st;
        }
        const double ak = a_[k - 1], bk = b_[k - 1];
        const double term = ak * c + bk * s;
        acc0.add(term);
        acc1.add(k * (-ak * s + bk * c));
        acc2.add(-static_cast<double>(k) * k * term);
    }
    v0 = acc0.value();
    v1 = acc1.value();
    v2 = acc2.value();
}

void TrigPolynomial::eval_triple(double t, EvalMode mode, double& f, double& fp,
                                 double& fpp) const {
    const double rootn = std::sqrt(static_cast<double>(n_));
    double v0, v1, v2;
    switch (mode) {
        case EvalMode::Raw:
            kernel_triple(t, v0, v1, v2);
            f = v0;
            fp = v1;
            fpp = v2;
            return;
        case EvalMode::Normalized:
            kernel_triple(t, v0, v1, v2);
            f = v0 / rootn;
            fp = v1 / rootn;
            fpp = v2 / rootn;
            return;
        case EvalMode::Rescaled:
            kernel_triple(t / n_, v0, v1, v2);
            f = v0 / rootn;
            fp = v1 / (rootn * n_);
            fpp = v2 / (rootn * static_cast<double>(n_) * n_);
            return;
    }
}

void TrigPolynomial::eval_pair(double t, EvalMode mode, double& f, double& fp) const {
    const double rootn = std::sqrt(static_cast<double>(n_));
    double v0, v1;
    switch (mode) {
        case EvalMode::Raw:
            kernel_pair(t, 0, v0, v1);
            f = v0;
            fp = v1;
            return;
        case EvalMode::Normalized:
            kernel_pair(t, 0, v0, v1);
            f = v0 / rootn;
            fp = v1 / rootn;
            return;
        case EvalMode::Rescaled:
            kernel_pair(t / n_, 0, v0, v1);
            f = v0 / rootn;
            fp = v1 / (rootn * n_);
            return;
    }
}

std::vector<double> TrigPolynomial::eval_grid(double lo, double hi, std::size_t points,
                                              int deriv, EvalMode mode) const {
    if (points < 2) throw std::invalid_argument("trigpoly: grid needs at least 2 points");
    if (!(lo < hi)) throw std::invalid_argument("trigpoly: grid interval requires lo < hi");
    std::vector<double> out(points);
    const double h = (hi - lo) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) {
        const double t = i + 1 == points ? hi : lo + h * static_cast<double>(i);
        out[i] = eval(t, deriv, mode);
    }
    return out;
}

double TrigPolynomial::sup_bound(int deriv, EvalMode mode) const {
    if (deriv < 0 || deriv > 3) throw std::invalid_argument("trigpoly: derivative order must be 0..3");
    Kahan acc;
    for (int k = 1; k <= n_; ++k) {
        const double amp = std::abs(a_[k - 1]) + std::abs(b_[k - 1]);
        double w = 1.0;
        const double kk = mode == EvalMode::Rescaled ? static_cast<double>(k) / n_ : static_cast<double>(k);
        for (int j = 0; j < deriv; ++j) w *= kk;
        acc.add(amp * w);
    }
    const double s = acc.value();
    return mode == EvalMode::Raw ? s : s / std::sqrt(static_cast<double>(n_));
}

std::vector<double> realize_phases(const PhasePolicy& policy, int n) {
    switch (policy.kind) {
        case PhasePolicy::Kind::Zero:
            return {};
        case PhasePolicy::Kind::Constant: {
            if (policy.constant == 0.0) return {};
            return std::vector<double>(n, policy.constant);
        }
        case PhasePolicy::Kind::UniformRandom: {
            RngStream st(RngStream::derive(policy.seed, 0x7068617365ULL)); // "phase" salt
            std::vector<double> th(n);
            for (int k = 0; k < n; ++k) th[k] = two_pi * st.next_unit();
            return th;
        }
        case PhasePolicy::Kind::Explicit:
            if (static_cast<int>(policy.values.size()) != n)
                throw std::invalid_argument("trigpoly: explicit phase list must have length n");
            return policy.values;
    }
    return {};
}

TrigPolynomial sample_polynomial(const dist::CoefficientLaw& law, int n,
                                 const PhasePolicy& phase, RngStream& stream) {
    if (n < 1) throw std::invalid_argument("trigpoly: degree must be >= 1");
    if (!law.is_standardized(1e-9))
        throw std::invalid_argument("trigpoly: coefficient law must be standardized (mean 0, variance 1)");
    std::vector<double> draws = law.sample(stream, 2 * static_cast<std::size_t>(n));
    std::vector<double> a(draws.begin(), draws.begin() + n);
    std::vector<double> b(draws.begin() + n, draws.end());
    return TrigPolynomial(std::move(a), std::move(b), realize_phases(phase, n));
}

} // namespace rtpz::poly
