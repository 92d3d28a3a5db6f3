#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "rtpz/distributions.hpp"
#include "rtpz/rng.hpp"
#include "rtpz/trigpoly.hpp"

using namespace rtpz::poly;
using rtpz::RngStream;
using rtpz::dist::CoefficientLaw;

namespace {

const double kTwoPi = 2.0 * std::numbers::pi;

TrigPolynomial random_poly(int n, std::uint64_t seed) {
    RngStream stream(seed);
    return sample_polynomial(CoefficientLaw::gaussian(0.0, 1.0), n, PhasePolicy::zero(), stream);
}

// five-point central difference, O(h^4)
double fd_derivative(const TrigPolynomial& p, double t, int deriv, EvalMode mode, double h) {
    auto f = [&](double x) { return p.eval(x, deriv - 1, mode); };
    return (-f(t + 2 * h) + 8 * f(t + h) - 8 * f(t - h) + f(t - 2 * h)) / (12.0 * h);
}

} // namespace

TEST_CASE("explicit small polynomial evaluates exactly") {
    // f(t) = 2 cos t + 3 sin 2t
    const TrigPolynomial p({2.0, 0.0}, {0.0, 3.0});
    for (double t : {0.0, 0.7, 2.0, -1.3}) {
        CAPTURE(t);
        CHECK(p.eval(t, 0, EvalMode::Raw) ==
              doctest::Approx(2.0 * std::cos(t) + 3.0 * std::sin(2.0 * t)).epsilon(1e-14));
        CHECK(p.eval(t, 1, EvalMode::Raw) ==
              doctest::Approx(-2.0 * std::sin(t) + 6.0 * std::cos(2.0 * t)).epsilon(1e-13));
        CHECK(p.eval(t, 2, EvalMode::Raw) ==
              doctest::Approx(-2.0 * std::cos(t) - 12.0 * std::sin(2.0 * t)).epsilon(1e-13));
        CHECK(p.eval(t, 3, EvalMode::Raw) ==
              doctest::Approx(2.0 * std::sin(t) - 24.0 * std::cos(2.0 * t)).epsilon(1e-12));
    }
}

TEST_CASE("phase shifts enter the argument") {
    // cos(t + pi/2) = -sin t
    const TrigPolynomial p({1.0}, {0.0}, {std::numbers::pi / 2.0});
    for (double t : {0.0, 0.4, 1.9})
        CHECK(p.eval(t, 0, EvalMode::Raw) == doctest::Approx(-std::sin(t)).epsilon(1e-14));
}

TEST_CASE("derivatives agree with finite differences in every mode") {
    const TrigPolynomial p = random_poly(100, 11);
    for (EvalMode mode : {EvalMode::Raw, EvalMode::Normalized, EvalMode::Rescaled}) {
        for (int d = 1; d <= 3; ++d) {
            for (double t : {0.3, 1.7, 5.1}) {
                CAPTURE(static_cast<int>(mode));
                CAPTURE(d);
                CAPTURE(t);
                const double h = mode == EvalMode::Rescaled ? 1e-3 : 1e-5;
                const double fd = fd_derivative(p, t, d, mode, h);
                const double exact = p.eval(t, d, mode);
                const double scale = std::max(1.0, std::abs(exact));
                CHECK(std::abs(fd - exact) / scale < 1e-6);
            }
        }
    }
}

TEST_CASE("fused evaluations match the single-derivative path") {
    const TrigPolynomial p = random_poly(64, 5);
    for (EvalMode mode : {EvalMode::Raw, EvalMode::Normalized, EvalMode::Rescaled}) {
        for (double t : {0.0, 0.9, 13.7, 200.0}) {
            double f0, f1, g0, g1, g2;
            p.eval_pair(t, mode, f0, f1);
            p.eval_triple(t, mode, g0, g1, g2);
            CHECK(f0 == doctest::Approx(p.eval(t, 0, mode)).epsilon(1e-13));
            CHECK(f1 == doctest::Approx(p.eval(t, 1, mode)).epsilon(1e-13));
            CHECK(g0 == doctest::Approx(f0).epsilon(1e-13));
            CHECK(g1 == doctest::Approx(f1).epsilon(1e-13));
            CHECK(g2 == doctest::Approx(p.eval(t, 2, mode)).epsilon(1e-13));
        }
    }
}

TEST_CASE("grid evaluation equals pointwise evaluation") {
    const TrigPolynomial p = random_poly(20, 3);
    const std::vector<double> grid = p.eval_grid(0.0, kTwoPi, 257, 1, EvalMode::Normalized);
    REQUIRE(grid.size() == 257);
    const double step = kTwoPi / 256.0;
    for (size_t i = 0; i < grid.size(); i += 16)
        CHECK(grid[i] == doctest::Approx(p.eval(i * step, 1, EvalMode::Normalized)).epsilon(1e-12));
}

TEST_CASE("sup bounds dominate dense samples") {
    const TrigPolynomial p = random_poly(50, 17);
    for (EvalMode mode : {EvalMode::Raw, EvalMode::Normalized, EvalMode::Rescaled}) {
        const double span = mode == EvalMode::Rescaled ? 50.0 * kTwoPi : kTwoPi;
        for (int d = 0; d <= 3; ++d) {
            const double bound = p.sup_bound(d, mode);
            double seen = 0.0;
            for (int i = 0; i < 4000; ++i)
                seen = std::max(seen, std::abs(p.eval(span * i / 4000.0, d, mode)));
            CAPTURE(static_cast<int>(mode));
            CAPTURE(d);
            CHECK(seen <= bound * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("rescaled sup bounds shrink with the derivative order") {
    const TrigPolynomial p = random_poly(30, 23);
    // weights (k/n)^d <= 1, so higher rescaled derivatives can only tighten
    CHECK(p.sup_bound(2, EvalMode::Rescaled) <= p.sup_bound(0, EvalMode::Rescaled) + 1e-12);
    CHECK(p.sup_bound(3, EvalMode::Rescaled) <= p.sup_bound(1, EvalMode::Rescaled) + 1e-12);
}

TEST_CASE("rescaling identity links the normalized and rescaled modes") {
    const int n = 100;
    const TrigPolynomial p = random_poly(n, 29);
    for (double t : {0.1, 1.0, 3.5, 6.0}) {
        const double u = p.eval(t, 0, EvalMode::Normalized);
        const double U = p.eval(n * t, 0, EvalMode::Rescaled);
        CHECK(U == doctest::Approx(u).epsilon(1e-12));
        // chain rule: U'(n t) = u'(t) / n
        const double up = p.eval(t, 1, EvalMode::Normalized);
        const double Up = p.eval(n * t, 1, EvalMode::Rescaled);
        CHECK(Up == doctest::Approx(up / n).epsilon(1e-10));
    }
}

TEST_CASE("normalized mode is the raw mode divided by sqrt n") {
    const int n = 37;
    const TrigPolynomial p = random_poly(n, 31);
    const double scale = std::sqrt(static_cast<double>(n));
    for (double t : {0.2, 2.2})
        CHECK(p.eval(t, 0, EvalMode::Normalized) ==
              doctest::Approx(p.eval(t, 0, EvalMode::Raw) / scale).epsilon(1e-13));
}

TEST_CASE("large arguments keep full accuracy through reduction") {
    const TrigPolynomial p = random_poly(100, 41);
    const double t = 1.234;
    const double far = t + 1024.0 * kTwoPi;
    CHECK(p.eval(far, 0, EvalMode::Raw) ==
          doctest::Approx(p.eval(t, 0, EvalMode::Raw)).epsilon(1e-8));
    // rescaled arguments of size ~ 1e6 stay finite and bounded
    const double big = 987654.321;
    CHECK(std::abs(p.eval(big, 0, EvalMode::Rescaled)) <= p.sup_bound(0, EvalMode::Rescaled));
}

TEST_CASE("constructor and eval validate their inputs") {
    CHECK_THROWS_AS(TrigPolynomial({}, {}), std::invalid_argument);
    CHECK_THROWS_AS(TrigPolynomial({1.0}, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(TrigPolynomial({1.0}, {1.0}, {0.1, 0.2}), std::invalid_argument);
    const TrigPolynomial p({1.0}, {0.0});
    CHECK_THROWS_AS((void)p.eval(0.0, 4, EvalMode::Raw), std::invalid_argument);
    CHECK_THROWS_AS((void)p.eval(0.0, -1, EvalMode::Raw), std::invalid_argument);
}

TEST_CASE("sampling is deterministic in the stream") {
    const CoefficientLaw law = CoefficientLaw::make_sqrt_primes();
    RngStream s1(2718), s2(2718);
    const TrigPolynomial p1 = sample_polynomial(law, 40, PhasePolicy::zero(), s1);
    const TrigPolynomial p2 = sample_polynomial(law, 40, PhasePolicy::zero(), s2);
    CHECK(p1.coeff_a() == p2.coeff_a());
    CHECK(p1.coeff_b() == p2.coeff_b());

    RngStream s3(2719);
    const TrigPolynomial p3 = sample_polynomial(law, 40, PhasePolicy::zero(), s3);
    CHECK(p1.coeff_a() != p3.coeff_a());
}

TEST_CASE("sampling rejects non-standardized laws") {
    RngStream s(1);
    CHECK_THROWS_AS(
        sample_polynomial(CoefficientLaw::gaussian(5.0, 4.0), 10, PhasePolicy::zero(), s),
        std::invalid_argument);
}

TEST_CASE("phase policies realize as documented") {
    CHECK(realize_phases(PhasePolicy::zero(), 5).empty());

    const std::vector<double> cst = realize_phases(PhasePolicy::constant_phase(0.25), 4);
    REQUIRE(cst.size() == 4);
    for (double v : cst) CHECK(v == 0.25);

    const std::vector<double> u1 = realize_phases(PhasePolicy::uniform_random(9), 6);
    const std::vector<double> u2 = realize_phases(PhasePolicy::uniform_random(9), 6);
    const std::vector<double> u3 = realize_phases(PhasePolicy::uniform_random(10), 6);
    CHECK(u1 == u2);
    CHECK(u1 != u3);
    for (double v : u1) {
        CHECK(v >= 0.0);
        CHECK(v < kTwoPi);
    }

    const std::vector<double> ex = realize_phases(PhasePolicy::explicit_phases({1.0, 2.0}), 2);
    CHECK(ex == std::vector<double>{1.0, 2.0});
    CHECK_THROWS_AS(realize_phases(PhasePolicy::explicit_phases({1.0}), 2), std::invalid_argument);
}
