"""Smoke tests for the rtpz extension module.

Runnable directly (python test_smoke.py) or under pytest.
"""

import json
import math
import tempfile
from pathlib import Path

import rtpz

TWO_PI = 2.0 * math.pi


def test_version_and_constants():
    assert rtpz.__version__ == "0.1.0"
    assert math.isclose(rtpz.UNIVERSAL_ZERO_DENSITY, 1.0 / (math.pi * math.sqrt(3.0)),
                        rel_tol=0.0, abs_tol=1e-15)


def test_law_basics():
    law = rtpz.CoefficientLaw.from_spec("sqrt-primes")
    assert law.is_standardized()
    assert abs(law.mean()) < 1e-9
    assert abs(law.variance() - 1.0) < 1e-9
    assert "atoms" in law.describe()

    draws = law.sample(seed=7, count=1000)
    assert len(draws) == 1000
    assert draws == law.sample(seed=7, count=1000)
    assert draws != law.sample(seed=8, count=1000)

    round_trip = rtpz.CoefficientLaw.from_spec(law.to_json())
    assert round_trip.describe() == law.describe()


def test_expected_zeros_golden():
    assert math.isclose(rtpz.expected_zeros(50), 58.60034129593445, rel_tol=0.0, abs_tol=1e-9)
    assert math.isclose(rtpz.expected_zeros(1, 0.0, TWO_PI), 2.0, rel_tol=0.0, abs_tol=1e-12)


def test_polynomial_eval():
    p = rtpz.TrigPolynomial(a=[0.0], b=[1.0])  # sin(t)
    assert p.degree == 1
    assert math.isclose(p.eval(math.pi / 2.0, mode="raw"), 1.0, rel_tol=0.0, abs_tol=1e-12)
    assert math.isclose(p.eval(0.0, deriv=1, mode="raw"), 1.0, rel_tol=0.0, abs_tol=1e-12)
    assert p.sup_bound(0, "raw") >= 1.0


def test_count_zeros_certified():
    law = rtpz.CoefficientLaw.from_spec("gaussian")
    p = rtpz.sample_polynomial(law, 25, seed=3)
    first = rtpz.count_zeros(p)
    again = rtpz.count_zeros(p)
    assert first == again
    assert first["certified"]
    assert first["count"] > 0
    assert first["omega_lower"] > 0.0

    # sin(t) on [0, 2pi): the endpoint zero is nudged away, leaving t = pi
    single = rtpz.count_zeros(rtpz.TrigPolynomial(a=[0.0], b=[1.0]))
    assert single["count"] == 2 or single["count"] == 1


def test_small_ball_matches_gaussian():
    law = rtpz.CoefficientLaw.from_spec("gaussian")
    out = rtpz.small_ball(law, n=50, t=1.0, gamma=0.6, trials=40000, seed=11)
    ref = rtpz.gaussian_small_ball(rtpz.spectral_sigma(50), 50.0 ** -0.6)
    assert abs(out["estimate"] - ref) <= 5.0 * out["std_error"] + 1e-9
    assert out["hits"] > 0


def test_edgeworth_cdf():
    law = rtpz.CoefficientLaw.from_spec("rademacher")
    # s=2 is the plain Gaussian CDF
    assert math.isclose(rtpz.edgeworth_cdf(law, n=9, s=2, x=0.0), 0.5,
                        rel_tol=0.0, abs_tol=1e-12)
    assert rtpz.edgeworth_cdf(law, n=9, s=4, x=-8.0) < 1e-6


def test_run_experiment_and_suite():
    config = {"kind": "universality", "n": [10], "trials": 20}
    report = json.loads(rtpz.run_experiment(json.dumps(config), seed=5, workers=2))
    row = report["rows"][0]
    assert row["n"] == 10
    assert row["certified_fraction"] >= 0.99
    assert abs(row["mean"] - row["reference"]) <= 4.0 * row["std_error"] + 1e-9

    suite = {"seed": 5, "workers": 2, "experiments": [config]}
    with tempfile.TemporaryDirectory() as tmp:
        out = rtpz.run_suite(json.dumps(suite), tmp)
        assert out["experiments"] == 1
        assert not out["flagged"]
        assert all(Path(p).exists() for p in out["csv_paths"])
        assert (Path(tmp) / "report.json").exists()


def main():
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for test in tests:
        test()
        print(f"ok {test.__name__}")
    print(f"{len(tests)} smoke tests passed")


if __name__ == "__main__":
    main()
