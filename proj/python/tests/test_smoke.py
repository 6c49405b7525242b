import math

import pytest

import mgsizer

SMALL = {"ga": {"max_iter": 5, "threads": 1}, "scenarios": {"active": 10}}


def test_device_models():
    assert mgsizer.wt_power(6.0) == pytest.approx(11.1111, rel=1e-4)
    assert mgsizer.pv_power(1.0, 298.15) == pytest.approx(0.33)
    assert 100 * mgsizer.capacity_loss(1000.0) == pytest.approx(2.3102168, rel=1e-6)


def test_schedule_and_metrics():
    assert mgsizer.adaptive_probabilities(1) == (0.65, 0.01)
    p_c, p_m = mgsizer.adaptive_probabilities(10)
    assert p_c == pytest.approx(0.541667, rel=1e-5)
    assert p_m == pytest.approx(0.012)
    assert mgsizer.ora(7858551, 3276596) == pytest.approx(5.8896e12, rel=1e-4)
    assert mgsizer.diverse_count([(0, 0), (1.5e5, 0), (1.6e5, 0), (4e5, 0)]) == (3, 1)


def test_evaluate_reference_sizing():
    res = mgsizer.evaluate(mgsizer.SizingConfig(31, 748, 8, 2), SMALL)
    assert res["c_init"] == pytest.approx(3739200.0)
    assert res["cost"] > res["c_init"]
    assert res["pec"] > 0
    assert math.isfinite(res["renewable_proportion"])


@pytest.mark.parametrize("algorithm", ["samoga", "nsga2", "nsga-hs", "aga"])
def test_optimize_returns_tradeoff(algorithm):
    out = mgsizer.optimize(algorithm, SMALL)
    front = out["frontier"]
    assert front
    costs = [p["cost"] for p in front]
    pecs = [p["pec"] for p in front]
    assert costs == sorted(costs)
    assert all(b < a for a, b in zip(pecs, pecs[1:]))
    again = mgsizer.optimize(algorithm, SMALL)["frontier"]
    assert [p["cost"] for p in again] == costs


def test_config_errors():
    with pytest.raises(ValueError):
        mgsizer.evaluate(mgsizer.SizingConfig(1, 1, 1, 1), {"ga": {"pop_size": 31}})
    with pytest.raises(ValueError):
        mgsizer.optimize("sga", SMALL)
    assert mgsizer.scenario_count() == 125
