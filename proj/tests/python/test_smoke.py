import math

import pytest

import brwss


def test_transition_probabilities_sum_to_one():
    p = brwss.ModelParams.from_rho(3, 20, 1.5)
    total = sum(
        math.exp(brwss.log_sphere_size(20, 3, m) + brwss.transition_log_prob(p, m, 4.0))
        for m in range(21)
    )
    assert total == pytest.approx(1.0, abs=1e-12)


def test_root_and_slow_prediction():
    p = brwss.ModelParams.from_rho(4, 10000, 2.0)
    k = brwss.regime_constants(4, 2.0)
    assert k.x0 == pytest.approx(1.5186842933, rel=1e-9)
    root = brwss.solve_first_moment(p, 1)
    assert root.t == pytest.approx(k.x0 * 10000 + k.r, abs=1e-2)
    pred = brwss.predict_slow(p, 1)
    assert pred.regime == "slow"
    assert pred.t_predicted == pytest.approx(k.x0 * 10000 + k.r)


def test_fast_prediction_and_regime_errors():
    p = brwss.ModelParams.from_rho(2, 1000, 5.0)
    t = brwss.predict_fast(p, 2).t_predicted
    assert t * (math.log(5.0) - 1.0) + 2 * math.log(t / 1000) == pytest.approx(0.0, abs=1e-9)
    with pytest.raises(brwss._core.RegimeError):
        brwss.predict_fast(brwss.ModelParams.from_rho(2, 100, 2.0), 1)


def test_lambert_w():
    w = brwss.lambert_w0(10.0)
    assert w * math.exp(w) == pytest.approx(10.0, rel=1e-14)


def test_ballot():
    assert brwss.ballot_exact(2) == pytest.approx(0.75)
    estimate, err = brwss.ballot_mc(2, replicas=200000, seed=3)
    assert abs(estimate - 0.75) < 4 * err


def test_simulate_is_deterministic():
    p = brwss.ModelParams.from_rho(2, 8, 1.5)
    a = brwss.simulate(p, 1, replicas=64, seed=11)
    b = brwss.simulate(p, 1, replicas=64, seed=11, threads=1)
    assert a.hit_times == b.hit_times
    assert a.censored == 0 and a.median > 0


def test_delay_coefficient_positive():
    assert brwss.mutation_delay_coefficient(2, 0.5, 1.0, 1.5) > 0


def test_cli_round_trip():
    code, out, err = brwss.run_cli(["predict", "--b", "2", "--d", "100", "--rho", "1.5", "--m", "1"])
    assert code == 0, err
    header, row = out.strip().splitlines()[:2]
    assert header.startswith("b,d,m,rho,regime")
    assert row.split(",")[4] == "slow"
    assert brwss.run_cli(["predict", "--d", "100"])[0] == 2
