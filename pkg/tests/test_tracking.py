"""Path tracking: prediction, correction, endgame, and batch layout."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polycascade.embedding import StartHomotopy, embed
from polycascade.linalg import RandomSource
from polycascade.polynomials import parse_system
from polycascade.start_systems import build_start_system
from polycascade.tracking import (PathStatus, TrackerConfig, euler_predict,
                                  newton_correct, refine_endpoint, track_batch,
                                  track_path)


def _quadratic_homotopy(seed=0):
    # target x^2 - 4 from start x^2 - c, both roots known in closed form
    f = parse_system("1\n*\nx1^2 - 4;\n")
    rng = RandomSource(seed)
    g = build_start_system(f, rng)
    gamma = rng.unit_complex()
    return StartHomotopy(embed(f, None, 0), g, gamma), g


def test_config_validation():
    with pytest.raises(ValueError):
        TrackerConfig(newton_tol=-1)
    with pytest.raises(ValueError):
        TrackerConfig(step_min=0.5, step_max=0.1)
    with pytest.raises(ValueError):
        TrackerConfig(step_shrink=1.5)
    with pytest.raises(ValueError):
        TrackerConfig.from_dict({"no_such_knob": 1})
    cfg = TrackerConfig()
    assert TrackerConfig.from_dict(cfg.to_dict()) == cfg


def test_track_quadratic_to_known_roots():
    homotopy, g = _quadratic_homotopy(seed=3)
    cfg = TrackerConfig()
    results = track_batch(homotopy, list(g.roots()), cfg)
    assert len(results) == 2
    ends = sorted(complex(r.endpoint[0]).real for r in results)
    for r in results:
        assert r.status == PathStatus.CONVERGED
        assert r.residual < 1e-9
        assert abs(abs(complex(r.endpoint[0])) - 2.0) < 1e-8
    assert ends[0] == pytest.approx(-2.0, abs=1e-8)
    assert ends[1] == pytest.approx(2.0, abs=1e-8)


def test_newton_zero_iterations_at_exact_root():
    homotopy, _ = _quadratic_homotopy(seed=1)
    x = np.array([2.0 + 0.0j])
    corrected, iters, converged = newton_correct(homotopy, x, 0.0, TrackerConfig())
    assert converged and iters == 0
    assert abs(corrected[0] - 2.0) < 1e-12


def test_newton_iteration_count_from_factor_two_away():
    # x0 = 2.1 on x^2 - 4: quadratic convergence needs 3 steps to 1e-10
    f = parse_system("1\n*\nx1^2 - 4;\n")
    target = embed(f, None, 0)

    class _Plain:
        dim = 1
        def value(self, p, s):
            return target.evaluate(p)
        def jacobian(self, p, s):
            return target.jacobian(p)

    x = np.array([2.1 + 0.0j])
    corrected, iters, converged = newton_correct(_Plain(), x, 0.0, TrackerConfig())
    assert converged
    assert iters == 3
    assert abs(corrected[0] - 2.0) < 1e-14


def test_euler_prediction_stays_on_quadratic_path():
    homotopy, g = _quadratic_homotopy(seed=5)
    # closed form: gamma*s*(x^2-c) + (1-s)*(x^2-4) = 0 solved for x^2,
    # following the branch with positive real part
    c = g.constants[0]
    gamma = homotopy.gamma

    def path_point(s):
        x2 = (gamma * s * c + (1 - s) * 4.0) / (gamma * s + (1 - s))
        root = np.sqrt(x2)
        return root if root.real >= 0 else -root

    s = 0.8
    errors = []
    for h in (0.05, 0.025, 0.0125):
        predicted = euler_predict(homotopy, np.array([path_point(s)]), s, h)
        err = abs(predicted[0] - path_point(s - h))
        assert err < 20.0 * h * h
        errors.append(err)
    # halving the step divides the error by about four
    assert errors[1] <= 0.35 * errors[0]
    assert errors[2] <= 0.35 * errors[1]


@settings(max_examples=120)
@given(st.integers(0, 2**32 - 1), st.integers(20, 80))
def test_euler_prediction_second_order(seed, s_percent):
    # halving the step shrinks the prediction error by about four
    homotopy, g = _quadratic_homotopy(seed=seed)
    cfg = TrackerConfig(newton_tol=1e-13, max_newton_iters=40)
    s = s_percent / 100.0
    x, _, ok = newton_correct(homotopy, np.array(g.root(0)), s, cfg)
    if not ok:
        return
    h = 0.01
    x_half, _, ok1 = newton_correct(homotopy, x, s - h, cfg)
    x_full, _, ok2 = newton_correct(homotopy, x, s - 2 * h, cfg)
    if not (ok1 and ok2):
        return
    if max(np.abs(x_half - x)) > 0.3 or max(np.abs(x_full - x)) > 0.6:
        return  # crossed a fold; the local expansion does not apply
    err_h = float(np.max(np.abs(euler_predict(homotopy, x, s, h) - x_half)))
    err_2h = float(np.max(np.abs(euler_predict(homotopy, x, s, 2 * h) - x_full)))
    if err_2h < 1e-12:
        return  # straight line, both errors at roundoff
    assert err_h <= 0.40 * err_2h + 1e-12


def test_refine_endpoint_regular_root():
    homotopy, _ = _quadratic_homotopy(seed=2)
    x = np.array([2.0 + 1e-5 + 1e-5j])
    refined, residual, condition, iters = refine_endpoint(homotopy, x, TrackerConfig())
    assert abs(refined[0] - 2.0) < 1e-12
    assert residual < 1e-12
    assert condition < 100


def test_refine_endpoint_multiple_root_acceleration():
    # (x - 1)^3 = 0: plain Newton gains only factor 2/3 per step; the
    # multiplicity-scaled step must still reach full accuracy in the budget
    f = parse_system("1\n*\nx1^3 - 3*x1^2 + 3*x1 - 1;\n")
    target = embed(f, None, 0)

    class _Plain:
        dim = 1
        def value(self, p, s):
            return target.evaluate(p)
        def jacobian(self, p, s):
            return target.jacobian(p)

    x = np.array([1.01 + 0.005j])
    refined, residual, condition, _ = refine_endpoint(_Plain(), x, TrackerConfig())
    assert abs(refined[0] - 1.0) < 1e-5
    assert residual < 1e-13


def test_divergent_path_reported():
    # x1*x2 = 1, x1 = 0 forces one coordinate to infinity along the path
    f = parse_system("2\n*\nx1*x2 - 1;\nx1;\n")
    rng = RandomSource(4)
    g = build_start_system(f, rng)
    homotopy = StartHomotopy(embed(f, None, 0), g, rng.unit_complex())
    results = track_batch(homotopy, list(g.roots()), TrackerConfig())
    assert all(r.status == PathStatus.DIVERGED for r in results)
    for r in results:
        assert r.residual == np.inf and r.condition == np.inf


def test_batch_preserves_order_and_indices():
    homotopy, g = _quadratic_homotopy(seed=7)
    starts = list(g.roots())
    seq = track_batch(homotopy, starts, TrackerConfig(), threads=1)
    par = track_batch(homotopy, starts, TrackerConfig(), threads=4)
    assert [r.start_index for r in seq] == [0, 1]
    assert [r.start_index for r in par] == [0, 1]
    for a, b in zip(seq, par):
        assert np.array_equal(a.endpoint, b.endpoint)
        assert a.status == b.status and a.steps_taken == b.steps_taken


@settings(max_examples=100)
@given(st.integers(0, 2**32 - 1))
def test_tracking_deterministic(seed):
    homotopy, g = _quadratic_homotopy(seed=seed)
    a = track_path(homotopy, g.root(0), TrackerConfig())
    b = track_path(homotopy, g.root(0), TrackerConfig())
    assert np.array_equal(a.endpoint, b.endpoint)
    assert a.status == b.status
    assert a.steps_taken == b.steps_taken and a.newton_iters == b.newton_iters
