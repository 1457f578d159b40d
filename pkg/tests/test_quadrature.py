import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gfs2d.core import LebesgueExponent, Singularity, SingularNode, TorusGrid, UnsupportedSingularity
from gfs2d.quadrature import (
    DEFAULT_CONFIG,
    QuadratureConfig,
    Status,
    aitken_limit,
    analyse_levels,
    classify_improper,
    excluded_integral,
    holder_sides,
    integrate_periodic_1d,
    integrate_torus_2d,
    level_integrals,
    lp_norm,
    marginal_u,
    marginal_v,
    n_workers,
)
from gfs2d.weights import ConstantWeight, ExampleSum, ExampleX
from oracles import BETA_HALF, sine_power_integral

TWO_PI = 2 * math.pi
NUMERIC = QuadratureConfig(fast_path=False)


def sine_power(beta):
    def f(t):
        with np.errstate(divide="ignore"):
            return np.abs(np.sin(t / 2)) ** (-beta)
    return f


def test_periodic_rule_examples():
    for n in (1, 2, 7, 64):
        assert integrate_periodic_1d(lambda x: np.ones_like(x), n) == pytest.approx(TWO_PI, rel=1e-15)
    assert integrate_periodic_1d(lambda x: np.sin(x) ** 2, 64) == pytest.approx(math.pi, rel=1e-14)
    assert abs(integrate_periodic_1d(lambda x: 2 + np.cos(x), 16) - 4 * math.pi) <= 1e-12


def test_periodic_rule_rejects_singular_node():
    with pytest.raises(SingularNode):
        integrate_periodic_1d(sine_power(0.5), 64)


def test_shifted_midpoint_approaches_beta_oracle():
    errs = []
    for k in (12, 16, 20):
        n = 2**k
        h = math.pi / n
        errs.append(abs(integrate_periodic_1d(lambda x: np.abs(np.sin((x + h) / 2)) ** -0.5, n) - BETA_HALF))
    assert errs[0] > errs[1] > errs[2]
    # n^(-1/2) decay: every factor 16 in n quarters the error
    assert errs[1] / errs[0] == pytest.approx(0.25, rel=0.01)
    assert errs[2] / BETA_HALF < 5e-4


def test_torus_rule_examples():
    assert integrate_torus_2d(lambda x, y: np.ones(np.broadcast(x, y).shape), 32) == pytest.approx(4 * math.pi**2)
    assert abs(integrate_torus_2d(lambda x, y: np.cos(x) + 0 * y, TorusGrid(16, 8))) < 1e-13
    w = ExampleX(0.0, 1.0)
    val = integrate_torus_2d(lambda x, y: np.abs(w(x, y)) ** 2, 64)
    assert val == pytest.approx(2 * math.pi * math.pi, rel=1e-13)


def test_lp_norm_examples():
    assert lp_norm(lambda x, y: np.ones(np.broadcast(x, y).shape), 2, TorusGrid(16, 16)) == pytest.approx(TWO_PI)
    assert lp_norm(lambda x: 0 * x + 1.7, 3, 32) == pytest.approx(1.7 * TWO_PI ** (1 / 3))
    for p in (1.0, 2.5, 4.0):
        assert lp_norm(lambda x: np.exp(3j * x), p, 32) == pytest.approx(TWO_PI ** (1 / p))
    with pytest.raises(ValueError):
        lp_norm(lambda x: x, 0.5, 8)


@pytest.mark.parametrize("beta", [0.5, 0.9, 1.0, 1.1, 2.0])
def test_classify_improper_against_threshold(beta):
    for cfg in (DEFAULT_CONFIG, NUMERIC):
        v = classify_improper(sine_power(beta), Singularity.point1d(0.0), cfg, local_degree=beta)
        assert v.divergent == (beta >= 1)
        assert not v.inconclusive


def test_beta_half_value():
    v = classify_improper(sine_power(0.5), Singularity.point1d(0.0), NUMERIC)
    assert v.convergent and v.source == "numeric"
    assert v.value == pytest.approx(BETA_HALF, rel=1e-10)
    assert v.err < 1e-6


@given(st.floats(0.05, 0.85))
@settings(max_examples=15)
def test_convergent_values_match_gamma_form(beta):
    v = classify_improper(sine_power(beta), Singularity.point1d(0.0), NUMERIC)
    assert v.convergent
    assert v.value == pytest.approx(sine_power_integral(beta), rel=1e-6)


def test_log_divergence_growth():
    v = classify_improper(sine_power(1.0), Singularity.point1d(0.0), NUMERIC)
    assert v.divergent and v.growth.startswith("logarithmic")
    d = np.diff(v.levels)
    # 2/|t| on both sides of 0: every halving of the window adds 4 log 2
    assert d[-1] == pytest.approx(4 * math.log(2), rel=1e-3)
    w = classify_improper(sine_power(2.0), Singularity.point1d(0.0), NUMERIC)
    assert w.divergent and w.growth.startswith("power")


def test_smooth_integrand_without_singular_set():
    v = classify_improper(lambda x: np.ones_like(x), Singularity.none(1))
    assert v.convergent and v.value == pytest.approx(TWO_PI)
    bad = classify_improper(sine_power(0.5), Singularity.none(1))
    assert bad.inconclusive


@given(st.floats(0.1, 2.5), st.floats(0, TWO_PI))
@settings(max_examples=20)
def test_levels_nondecreasing(beta, c):
    I = level_integrals(lambda t: np.abs(np.sin((t - c) / 2)) ** (-beta), Singularity.point1d(c))
    assert np.all(np.diff(I) >= -1e-12 * (1 + np.abs(I[1:])))


def test_levels_nondecreasing_on_torus():
    w = ExampleSum(1.0, 2.0, 1.0)
    I = level_integrals(lambda x, y: np.abs(w(x, y)) ** -2, w.singular)
    assert np.all(np.diff(I) > 0)
    L = ExampleX(0.5, 0.8)
    I = level_integrals(lambda x, y: np.abs(L(x, y)) ** -2, L.singular)
    assert np.all(np.diff(I) > 0)


def test_two_dimensional_thresholds():
    for alpha, diverges in ((0.9, False), (1.0, True), (1.3, True)):
        w = ExampleSum(1.0, 2.0, alpha)
        v = classify_improper(lambda x, y: np.abs(w(x, y)) ** -2, w.singular, NUMERIC)
        assert v.divergent == diverges and not v.inconclusive
    w = ExampleX(0.0, 0.25)
    v = classify_improper(lambda x, y: np.abs(w(x, y)) ** -2, w.singular, NUMERIC)
    assert v.convergent
    assert v.value == pytest.approx(TWO_PI * sine_power_integral(0.5), rel=1e-8)


def test_unsupported_singularity():
    with pytest.raises(UnsupportedSingularity):
        classify_improper(lambda x: x, Singularity("curve", 2))


def test_analyse_levels_branches():
    assert analyse_levels([1.0, 1.5, 1.75, 1.875, 1.9375]).convergent
    assert analyse_levels(np.arange(8.0)).divergent
    assert analyse_levels([0, 1, 1, 1, 1, 2.0]).inconclusive
    assert analyse_levels([0, 1, 1.1, 3, 3.01, 5.0]).inconclusive
    assert analyse_levels([0, 1, np.inf, 3.0]).inconclusive
    stable = analyse_levels([2.0, 3.0, 3.0, 3.0])
    assert stable.convergent and stable.value == 3.0


def test_aitken_geometric_sequence():
    I = 1.0 - 0.5 ** np.arange(8.0)
    val, err, ok = aitken_limit(I[:, None], 1e-8)
    assert ok[0] and val[0] == pytest.approx(1.0, abs=1e-14)
    noisy = np.array([0, 1, -1, 2, -3, 5.0])
    _, _, ok = aitken_limit(noisy[:, None], 1e-8)
    assert not ok[0]


def test_excluded_integral_of_integrable_signed_function():
    w = ExampleX(1.0, 1.0)
    f = lambda x, y: np.cos(3 * y) * 0 + np.sin(x - 1.0) / np.abs(w(x, y)) ** 0.5
    val, err, ok = excluded_integral(f, w.singular)
    assert ok and abs(val) < 1e-10


def test_marginal_examplex_closed_form():
    x0 = 0.7
    u = marginal_u(ExampleX(x0, 1.0), LebesgueExponent(2), n=256)
    exact = np.abs(np.sin((u.grid - x0) / 2)) * TWO_PI ** -0.5
    assert np.allclose(u.values, exact, rtol=1e-12, atol=1e-15)
    assert not np.any(u.flagged)
    assert np.all(u.values >= 0)


def test_marginal_const_and_zero_slices():
    u = marginal_u(ConstantWeight(), LebesgueExponent(2), n=64)
    assert np.allclose(u.values, TWO_PI ** -0.5)
    w = ExampleX(0.0, 1.0)
    v = marginal_v(w, LebesgueExponent(2), n=64)
    # every x-slice contains the zero line, so v vanishes identically
    assert np.all(v.values == 0) and all(r.divergent for r in v.verdicts)
    u = marginal_u(w, LebesgueExponent(2), n=64)
    assert u.values[0] == 0 and u.verdicts[0].divergent


def test_v_mirrors_u():
    a = ExampleSum(0.4, 1.9, 1.3)
    b = ExampleSum(1.9, 0.4, 1.3)
    exp = LebesgueExponent(3)
    assert np.allclose(marginal_v(a, exp, n=128).values, marginal_u(b, exp, n=128).values, rtol=1e-12, atol=0)


@pytest.mark.parametrize("w", [ExampleX(1.0, 0.6), ExampleSum(1.0, 2.0, 1.2), ConstantWeight(2.0)])
def test_holder_inequality(w):
    lhs, rhs = holder_sides(w, LebesgueExponent(2), n=512)
    assert lhs <= rhs * (1 + 1e-6)


def test_config_validation_and_workers(monkeypatch):
    with pytest.raises(ValueError):
        QuadratureConfig(jmin=5, jmax=6)
    with pytest.raises(ValueError):
        QuadratureConfig(rho=1.0)
    with pytest.raises(ValueError):
        QuadratureConfig(tol=0)
    assert DEFAULT_CONFIG.scaled(0.5).n == 2048
    monkeypatch.setenv("GFS2D_THREADS", "1")
    assert n_workers() == 1
    monkeypatch.setenv("GFS2D_THREADS", "junk")
    assert n_workers() >= 1


def test_verdict_dict_carries_levels():
    v = classify_improper(sine_power(1.0), Singularity.point1d(0.0))
    d = v.to_dict()
    assert d["status"] == Status.DIVERGENT.value and len(d["levels"]) == DEFAULT_CONFIG.jmax - DEFAULT_CONFIG.jmin + 1
