"""Acceptance suite: one marked group per criterion; the terminal summary prints PASS/FAIL per criterion."""
import csv
import json
import time

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from gfs2d import (
    ColumnZ,
    ConstantPhase,
    ConstantWeight,
    ExampleSum,
    ExampleX,
    FirstHarmonic,
    LebesgueExponent,
    PhaseWitness,
    Point,
    Singularity,
    SpanFunction,
    Tri,
    build_dual,
    classify_column0_case,
    classify_column_case,
    classify_improper,
    classify_point_case,
    gfs_coefficients_many,
    holder_sides,
    reconstruction_error,
    verify_biorthogonality,
    verify_recurrence,
    window_indices,
)
from gfs2d.cli import main
from gfs2d.quadrature import DEFAULT_CONFIG, QuadratureConfig
from oracles import BETA_HALF

TWO_PI = 2 * np.pi
P2 = LebesgueExponent(2)


def band_alphas(pc):
    lo, hi = 1 / pc, 1 + 1 / pc
    return [0.8 * lo, lo, 0.5 * (lo + hi), hi - 0.01, hi + 0.1]


# --- 1 ---------------------------------------------------------------------


@pytest.mark.criterion(1, "divergence classifier vs analytic threshold")
def test_c1_sine_power_threshold():
    betas = [0.5, 0.9, 0.99, 1.0, 1.1, 2.0]
    t0 = time.perf_counter()
    for cfg in (DEFAULT_CONFIG, QuadratureConfig(fast_path=False)):
        for beta in betas:
            def f(t, beta=beta):
                with np.errstate(divide="ignore"):
                    return np.abs(np.sin(t / 2)) ** (-beta)
            v = classify_improper(f, Singularity.point1d(0.0), cfg, local_degree=beta)
            assert not v.inconclusive, (beta, cfg.fast_path, v)
            assert v.divergent == (beta >= 1), (beta, cfg.fast_path, v)
            if beta == 0.5:
                assert abs(v.value - BETA_HALF) <= 1e-4 * BETA_HALF
    assert time.perf_counter() - t0 < 10


# --- 2 ---------------------------------------------------------------------


@pytest.mark.criterion(2, "ExampleX band reproduction")
def test_c2_band():
    t0 = time.perf_counter()
    mismatches = []
    for cfg in (DEFAULT_CONFIG, QuadratureConfig(fast_path=False)):
        for p in (1.5, 2, 3):
            exp = LebesgueExponent(p)
            pc = exp.p_conj
            for alpha in band_alphas(pc):
                v = classify_column_case(ExampleX(1.0, alpha), exp, cfg)
                claim = v.complete & v.minimal & v.m_basis
                inside = 1 / pc <= alpha < 1 + 1 / pc
                if claim is not Tri.of(inside):
                    mismatches.append((cfg.fast_path, p, alpha, v.fields()))
    assert mismatches == []
    assert time.perf_counter() - t0 < 60


# --- 3 ---------------------------------------------------------------------


@pytest.fixture(scope="module")
def gate_dual():
    return build_dual(ColumnZ(), ExampleX(1.0, 1.0), P2, PhaseWitness(ConstantPhase(1.0)))


@pytest.mark.criterion(3, "biorthogonality gate")
def test_c3_biorthogonality(gate_dual):
    t0 = time.perf_counter()
    window = window_indices(ColumnZ(), 5)
    assert len(window) == 110 and all(k != 0 and abs(k) <= 5 and abs(m) <= 5 for k, m in window)
    devs = []
    for scale in (0.125, 0.25, 0.5, 1.0):
        rep = verify_biorthogonality(gate_dual, window, DEFAULT_CONFIG.scaled(scale))
        devs.append(rep.max_dev)
    final = rep
    assert final.max_dev <= 1e-6
    a = final.indices.index((1, 0))
    assert abs(final.matrix[a, a] - 1) <= 1e-6
    # doubling the grid never makes things worse (up to round-off)
    for coarse, fine in zip(devs, devs[1:]):
        assert fine <= max(coarse, 1e-12), devs
    assert time.perf_counter() - t0 < 120


# --- 4 ---------------------------------------------------------------------


@pytest.mark.criterion(4, "dual recurrence identity")
def test_c4_recurrence(gate_dual):
    rng = np.random.default_rng(4)
    x = np.empty(0)
    while x.size < 1000:
        cand = rng.uniform(0, TWO_PI, 2000)
        cand = cand[np.abs(np.angle(np.exp(1j * (cand - 1.0)))) > 1e-3]
        x = np.concatenate([x, cand])[:1000]
    y = rng.uniform(0, TWO_PI, 1000)
    assert verify_recurrence(gate_dual, x, y, nm=4) <= 1e-12
    assert verify_recurrence(gate_dual, x, y, nm=4, P=ConstantPhase(2.0)) >= 0.1


# --- 5 ---------------------------------------------------------------------


@pytest.mark.criterion(5, "modulation invariance")
def test_c5_modulation():
    w = ExampleSum(1, 2, 1.2)
    verdicts = [classify_point_case(w, P2, nu, mu) for nu, mu in [(0, 0), (1, 0), (0, 1), (3, -2)]]
    base = verdicts[0]
    for v in verdicts[1:]:
        assert v.fields() == base.fields()
        assert v.witness == base.witness
        assert [e.name for e in v.evidence] == [e.name for e in base.evidence]


# --- 6 ---------------------------------------------------------------------


@st.composite
def draws(draw):
    family = draw(st.sampled_from(["examplex", "examplesum"]))
    p = draw(st.floats(1.1, 6.0))
    pc = LebesgueExponent(p).p_conj
    alpha = draw(st.floats(1.0 / pc, 3.0))
    assume(alpha * pc >= 1)  # 1/p' times p' can round to just below 1
    x0 = draw(st.floats(0, TWO_PI))
    y0 = draw(st.floats(0, TWO_PI))
    with_pair = draw(st.booleans())
    return family, p, alpha, x0, y0, with_pair


@pytest.mark.criterion(6, "column0 impossibility")
@settings(max_examples=20)
@given(draws())
def test_c6_column0_never_complete_minimal(d):
    family, p, alpha, x0, y0, with_pair = d
    exp = LebesgueExponent(p)
    assert alpha * exp.p_conj >= 1
    w = ExampleX(x0, alpha) if family == "examplex" else ExampleSum(x0, y0, alpha)
    pairs = [(FirstHarmonic(), FirstHarmonic())] if with_pair else ()
    v = classify_column0_case(w, exp, candidates=pairs)
    assert not (v.complete is Tri.YES and v.minimal is Tri.YES)
    assert v.m_basis is Tri.NO
    if family == "examplex":
        assert (v.complete, v.minimal) == (Tri.YES, Tri.NO)


# --- 7 ---------------------------------------------------------------------


def random_polys(rng, weight, pattern, count):
    out = []
    for _ in range(count):
        radius = int(rng.integers(1, 5))
        idx = window_indices(pattern, radius)
        chosen = rng.choice(len(idx), size=int(rng.integers(1, min(8, len(idx)) + 1)), replace=False)
        r = np.sqrt(rng.uniform(0, 1, chosen.size))
        c = r * np.exp(1j * rng.uniform(0, TWO_PI, chosen.size))
        out.append(SpanFunction(weight, {idx[i]: ci for i, ci in zip(chosen, c)}))
    return out


@pytest.mark.criterion(7, "GFS round trip")
def test_c7_round_trip(gate_dual):
    t0 = time.perf_counter()
    rng = np.random.default_rng(7)
    plain = build_dual(Point(0, 0), ConstantWeight(), P2)
    worst_coef = worst_rec = 0.0
    for dual in (plain, gate_dual):
        gs = random_polys(rng, dual.weight, dual.pattern, 50)
        assert all(g.supported_in(dual.pattern) and g.radius <= 4 for g in gs)
        tables = gfs_coefficients_many(gs, dual, 4)
        for g, t in zip(gs, tables):
            truth = np.array([g.coeffs.get(idx, 0) for idx in t.indices])
            worst_coef = max(worst_coef, float(np.max(np.abs(t.values - truth))))
            res = reconstruction_error(g, dual, 2, [4], table=t)
            assert not res.experimental
            worst_rec = max(worst_rec, res.errors[0])
    assert worst_coef <= 1e-6
    assert worst_rec <= 1e-6
    assert time.perf_counter() - t0 < 300


# --- 8 ---------------------------------------------------------------------


@pytest.mark.criterion(8, "marginal Hoelder bound")
def test_c8_holder():
    failures = []
    for p in (1.5, 2, 3):
        exp = LebesgueExponent(p)
        for alpha in band_alphas(exp.p_conj):
            for w in (ExampleSum(1.0, 2.0, alpha), ExampleX(1.0, alpha)):
                lhs, rhs = holder_sides(w, exp)
                if not lhs <= rhs * (1 + 1e-6):
                    failures.append((p, alpha, w, lhs, rhs))
    assert failures == []


# --- 9 ---------------------------------------------------------------------


@pytest.mark.criterion(9, "ExampleSum audit trail")
def test_c9_audit(tmp_path):
    out_csv, out_json = tmp_path / "sweep.csv", tmp_path / "sweep.json"
    code = main(["sweep", "--family", "examplesum", "--ps", "2", "--alphas", "0.6,0.9,1.1,1.4",
                 "--csv", str(out_csv), "--json", str(out_json), "--no-timings"])
    assert code == 0
    rows = list(csv.DictReader(open(out_csv)))
    assert [float(r["alpha"]) for r in rows] == [0.6, 0.9, 1.1, 1.4]
    for r in rows:
        alpha = float(r["alpha"])
        assert r["published_in_range"] == str(0.5 <= alpha < 1.5).lower()
        assert r["derived_in_range"] == str(1.0 <= alpha < 2.0).lower()
        assert r["c0_complete"] in ("yes", "no")
        assert r["c0_complete"] == r["complete"]
        claim_yes = r["claim_verdict"] == "yes"
        published = r["published_in_range"] == "true"
        assert r["disagreement"] == ("DISAGREE" if claim_yes != published else "agree")
        levels = [float(s) for s in r["c0_levels"].split(";")]
        assert len(levels) >= 4 and np.all(np.diff(levels) > 0)
    report = json.loads(out_json.read_text())
    assert len(report["result"]["rows"]) == 4
    # the verdict itself carries the same audit next to the raw level sequence
    v = classify_point_case(ExampleSum(0.0, 0.0, 0.6), P2)
    audit = v.find("examplesum_audit").result
    assert {"published_in_range", "derived_in_range", "disagreement", "c0_levels"} <= set(audit)
