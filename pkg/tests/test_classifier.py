import numpy as np
import pytest

from gfs2d.classifier import (
    Evidence,
    PointWitness,
    Tri,
    Verdict,
    check_c0,
    check_strong_x_singularity,
    check_xP_singularity,
    classify,
    classify_column0_case,
    classify_column_case,
    classify_point_case,
    project_annihilator,
)
from gfs2d.core import ColumnZ, ColumnZ0, InvalidPhase, LebesgueExponent, PatternMismatch, Point, TorusGrid
from gfs2d.weights import (
    ConstantPhase,
    ConstantWeight,
    ExampleSum,
    ExampleX,
    FirstHarmonic,
    TabulatedPhase,
    TabulatedWeight,
)
from oracles import examplesum_c0_infinite, examplex_complete, sine_power_integral

Y, N, U = Tri.YES, Tri.NO, Tri.UNKNOWN
P2 = LebesgueExponent(2)


def test_kleene_logic():
    assert (Y & U) is U and (N & U) is N and (Y | U) is Y and (N | U) is U
    assert ~U is U and ~Y is N and Tri.of(False) is N


def test_c0_examples():
    v = check_c0(ConstantWeight(), P2)
    assert v.convergent and v.value == pytest.approx(4 * np.pi**2)
    assert check_c0(ExampleX(0, 1.0), P2).divergent
    v = check_c0(ExampleX(0, 0.25), P2)
    assert v.convergent and v.value == pytest.approx(2 * np.pi * sine_power_integral(0.5), rel=1e-8)


def test_strong_x_singularity_examples():
    assert check_strong_x_singularity(ExampleX(0.3, 1.0), P2)[0] is Y
    assert check_strong_x_singularity(ExampleSum(0.3, 0.9, 1.0), P2)[0] is N
    tri, ev = check_strong_x_singularity(ConstantWeight(), P2)
    assert tri is N and ev.result["convergent"] == ev.result["probes"]


@pytest.mark.parametrize("alpha", [0.4, 0.5, 1.0, 1.5])
@pytest.mark.parametrize("p", [1.5, 2, 3])
def test_slice_criterion_matches_threshold(alpha, p):
    exp = LebesgueExponent(p)
    tri, _ = check_strong_x_singularity(ExampleX(1.0, alpha), exp)
    assert tri is Tri.of(examplex_complete(alpha, exp.p_conj))


def test_xP_examples():
    x0 = 0.8
    tri, ev = check_xP_singularity(ExampleX(x0, 1.0), P2, ConstantPhase(x0))
    assert tri is Y and [e.name for e in ev] == ["c0", "xP"]
    assert check_xP_singularity(ExampleX(x0, 1.6), P2, ConstantPhase(x0))[0] is N
    assert check_xP_singularity(ConstantWeight(), P2, ConstantPhase(x0))[0] is N
    with pytest.raises(InvalidPhase):
        check_xP_singularity(ExampleX(x0, 1.0), P2, TabulatedPhase(np.array([1.0, 0.0, 1.0])))


def test_point_case_examples():
    v = classify_point_case(ExampleSum(1.0, 2.0, 1.2), P2)
    assert v.fields() == (Y, Y, Y)
    assert v.witness == PointWitness(1.0, 2.0)
    v = classify_point_case(ConstantWeight(), P2)
    assert (v.complete, v.minimal, v.m_basis) == (N, Y, N)
    assert classify_point_case(ExampleSum(1.0, 2.0, 0.25), P2).complete is N


def test_point_case_examplex_line():
    # the line weight has infinite sin_y integral for every y0 once alpha p' >= 1
    v = classify_point_case(ExampleX(0.5, 1.0), P2)
    assert (v.complete, v.minimal) == (Y, N)


@pytest.mark.parametrize("w", [ExampleSum(1, 2, 1.2), ExampleSum(0.2, 5.0, 0.7), ExampleX(1.0, 1.0), ConstantWeight()])
def test_modulation_invariance(w):
    base = classify_point_case(w, P2, 0, 0).fields()
    for nu, mu in [(1, 0), (0, 1), (3, -2)]:
        assert classify_point_case(w, P2, nu, mu).fields() == base


def test_tabulated_point_case_is_unknown():
    w = TabulatedWeight(np.ones((8, 8)))
    v = classify_point_case(w, P2)
    assert v.complete is N and v.minimal is Y
    g = np.ones((8, 8))
    g[0, 0] = 0.0
    v = classify_point_case(TabulatedWeight(g), P2)
    assert v.complete is U or v.minimal is U


def test_column_case_examples():
    x0 = 1.3
    v = classify_column_case(ExampleX(x0, 1.0), P2)
    assert v.fields() == (Y, Y, Y)
    assert v.witness.P == ConstantPhase(x0)
    v = classify_column_case(ExampleX(x0, 0.25), P2)
    assert (v.complete, v.minimal) == (N, Y)
    v = classify_column_case(ExampleX(x0, 1.6), P2)
    assert (v.complete, v.minimal, v.m_basis) == (Y, N, N)


def test_column0_case_examples():
    assert classify_column0_case(ExampleX(0.4, 1.0), P2).fields()[:2] == (Y, N)
    v = classify_column0_case(ConstantWeight(), P2)
    assert (v.complete, v.minimal, v.m_basis) == (N, Y, N)
    assert classify_column0_case(ExampleX(0.4, 0.25), P2).fields()[:2] == (N, Y)


def test_column0_pair_candidates_must_be_zero_mean():
    with pytest.raises(InvalidPhase):
        classify_column0_case(ExampleSum(0, 0, 1.2), P2, candidates=[(ConstantPhase(0.0), FirstHarmonic())])


def test_column0_without_pairs_is_unknown_on_point_weights():
    v = classify_column0_case(ExampleSum(0.0, 0.0, 1.2), P2)
    assert v.complete is N and v.minimal is U
    v = classify_column0_case(ExampleSum(0.0, 0.0, 1.2), P2, candidates=[(FirstHarmonic(), FirstHarmonic())])
    assert v.minimal in (Y, N, U)
    assert not (v.complete is Y and v.minimal is Y)


@pytest.mark.parametrize("w", [ExampleX(0.9, 0.5), ExampleX(0.9, 1.2), ExampleSum(0.5, 0.5, 1.2), ConstantWeight()])
@pytest.mark.parametrize("p", [1.5, 3])
def test_column_and_column0_agree_on_completeness(w, p):
    exp = LebesgueExponent(p)
    assert classify_column_case(w, exp).complete == classify_column0_case(w, exp).complete


def test_verdict_invariants_enforced():
    with pytest.raises(ValueError):
        Verdict(Point(0, 0), P2, N, Y, Y)
    with pytest.raises(ValueError):
        Verdict(ColumnZ0(), P2, Y, Y, N)


def test_examplesum_audit_evidence():
    v = classify(ExampleSum(0, 0, 0.6), P2, Point(0, 0))
    audit = v.find("examplesum_audit").result
    assert audit["published_in_range"] is True and audit["derived_in_range"] is False
    assert audit["numeric_complete"] == "no" and audit["disagreement"] is True
    assert len(audit["c0_levels"]) > 3
    assert examplesum_c0_infinite(0.6, 2) is False


def test_verdict_json_shape():
    d = classify(ExampleX(0.0, 1.0), P2, ColumnZ()).to_dict()
    assert set(d) == {"pattern", "p", "complete", "minimal", "m_basis", "witness", "evidence", "flags"}
    assert d["witness"]["kind"] == "phase"
    assert Evidence("x", Tri.YES).to_dict() == {"name": "x", "result": "yes"}


def test_dispatch():
    with pytest.raises(PatternMismatch):
        classify(ConstantWeight(), P2, object())


def test_project_annihilator_examples():
    a = project_annihilator(lambda x, y: np.exp(1j * y) + 0 * x, ColumnZ0(), 64)
    assert np.allclose(a.h, np.exp(1j * a.y)) and a.zero_mean
    b = project_annihilator(lambda x, y: np.exp(1j * x) * np.exp(1j * y), ColumnZ(), 64)
    assert np.allclose(b.h, 0, atol=1e-14)
    c = project_annihilator(lambda x, y: 1 + np.cos(x) * np.sin(y), ColumnZ0(), 64)
    assert np.allclose(c.h, 1) and not c.zero_mean
    with pytest.raises(PatternMismatch):
        project_annihilator(lambda x, y: x, Point(0, 0))


def test_annihilator_has_no_x_frequencies(rng):
    n = 64
    C = rng.normal(size=(9, 9)) + 1j * rng.normal(size=(9, 9))
    ks = np.arange(-4, 5)
    g = lambda x, y: sum(C[a, b] * np.exp(1j * (ks[a] * x + ks[b] * y)) for a in range(9) for b in range(9))
    h = project_annihilator(g, ColumnZ(), TorusGrid(n, n))
    X, Yg = TorusGrid(n, n).nodes
    F = np.fft.fft2(np.broadcast_to(h(X, Yg), (n, n))) / n**2
    assert np.max(np.abs(F[1:, :])) <= 1e-10
    assert np.allclose(F[0, ks % n], C[4, :], atol=1e-12)
