"""Completeness, minimality and M-basis verdicts for the three exclusion patterns."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence, Union

import numpy as np

from .core import (
    TWO_PI,
    ColumnZ,
    ColumnZ0,
    ExclusionPattern,
    InvalidPhase,
    LebesgueExponent,
    NoLineSingularity,
    PatternMismatch,
    Point,
    TorusGrid,
    modulate_pattern,
)
from .quadrature import (
    DEFAULT_CONFIG,
    ImproperVerdict,
    QuadratureConfig,
    Status,
    classify_improper,
    slice_verdicts,
)
from .weights import (
    ConstantPhase,
    ExampleSum,
    ExampleX,
    PhaseFunction,
    _same_angle,
    check_upsilon,
    suggest_phase,
)

# fraction of probe slices that must converge before we deny a strong x-singularity
_NO_FRACTION = 0.125


class Tri(str, Enum):
    """Kleene three-valued logic."""

    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"

    @classmethod
    def of(cls, flag: bool) -> "Tri":
        return cls.YES if flag else cls.NO

    def __and__(self, other: "Tri") -> "Tri":
        if Tri.NO in (self, other):
            return Tri.NO
        if Tri.UNKNOWN in (self, other):
            return Tri.UNKNOWN
        return Tri.YES

    def __or__(self, other: "Tri") -> "Tri":
        if Tri.YES in (self, other):
            return Tri.YES
        if Tri.UNKNOWN in (self, other):
            return Tri.UNKNOWN
        return Tri.NO

    def __invert__(self) -> "Tri":
        return {Tri.YES: Tri.NO, Tri.NO: Tri.YES, Tri.UNKNOWN: Tri.UNKNOWN}[self]


def _finite(v: ImproperVerdict) -> Tri:
    return {Status.CONVERGENT: Tri.YES, Status.DIVERGENT: Tri.NO, Status.INCONCLUSIVE: Tri.UNKNOWN}[v.status]


@dataclass(frozen=True)
class PointWitness:
    x0: float
    y0: float

    def __post_init__(self):
        object.__setattr__(self, "x0", float(np.mod(self.x0, TWO_PI)))
        object.__setattr__(self, "y0", float(np.mod(self.y0, TWO_PI)))

    def to_dict(self) -> dict:
        return {"kind": "point", "x0": self.x0, "y0": self.y0}


@dataclass(frozen=True)
class PhaseWitness:
    P: PhaseFunction

    def to_dict(self) -> dict:
        return {"kind": "phase", "P": self.P.to_dict()}


@dataclass(frozen=True)
class PhasePairWitness:
    P: PhaseFunction
    Q: PhaseFunction

    def to_dict(self) -> dict:
        return {"kind": "phase_pair", "P": self.P.to_dict(), "Q": self.Q.to_dict()}


MinimalityWitness = Union[PointWitness, PhaseWitness, PhasePairWitness]


@dataclass(frozen=True)
class Evidence:
    """One named condition and what the numerics said about it."""

    name: str
    result: Union[ImproperVerdict, Tri, dict]
    note: str = ""

    def to_dict(self) -> dict:
        r = self.result
        if isinstance(r, ImproperVerdict):
            body = r.to_dict()
        elif isinstance(r, Tri):
            body = r.value
        else:
            body = r
        d = {"name": self.name, "result": body}
        if self.note:
            d["note"] = self.note
        return d


@dataclass(frozen=True)
class Verdict:
    pattern: ExclusionPattern
    p: LebesgueExponent
    complete: Tri
    minimal: Tri
    m_basis: Tri
    evidence: tuple = ()
    witness: Optional[MinimalityWitness] = None
    flags: tuple = ()

    def __post_init__(self):
        if self.m_basis is Tri.YES and not (self.complete is Tri.YES and self.minimal is Tri.YES):
            raise ValueError("an M-basis must be complete and minimal")
        if isinstance(self.pattern, ColumnZ0) and self.complete is Tri.YES and self.minimal is Tri.YES:
            raise ValueError("the column0 system is never complete and minimal")

    def fields(self) -> tuple[Tri, Tri, Tri]:
        return self.complete, self.minimal, self.m_basis

    def find(self, name: str) -> Optional[Evidence]:
        return next((e for e in self.evidence if e.name == name), None)

    @property
    def inconclusive(self) -> bool:
        """Some required condition came back undecided."""
        return Tri.UNKNOWN in (self.complete, self.minimal)

    def to_dict(self) -> dict:
        return {
            "pattern": self.pattern.to_dict(),
            "p": self.p.to_dict(),
            "complete": self.complete.value,
            "minimal": self.minimal.value,
            "m_basis": self.m_basis.value,
            "witness": None if self.witness is None else self.witness.to_dict(),
            "evidence": [e.to_dict() for e in self.evidence],
            "flags": list(self.flags),
        }


# --- conditions ------------------------------------------------------------


def _inverse_power(w, pc: float):
    return lambda x, y: np.abs(w(x, y)) ** (-pc)


def check_c0(w, exp: LebesgueExponent, cfg: QuadratureConfig = DEFAULT_CONFIG) -> ImproperVerdict:
    """Finiteness of int int |M|^-p'."""
    pc = exp.p_conj
    sing = w.singular
    degree = None if (w.order is None or sing.kind == "none") else w.order * pc
    return classify_improper(_inverse_power(w, pc), sing, cfg, degree)


def check_strong_x_singularity(w, exp: LebesgueExponent, cfg: QuadratureConfig = DEFAULT_CONFIG
                               ) -> tuple[Tri, Evidence]:
    """Slice criterion: every x-slice of |M|^-p' has infinite integral.

    Probes sit at the cell midpoints 2 pi (i + 1/2) / probes.
    """
    ys = TWO_PI * (np.arange(cfg.probes) + 0.5) / cfg.probes
    verdicts = slice_verdicts(w, exp, "x", ys, cfg)
    n_div = sum(v.divergent for v in verdicts)
    n_conv = sum(v.convergent for v in verdicts)
    if n_div == len(verdicts):
        tri = Tri.YES
    elif n_conv >= max(1, _NO_FRACTION * len(verdicts)):
        tri = Tri.NO
    else:
        tri = Tri.UNKNOWN
    detail = {
        "verdict": tri.value,
        "probes": len(verdicts),
        "divergent": n_div,
        "convergent": n_conv,
        "inconclusive": len(verdicts) - n_div - n_conv,
        "first_probe": {"y": float(ys[0]), **verdicts[0].to_dict()},
    }
    return tri, Evidence("strong_x_singularity", detail)


def _xp_degree(w, P) -> Optional[float]:
    if isinstance(w, ExampleX):
        if isinstance(P, ConstantPhase) and _same_angle(P.x0, w.x0):
            return w.alpha - 1.0
        return w.alpha
    return None


def _require_upsilon(P, zero_mean: bool = False, label: str = "P"):
    chk = check_upsilon(P)
    if not chk.in_upsilon:
        raise InvalidPhase(f"{label} must be bounded with bounded reciprocal (|{label}| ranges over "
                           f"[{chk.ess_lo:.3g}, {chk.ess_hi:.3g}])")
    if zero_mean and not chk.in_upsilon0:
        raise InvalidPhase(f"{label} must also have zero mean (mean {chk.mean:.3g})")
    return chk


def xp_integral(w, exp: LebesgueExponent, P: PhaseFunction, cfg: QuadratureConfig = DEFAULT_CONFIG) -> ImproperVerdict:
    """int int |e^{ix} - P(y)|^p' |M|^-p'."""
    pc = exp.p_conj
    f = lambda x, y: np.abs(np.exp(1j * x) - P(y)) ** pc * np.abs(w(x, y)) ** (-pc)
    deg = _xp_degree(w, P)
    return classify_improper(f, w.singular, cfg, None if deg is None else deg * pc)


def check_xP_singularity(w, exp: LebesgueExponent, P: PhaseFunction, cfg: QuadratureConfig = DEFAULT_CONFIG,
                         c0: Optional[ImproperVerdict] = None) -> tuple[Tri, list[Evidence]]:
    """|M|^-p' is not integrable but |e^{ix} - P(y)|^p' |M|^-p' is."""
    _require_upsilon(P)
    c0 = c0 if c0 is not None else check_c0(w, exp, cfg)
    xp = xp_integral(w, exp, P, cfg)
    tri = ~_finite(c0) & _finite(xp)
    return tri, [Evidence("c0", c0), Evidence("xP", xp, note=f"P={P.to_dict()}")]


def q_integral(w, exp: LebesgueExponent, Q: PhaseFunction, cfg: QuadratureConfig = DEFAULT_CONFIG) -> ImproperVerdict:
    """int int |1 - Q(y)|^p' |M|^-p'."""
    pc = exp.p_conj
    f = lambda x, y: np.abs(1.0 - Q(y)) ** pc * np.abs(w(x, y)) ** (-pc)
    deg = w.alpha * pc if isinstance(w, ExampleX) else None
    return classify_improper(f, w.singular, cfg, deg)


# --- audit trails for the two example families ------------------------------


def _sum_audit(w, exp: LebesgueExponent, c0: ImproperVerdict, complete: Tri, minimal: Tri) -> Evidence:
    """Published band for the sum weight next to the power-counting band and the numeric verdict."""
    pc = exp.p_conj
    a = w.alpha
    published = bool(1.0 / pc <= a < 1.0 + 1.0 / pc)
    both = complete & minimal
    numeric = None if both is Tri.UNKNOWN else both is Tri.YES
    detail = {
        "alpha": a,
        "published_range": [1.0 / pc, 1.0 + 1.0 / pc],
        "published_in_range": published,
        "derived_range": [2.0 / pc, 1.0 + 2.0 / pc],
        "derived_in_range": bool(2.0 / pc <= a < 1.0 + 2.0 / pc),
        "numeric_complete": complete.value,
        "numeric_complete_and_minimal": both.value,
        "disagreement": bool(numeric is not None and numeric != published),
        "c0_levels": list(c0.levels),
    }
    return Evidence("examplesum_audit", detail, note="published band versus the power-counting band in two variables")


def _band(w, exp: LebesgueExponent) -> Evidence:
    pc = exp.p_conj
    lo, hi = 1.0 / pc, 1.0 + 1.0 / pc
    return Evidence("examplex_band", {"alpha": w.alpha, "range": [lo, hi], "in_range": bool(lo <= w.alpha < hi)})


# --- the three patterns ----------------------------------------------------


def _point_candidates(w) -> list[PointWitness]:
    sing = w.singular
    if sing.kind == "point" and sing.dim == 2:
        return [PointWitness(sing.x0, sing.y0)]
    if sing.kind == "line":
        return [PointWitness(sing.x0, 0.0)]
    if hasattr(w, "argmin"):
        return [PointWitness(*w.argmin())]
    return []


def _sin_integrals(w, exp: LebesgueExponent, wit: PointWitness, cfg: QuadratureConfig):
    pc = exp.p_conj
    fx = lambda x, y: np.abs(np.sin(0.5 * (x - wit.x0))) ** pc * np.abs(w(x, y)) ** (-pc)
    fy = lambda x, y: np.abs(np.sin(0.5 * (y - wit.y0))) ** pc * np.abs(w(x, y)) ** (-pc)
    sing = w.singular
    dx = dy = None
    if isinstance(w, ExampleX):
        dx = (w.alpha - 1.0) * pc if _same_angle(wit.x0, w.x0) else w.alpha * pc
        dy = w.alpha * pc
    return classify_improper(fx, sing, cfg, dx), classify_improper(fy, sing, cfg, dy)


def classify_point_case(w, exp: LebesgueExponent, nu: int = 0, mu: int = 0,
                        cfg: QuadratureConfig = DEFAULT_CONFIG) -> Verdict:
    """Omega^c = {(nu, mu)}; the verdict is computed for (0, 0) and carried over by modulation."""
    pattern = Point(int(nu), int(mu))
    modulate_pattern(pattern)
    c0 = check_c0(w, exp, cfg)
    evidence = [Evidence("c0", c0, note="infinite iff the system is complete")]
    complete = ~_finite(c0)
    witness = None
    if c0.convergent:
        minimal = Tri.YES
        evidence.append(Evidence("minimality", Tri.YES, note="|M|^-1 in L^p', plain dual"))
    elif c0.inconclusive:
        minimal = Tri.UNKNOWN
    else:
        minimal = Tri.NO
        cands = _point_candidates(w)
        if not cands or w.singular.kind == "none":
            # no analytic metadata: a failed candidate does not rule minimality out
            minimal = Tri.UNKNOWN
        for cand in cands:
            sx, sy = _sin_integrals(w, exp, cand, cfg)
            evidence += [Evidence("sin_x", sx, note=f"x0={cand.x0:.17g}"), Evidence("sin_y", sy, note=f"y0={cand.y0:.17g}")]
            tri = _finite(sx) & _finite(sy)
            if tri is Tri.YES:
                minimal, witness = Tri.YES, cand
                break
            if tri is Tri.UNKNOWN:
                minimal = Tri.UNKNOWN
    if isinstance(w, ExampleSum):
        evidence.append(_sum_audit(w, exp, c0, complete, minimal))
    return Verdict(pattern, exp, complete, minimal, complete & minimal, tuple(evidence), witness)


def _phase_candidates(w, P: Optional[PhaseFunction]) -> tuple[list, bool]:
    """Phase candidates and whether the automatic one (backed by metadata) is among them."""
    cands = [] if P is None else [P]
    auto = False
    sing = w.singular
    try:
        cands.append(suggest_phase(w))
        auto = True
    except NoLineSingularity:
        if sing.kind == "point" and sing.dim == 2:
            cands.append(ConstantPhase(sing.x0))
            auto = True
    return cands, auto


def classify_column_case(w, exp: LebesgueExponent, cfg: QuadratureConfig = DEFAULT_CONFIG,
                         P: Optional[PhaseFunction] = None) -> Verdict:
    """Omega^c = {0} x Z."""
    complete, sx = check_strong_x_singularity(w, exp, cfg)
    c0 = check_c0(w, exp, cfg)
    evidence = [sx, Evidence("c0", c0, note="finite means minimal with the plain dual")]
    witness = None
    flags = []
    if c0.convergent:
        minimal = Tri.YES
    elif c0.inconclusive:
        minimal = Tri.UNKNOWN
    else:
        cands, auto = _phase_candidates(w, P)
        minimal = Tri.NO if auto else Tri.UNKNOWN
        for cand in cands:
            xp = xp_integral(w, exp, cand, cfg)
            evidence.append(Evidence("xP", xp, note=f"P={cand.to_dict()}"))
            if xp.convergent:
                minimal, witness = Tri.YES, PhaseWitness(cand)
                break
            if xp.inconclusive:
                minimal = Tri.UNKNOWN
    m_basis = complete & minimal
    if m_basis is Tri.YES:
        if witness is None or not check_upsilon(witness.P).unimodular:
            m_basis = Tri.UNKNOWN
            flags.append("complete and minimal without a unimodular phase")
        else:
            evidence.append(Evidence("strong_xP_singularity", Tri.YES, note="unimodular phase"))
    if isinstance(w, ExampleX):
        evidence.append(_band(w, exp))
    return Verdict(ColumnZ(), exp, complete, minimal, m_basis, tuple(evidence), witness, tuple(flags))


def classify_column0_case(w, exp: LebesgueExponent, cfg: QuadratureConfig = DEFAULT_CONFIG,
                          candidates: Sequence[tuple[PhaseFunction, PhaseFunction]] = ()) -> Verdict:
    """Omega^c = {0} x (Z minus 0); (P, Q) pairs from zero-mean phases come from the caller."""
    complete, sx = check_strong_x_singularity(w, exp, cfg)
    c0 = check_c0(w, exp, cfg)
    evidence = [sx, Evidence("c0", c0, note="finite means minimal with the plain dual")]
    witness = None
    flags = []
    numeric_minimal = Tri.NO
    if c0.convergent:
        numeric_minimal = Tri.YES
    elif c0.inconclusive:
        numeric_minimal = Tri.UNKNOWN
    else:
        for P, Q in candidates:
            _require_upsilon(P, zero_mean=True, label="P")
            _require_upsilon(Q, zero_mean=True, label="Q")
            xp = xp_integral(w, exp, P, cfg)
            qi = q_integral(w, exp, Q, cfg)
            evidence += [Evidence("xP", xp, note=f"P={P.to_dict()}"), Evidence("up0", qi, note=f"Q={Q.to_dict()}")]
            tri = _finite(xp) & _finite(qi)
            if tri is Tri.YES:
                numeric_minimal, witness = Tri.YES, PhasePairWitness(P, Q)
                break
            if tri is Tri.UNKNOWN:
                numeric_minimal = Tri.UNKNOWN
        if numeric_minimal is Tri.NO and complete is not Tri.YES:
            # untested pairs might still work
            numeric_minimal = Tri.UNKNOWN
    minimal = numeric_minimal
    if complete is Tri.YES:
        if numeric_minimal is Tri.YES:
            flags.append("ContradictionFlag")
            evidence.append(Evidence("ContradictionFlag", {"complete": "yes", "numeric_minimal": "yes"},
                                     note="column0 systems cannot be complete and minimal"))
            minimal, witness = Tri.UNKNOWN, None
        else:
            minimal = Tri.NO
            evidence.append(Evidence("structural", Tri.NO, note="complete column0 systems are never minimal"))
    return Verdict(ColumnZ0(), exp, complete, minimal, Tri.NO, tuple(evidence), witness, tuple(flags))


def classify(w, exp: LebesgueExponent, pattern: ExclusionPattern, cfg: QuadratureConfig = DEFAULT_CONFIG,
             P: Optional[PhaseFunction] = None, pairs: Sequence = ()) -> Verdict:
    if isinstance(pattern, Point):
        return classify_point_case(w, exp, pattern.nu, pattern.mu, cfg)
    if isinstance(pattern, ColumnZ):
        return classify_column_case(w, exp, cfg, P)
    if isinstance(pattern, ColumnZ0):
        return classify_column0_case(w, exp, cfg, pairs)
    raise PatternMismatch(repr(pattern))


# --- annihilator -----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class AnnihilatorElement:
    """y-only representative h(y) = (2 pi)^-1 int g(x, y) dx on a uniform grid."""

    y: np.ndarray
    h: np.ndarray
    mean: complex
    zero_mean: bool
    pattern: ExclusionPattern = field(default_factory=ColumnZ)

    def __call__(self, x, y):
        n = self.h.size
        j = np.rint(np.mod(np.asarray(y, dtype=float), TWO_PI) * n / TWO_PI).astype(int) % n
        return np.broadcast_to(self.h[j], np.broadcast(np.asarray(x), np.asarray(y)).shape)


def project_annihilator(g, pattern: ExclusionPattern, grid: Union[TorusGrid, int] = 256,
                        tol: float = 1e-10) -> AnnihilatorElement:
    if isinstance(pattern, Point):
        raise PatternMismatch("the point pattern annihilator is the constants; no projection needed")
    if not isinstance(grid, TorusGrid):
        grid = TorusGrid(int(grid), int(grid))
    x, y = grid.x, grid.y
    vals = np.asarray(g(x[:, None], y[None, :]), dtype=complex)
    h = np.broadcast_to(vals, (grid.n_x, grid.n_y)).mean(axis=0)
    mean = complex(h.mean())
    return AnnihilatorElement(y, h, mean, abs(mean) <= tol, pattern)
