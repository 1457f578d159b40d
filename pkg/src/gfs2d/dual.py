"""Closed-form biorthogonal duals of the weighted system and their numerical checks."""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .classifier import (
    PhasePairWitness,
    PhaseWitness,
    PointWitness,
    Tri,
    Verdict,
    _finite,
    _sin_integrals,
    classify,
    q_integral,
    xp_integral,
)
from .core import (
    TWO_PI,
    ColumnZ,
    ColumnZ0,
    ExclusionPattern,
    FreqIndex,
    LebesgueExponent,
    NotMinimal,
    PatternMismatch,
    Point,
    WitnessMismatch,
    omega_contains,
    window_indices,
)
from .quadrature import DEFAULT_CONFIG, QuadratureConfig, classify_improper, inner_products
from .weights import ConstantPhase, ExampleX, PhaseFunction, _same_angle

_NORM = TWO_PI ** -2


@dataclass(frozen=True)
class PlainForm:
    name = "plain"

    def to_dict(self) -> dict:
        return {"form": self.name}


@dataclass(frozen=True)
class PointForm:
    x0: float
    y0: float
    nu: int = 0
    mu: int = 0
    name = "point"

    def to_dict(self) -> dict:
        return {"form": self.name, "x0": self.x0, "y0": self.y0, "nu": self.nu, "mu": self.mu}


@dataclass(frozen=True)
class ColumnForm:
    P: PhaseFunction
    name = "column"

    def to_dict(self) -> dict:
        return {"form": self.name, "P": self.P.to_dict()}


@dataclass(frozen=True, eq=False)
class Column0Form:
    """Column numerators plus a mean correction c_{k,m} (1 - Q(y)).

    c_{k,m} = (2 pi)^-1 int P(y)^k e^{imy} dy; the correction restores
    orthogonality against the constant element, which the bare column
    numerators violate whenever c_{k,m} != 0. For (0, 0) the numerator is 1 - Q.
    corrected=False drops the correction away from (0, 0) (negative control).
    """

    P: PhaseFunction
    Q: PhaseFunction
    n: int = 4096
    corrected: bool = True
    name = "column0"

    def mean_coefficient(self, k: int, m: int) -> complex:
        y = TWO_PI * np.arange(self.n) / self.n
        return complex(np.mean(self.P.power(k, y) * np.exp(1j * m * y)))

    def to_dict(self) -> dict:
        return {"form": self.name, "P": self.P.to_dict(), "Q": self.Q.to_dict(), "corrected": self.corrected}


DualForm = Union[PlainForm, PointForm, ColumnForm, Column0Form]


def system_element(w, k: int, m: int):
    """(x, y) -> M(x, y) e^{ikx} e^{imy}."""
    return lambda x, y: w(x, y) * (np.exp(1j * k * np.asarray(x, dtype=float)) * np.exp(1j * m * np.asarray(y, dtype=float)))


@dataclass(frozen=True, eq=False)
class DualSystem:
    pattern: ExclusionPattern
    weight: object
    form: DualForm
    exp: Optional[LebesgueExponent] = None
    verdict: Optional[Verdict] = field(default=None, repr=False)
    diagnostics: dict = field(default_factory=dict, repr=False)

    def _numerator(self, k: int, m: int, x, y):
        """Numerator N with element = (2 pi)^-2 N / conj(M); no index check."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        e = np.exp(1j * k * x) * np.exp(1j * m * y)
        f = self.form
        if isinstance(f, PlainForm):
            return e
        if isinstance(f, PointForm):
            c = np.exp(1j * ((k - f.nu) * f.x0 + (m - f.mu) * f.y0))
            return e - c * np.exp(1j * (f.nu * x + f.mu * y))
        ey = np.exp(1j * m * y)
        out = e - f.P.power(k, y) * ey
        if isinstance(f, Column0Form) and (f.corrected or (k, m) == (0, 0)):
            c = f.mean_coefficient(k, m)
            if c != 0:
                out = out + c * (1.0 - f.Q(y))
        return out

    def numerator(self, k: int, m: int, x, y):
        if not omega_contains(self.pattern, (k, m)):
            raise PatternMismatch(f"index ({k}, {m}) is not in Omega for the {self.pattern.name} pattern")
        return self._numerator(k, m, x, y)

    def element(self, k: int, m: int):
        """Callable (x, y) -> dual element with index (k, m)."""
        if not omega_contains(self.pattern, (k, m)):
            raise PatternMismatch(f"index ({k}, {m}) is not in Omega for the {self.pattern.name} pattern")
        w = self.weight
        return lambda x, y: _NORM * self._numerator(k, m, x, y) / np.conj(w(x, y))

    def __call__(self, k: int, m: int, x, y):
        return self.element(k, m)(x, y)

    def to_dict(self) -> dict:
        d = {"pattern": self.pattern.to_dict(), "weight": self.weight.to_dict(), **self.form.to_dict()}
        if self.diagnostics:
            d["diagnostics"] = self.diagnostics
        return d


# --- construction ----------------------------------------------------------

_REQUIRED = {
    "point": "PointWitness(x0, y0), or none when int int |M|^-p' is finite",
    "column": "PhaseWitness(P) with P bounded and 1/P bounded, or none when int int |M|^-p' is finite",
    "column0": "PhasePairWitness(P, Q) with zero-mean P, Q, or none when int int |M|^-p' is finite",
}


def _form_for(pattern, witness) -> DualForm:
    if witness is None:
        return PlainForm()
    if isinstance(pattern, Point) and isinstance(witness, PointWitness):
        return PointForm(witness.x0, witness.y0, pattern.nu, pattern.mu)
    if isinstance(pattern, ColumnZ) and isinstance(witness, PhaseWitness):
        return ColumnForm(witness.P)
    if isinstance(pattern, ColumnZ0) and isinstance(witness, PhasePairWitness):
        return Column0Form(witness.P, witness.Q)
    raise WitnessMismatch(
        f"{type(witness).__name__} does not fit the {pattern.name} pattern; required: {_REQUIRED[pattern.name]}"
    )


def _numerator_degree(w, form, pc) -> Optional[float]:
    if not isinstance(w, ExampleX):
        return None if w.order is None else (w.order * pc if isinstance(form, PlainForm) else None)
    if isinstance(form, ColumnForm) and isinstance(form.P, ConstantPhase) and _same_angle(form.P.x0, w.x0):
        return (w.alpha - 1.0) * pc
    if isinstance(form, PointForm) and form.nu == 0 and _same_angle(form.x0, w.x0):
        return None
    return w.alpha * pc


def membership(dual: DualSystem, radius: int = 1, cfg: QuadratureConfig = DEFAULT_CONFIG) -> list[dict]:
    """Finiteness of int int |dual element|^p' over a small window."""
    pc = dual.exp.p_conj
    w = dual.weight
    deg = _numerator_degree(w, dual.form, pc)
    if dual.weight.singular.kind == "none":
        deg = None
    out = []
    for k, m in window_indices(dual.pattern, radius):
        el = dual.element(k, m)
        v = classify_improper(lambda x, y, el=el: np.abs(el(x, y)) ** pc, w.singular, cfg, deg)
        out.append({"k": k, "m": m, **v.to_dict()})
    return out


def build_dual(pattern: ExclusionPattern, w, exp: LebesgueExponent, witness=None,
               cfg: QuadratureConfig = DEFAULT_CONFIG, verdict: Optional[Verdict] = None,
               diagnose: bool = True) -> DualSystem:
    """Dual of the weighted system for a certified minimality witness.

    Raises NotMinimal when minimality is refuted or cannot be certified, and
    WitnessMismatch when the witness kind does not fit the pattern (or is
    missing while int int |M|^-p' diverges).
    """
    if verdict is None:
        P = witness.P if isinstance(witness, PhaseWitness) else None
        pairs = [(witness.P, witness.Q)] if isinstance(witness, PhasePairWitness) else ()
        verdict = classify(w, exp, pattern, cfg, P=P, pairs=pairs)
    if verdict.minimal is Tri.NO:
        raise NotMinimal(f"the system is not minimal for the {pattern.name} pattern at p={exp.p}; "
                         f"a dual would need {_REQUIRED[pattern.name]}")
    form = _form_for(pattern, witness)
    c0 = verdict.find("c0")
    pe = c0 is not None and c0.result.convergent
    if isinstance(form, PlainForm) and not pe:
        raise WitnessMismatch(f"int int |M|^-p' is not certified finite; required: {_REQUIRED[pattern.name]}")
    if not pe:
        _certify(form, w, exp, cfg)
    dual = DualSystem(pattern, w, form, exp, verdict)
    if diagnose:
        dual.diagnostics["membership"] = membership(dual, 1, cfg)
    return dual


def _certify(form, w, exp, cfg):
    if isinstance(form, PointForm):
        sx, sy = _sin_integrals(w, exp, PointWitness(form.x0, form.y0), cfg)
        ok = _finite(sx) & _finite(sy)
        what = "sin-integrals"
    elif isinstance(form, ColumnForm):
        ok = _finite(xp_integral(w, exp, form.P, cfg))
        what = "phase integral"
    else:
        ok = _finite(xp_integral(w, exp, form.P, cfg)) & _finite(q_integral(w, exp, form.Q, cfg))
        what = "phase-pair integrals"
    if ok is not Tri.YES:
        raise NotMinimal(f"the witness's {what} are not certified finite ({ok.value})")


# --- verification ----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class BiorthogonalityReport:
    indices: tuple
    matrix: np.ndarray
    err: np.ndarray
    ok: np.ndarray

    @property
    def deviation(self) -> np.ndarray:
        return np.abs(self.matrix - np.eye(len(self.indices)))

    @property
    def max_dev(self) -> float:
        return float(self.deviation.max()) if self.indices else 0.0

    def to_csv(self, path: Union[str, Path]) -> None:
        dev = self.deviation
        with open(path, "w", newline="") as fh:
            out = csv.writer(fh)
            out.writerow(["k", "m", "j", "l", "re", "im", "deviation"])
            for a, (k, m) in enumerate(self.indices):
                for b, (j, l) in enumerate(self.indices):
                    z = self.matrix[a, b]
                    out.writerow([k, m, j, l, repr(float(z.real)), repr(float(z.imag)), repr(float(dev[a, b]))])


def _as_window(dual: DualSystem, window) -> list[FreqIndex]:
    if isinstance(window, (int, np.integer)):
        return window_indices(dual.pattern, int(window))
    idx = [FreqIndex(int(k), int(m)) for k, m in window]
    for k, m in idx:
        if not omega_contains(dual.pattern, (k, m)):
            raise PatternMismatch(f"window index ({k}, {m}) is not in Omega")
    return idx


def verify_biorthogonality(dual: DualSystem, window, cfg: QuadratureConfig = DEFAULT_CONFIG) -> BiorthogonalityReport:
    """Entries <M e_{k,m}, dual_{j,l}> = int int M e_{k,m} conj(dual_{j,l}) for (k,m), (j,l) in the window.

    Rows are system indices, columns dual indices.
    """
    idx = _as_window(dual, window)
    fs = [system_element(dual.weight, k, m) for k, m in idx]
    gs = [dual.element(k, m) for k, m in idx]
    val, err, ok = inner_products(fs, gs, dual.weight.singular, cfg)
    return BiorthogonalityReport(tuple(idx), np.asarray(val), np.asarray(err), np.asarray(ok))


def verify_recurrence(dual: DualSystem, x, y, nm: int = 4, P: Optional[PhaseFunction] = None) -> float:
    """Largest residual of

        e^{inx} e^{imy} (e^{ix} - P(y)) = (2 pi)^2 [conj(M) xi_{n+1,m} - P(y) conj(M) xi_{n,m}]

    over the sample points and (n, m) in [-nm, nm]^2. Passing a P different
    from the dual's phase gives a negative control. Indices with first
    component 0 use the formal (identically zero) numerator.
    """
    if not isinstance(dual.form, ColumnForm):
        raise PatternMismatch("the recurrence holds for column-form duals")
    P = dual.form.P if P is None else P
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    Py = P(y)
    Mc = np.conj(dual.weight(x, y))
    worst = 0.0
    for n in range(-nm, nm + 1):
        for m in range(-nm, nm + 1):
            lhs = np.exp(1j * (n * x + m * y)) * (np.exp(1j * x) - Py)
            hi = _NORM * dual._numerator(n + 1, m, x, y) / Mc
            lo = _NORM * dual._numerator(n, m, x, y) / Mc
            rhs = TWO_PI ** 2 * (Mc * hi - Py * Mc * lo)
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst
