"""Generalized Fourier coefficients against a dual system, square partial sums and reconstruction errors."""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping, Optional, Sequence, Union

import numpy as np

from .core import TWO_PI, FreqIndex, PatternMismatch, TorusGrid, omega_contains, window_indices
from .dual import DualSystem
from .quadrature import DEFAULT_CONFIG, QuadratureConfig, excluded_integral, inner_products
from .weights import read_grid_csv


@dataclass(frozen=True, eq=False)
class CoefficientTable:
    """b_{k,m} for the indices of a finite window; flagged entries did not extrapolate cleanly."""

    indices: tuple
    values: np.ndarray
    err: np.ndarray
    flagged: np.ndarray
    radius: int = 0

    def __post_init__(self):
        for arr in (self.values, self.err, self.flagged):
            arr.setflags(write=False)

    def __len__(self) -> int:
        return len(self.indices)

    def __getitem__(self, idx) -> complex:
        return complex(self.values[self.indices.index(FreqIndex(*idx))])

    def as_dict(self) -> dict:
        return {(k, m): complex(v) for (k, m), v in zip(self.indices, self.values)}

    def to_csv(self, path: Union[str, Path]) -> None:
        with open(path, "w", newline="") as fh:
            out = csv.writer(fh)
            out.writerow(["k", "m", "re", "im", "flag"])
            for (k, m), v, bad in zip(self.indices, self.values, self.flagged):
                out.writerow([k, m, repr(float(v.real)), repr(float(v.imag)), "inconclusive" if bad else "ok"])

    def to_dict(self) -> dict:
        return {
            "radius": self.radius,
            "entries": [
                {"k": k, "m": m, "re": float(v.real), "im": float(v.imag), "flag": "inconclusive" if bad else "ok"}
                for (k, m), v, bad in zip(self.indices, self.values, self.flagged)
            ],
        }


@dataclass(frozen=True, eq=False)
class SpanFunction:
    """g = M * T with T = sum c_{k,m} e^{ikx} e^{imy} a trigonometric polynomial."""

    weight: object
    coeffs: Mapping

    def __post_init__(self):
        object.__setattr__(self, "coeffs", {FreqIndex(int(k), int(m)): complex(c) for (k, m), c in dict(self.coeffs).items()})

    @property
    def radius(self) -> int:
        return max((max(abs(k), abs(m)) for k, m in self.coeffs), default=0)

    def supported_in(self, pattern) -> bool:
        return all(omega_contains(pattern, idx) for idx in self.coeffs)

    def trig(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        out = np.zeros(np.broadcast(x, y).shape, dtype=complex)
        for (k, m), c in self.coeffs.items():
            out = out + c * (np.exp(1j * k * x) * np.exp(1j * m * y))
        return out

    def __call__(self, x, y):
        return self.weight(x, y) * self.trig(x, y)


@dataclass(frozen=True, eq=False)
class TabulatedFunction:
    """Complex grid samples g(2 pi i / n_x, 2 pi j / n_y), bilinearly interpolated."""

    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=complex)
        if v.ndim != 2 or not np.all(np.isfinite(v)):
            raise ValueError("tabulated function needs a finite 2D table")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_csv(cls, path: Union[str, Path]) -> "TabulatedFunction":
        return cls(read_grid_csv(path))

    def __call__(self, x, y):
        n_x, n_y = self.values.shape
        fx = np.mod(np.asarray(x, dtype=float), TWO_PI) * (n_x / TWO_PI)
        fy = np.mod(np.asarray(y, dtype=float), TWO_PI) * (n_y / TWO_PI)
        ix, iy = np.floor(fx).astype(int), np.floor(fy).astype(int)
        tx, ty = fx - ix, fy - iy
        ix, iy = ix % n_x, iy % n_y
        jx, jy = (ix + 1) % n_x, (iy + 1) % n_y
        v = self.values
        return ((1 - tx) * (1 - ty) * v[ix, iy] + tx * (1 - ty) * v[jx, iy]
                + (1 - tx) * ty * v[ix, jy] + tx * ty * v[jx, jy])


def _window(dual: DualSystem, window) -> tuple[list[FreqIndex], int]:
    if isinstance(window, (int, np.integer)):
        return window_indices(dual.pattern, int(window)), int(window)
    idx = [FreqIndex(int(k), int(m)) for k, m in window]
    for k, m in idx:
        if not omega_contains(dual.pattern, (k, m)):
            raise PatternMismatch(f"window index ({k}, {m}) is not in Omega")
    return idx, max((max(abs(k), abs(m)) for k, m in idx), default=0)


def gfs_coefficients_many(gs: Sequence[Callable], dual: DualSystem, window,
                          cfg: QuadratureConfig = DEFAULT_CONFIG) -> list[CoefficientTable]:
    """Coefficient tables for several functions sharing one quadrature pass."""
    idx, radius = _window(dual, window)
    if not gs:
        return []
    if not idx:
        empty = np.zeros(0, dtype=complex)
        return [CoefficientTable((), empty.copy(), np.zeros(0), np.zeros(0, dtype=bool), radius) for _ in gs]
    duals = [dual.element(k, m) for k, m in idx]
    val, err, ok = inner_products(list(gs), duals, dual.weight.singular, cfg)
    val, err, ok = np.atleast_2d(val), np.atleast_2d(err), np.atleast_2d(ok)
    return [
        CoefficientTable(tuple(idx), np.array(val[a]), np.array(err[a], dtype=float), ~np.array(ok[a], dtype=bool), radius)
        for a in range(len(gs))
    ]


def gfs_coefficients(g: Callable, dual: DualSystem, window, cfg: QuadratureConfig = DEFAULT_CONFIG) -> CoefficientTable:
    """b_{k,m}(g) = int int g conj(dual_{k,m}) over the window."""
    return gfs_coefficients_many([g], dual, window, cfg)[0]


def partial_sum_fn(coeffs: CoefficientTable, N: int) -> Callable:
    """(x, y) -> sum of b_{k,m} e^{ikx} e^{imy} over max(|k|, |m|) <= N."""
    if N > coeffs.radius and len(coeffs):
        raise ValueError(f"truncation radius {N} exceeds the table radius {coeffs.radius}")
    terms = [(k, m, v) for (k, m), v in zip(coeffs.indices, coeffs.values) if max(abs(k), abs(m)) <= N]

    def S(x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        out = np.zeros(np.broadcast(x, y).shape, dtype=complex)
        for k, m, v in terms:
            out = out + v * (np.exp(1j * k * x) * np.exp(1j * m * y))
        return out

    return S


def partial_sum(coeffs: CoefficientTable, N: int, grid: Union[TorusGrid, int]) -> np.ndarray:
    """Square partial sum on the nodes of a uniform grid, shape (n_x, n_y)."""
    if not isinstance(grid, TorusGrid):
        grid = TorusGrid(int(grid), int(grid))
    return partial_sum_fn(coeffs, N)(grid.x[:, None], grid.y[None, :])


@dataclass(frozen=True)
class ReconstructionResult:
    N: tuple
    errors: tuple
    flagged: tuple
    experimental: bool
    summation: str = "square"
    table: Optional[CoefficientTable] = field(default=None, repr=False, compare=False)

    def to_dict(self) -> dict:
        return {
            "N": list(self.N),
            "errors": list(self.errors),
            "flagged": list(self.flagged),
            "experimental": self.experimental,
            "summation": self.summation,
        }


def reconstruction_error(g: Callable, dual: DualSystem, p: float, Ns: Sequence[int],
                         cfg: QuadratureConfig = DEFAULT_CONFIG,
                         table: Optional[CoefficientTable] = None) -> ReconstructionResult:
    """e_N = || M S_N - g ||_p for each N, with exclusion-window quadrature.

    Only g = M T with T supported in Omega comes with a recovery guarantee;
    anything else is marked experimental.
    """
    Ns = tuple(int(n) for n in Ns)
    if table is None:
        table = gfs_coefficients(g, dual, max(Ns, default=0), cfg)
    experimental = not (isinstance(g, SpanFunction) and g.supported_in(dual.pattern))
    w = dual.weight
    errs, bad = [], []
    for N in Ns:
        S = partial_sum_fn(table, N)
        f = lambda x, y, S=S: np.abs(w(x, y) * S(x, y) - g(x, y)) ** p
        val, err, ok = excluded_integral(f, w.singular, cfg)
        errs.append(float(max(np.real(val), 0.0)) ** (1.0 / p))
        bad.append(not ok)
    return ReconstructionResult(Ns, tuple(errs), tuple(bad), experimental, table=table)
