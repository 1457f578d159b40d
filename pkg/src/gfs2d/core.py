"""Shared domain types: exponents, frequency indices, exclusion patterns, grids."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple, Union

import numpy as np

TWO_PI = 2.0 * math.pi


class GFSError(ValueError):
    """Base class for all library errors."""


class UnsupportedExponent(GFSError):
    pass


class PatternMismatch(GFSError):
    pass


class NoLineSingularity(GFSError):
    pass


class SingularNode(GFSError):
    pass


class UnsupportedSingularity(GFSError):
    pass


class InvalidPhase(GFSError):
    pass


class WitnessMismatch(GFSError):
    pass


class NotMinimal(GFSError):
    pass


def conjugate_exponent(p: float) -> float:
    """Return p' with 1/p + 1/p' = 1.

    Only 1 < p < inf is supported; at p = 1 the dual conditions become
    essential-supremum statements that the quadrature layer cannot evaluate.
    """
    p = float(p)
    if not math.isfinite(p) or p <= 1.0:
        raise UnsupportedExponent(f"exponent must satisfy 1 < p < inf, got {p!r}")
    return p / (p - 1.0)


@dataclass(frozen=True)
class LebesgueExponent:
    p: float
    p_conj: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "p", float(self.p))
        object.__setattr__(self, "p_conj", conjugate_exponent(self.p))

    def to_dict(self) -> dict:
        return {"p": self.p, "p_conj": self.p_conj}


class FreqIndex(NamedTuple):
    k: int
    m: int


@dataclass(frozen=True)
class Point:
    """Omega^c = {(nu, mu)}."""

    nu: int = 0
    mu: int = 0

    def excludes(self, k: int, m: int) -> bool:
        return k == self.nu and m == self.mu

    @property
    def name(self) -> str:
        return "point"

    def to_dict(self) -> dict:
        return {"variant": "point", "nu": self.nu, "mu": self.mu}


@dataclass(frozen=True)
class ColumnZ:
    """Omega^c = {0} x Z."""

    def excludes(self, k: int, m: int) -> bool:
        return k == 0

    @property
    def name(self) -> str:
        return "column"

    def to_dict(self) -> dict:
        return {"variant": "column"}


@dataclass(frozen=True)
class ColumnZ0:
    """Omega^c = {0} x (Z minus 0)."""

    def excludes(self, k: int, m: int) -> bool:
        return k == 0 and m != 0

    @property
    def name(self) -> str:
        return "column0"

    def to_dict(self) -> dict:
        return {"variant": "column0"}


ExclusionPattern = Union[Point, ColumnZ, ColumnZ0]


def omega_contains(pattern: ExclusionPattern, idx) -> bool:
    k, m = idx
    return not pattern.excludes(int(k), int(m))


def modulate_pattern(pattern: ExclusionPattern) -> tuple[Point, tuple[int, int]]:
    """Carry Point(nu, mu) to Point(0, 0).

    Multiplying the system by exp(-i nu x) exp(-i mu y) maps one onto the other;
    the returned phase is (nu, mu).
    """
    if not isinstance(pattern, Point):
        raise PatternMismatch(f"modulation needs a Point pattern, got {pattern!r}")
    return Point(0, 0), (pattern.nu, pattern.mu)


def window_indices(pattern: ExclusionPattern, radius: int) -> list[FreqIndex]:
    """Indices of Omega inside the square max(|k|,|m|) <= radius.

    Ordered by max(|k|,|m|), then lexicographically.
    """
    out = []
    for r in range(radius + 1):
        ring = [
            (k, m)
            for k in range(-r, r + 1)
            for m in range(-r, r + 1)
            if max(abs(k), abs(m)) == r
        ]
        out.extend(FreqIndex(k, m) for k, m in sorted(ring) if not pattern.excludes(k, m))
    return out


def wrap_angle(t):
    """Reduce angles to (-pi, pi]."""
    r = np.mod(np.asarray(t, dtype=float) + math.pi, TWO_PI) - math.pi
    return np.where(r == -math.pi, math.pi, r)


@dataclass(frozen=True)
class TorusGrid:
    n_x: int
    n_y: int

    def __post_init__(self):
        if self.n_x < 1 or self.n_y < 1:
            raise ValueError("grid sizes must be positive")

    @property
    def x(self) -> np.ndarray:
        return TWO_PI * np.arange(self.n_x) / self.n_x

    @property
    def y(self) -> np.ndarray:
        return TWO_PI * np.arange(self.n_y) / self.n_y

    @property
    def nodes(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.x, self.y, indexing="ij")

    @property
    def cell_area(self) -> float:
        return TWO_PI * TWO_PI / (self.n_x * self.n_y)

    def __iter__(self) -> Iterator[int]:
        yield self.n_x
        yield self.n_y


@dataclass(frozen=True)
class Singularity:
    """Where an integrand may blow up.

    kind is "none", "point" or "line"; dim is 1 (circle) or 2 (torus).
    A line is always the vertical line x = x0 on the torus.
    """

    kind: str = "none"
    dim: int = 2
    x0: float = 0.0
    y0: float = 0.0

    def __post_init__(self):
        if self.kind not in ("none", "point", "line") or self.dim not in (1, 2):
            raise UnsupportedSingularity(f"unsupported singular set {self.kind!r} in dimension {self.dim}")
        if self.kind == "line" and self.dim != 2:
            raise UnsupportedSingularity("a line singularity needs the two-dimensional torus")

    @classmethod
    def none(cls, dim: int = 2) -> "Singularity":
        return cls("none", dim)

    @classmethod
    def point1d(cls, x0: float) -> "Singularity":
        return cls("point", 1, float(x0))

    @classmethod
    def point2d(cls, x0: float, y0: float) -> "Singularity":
        return cls("point", 2, float(x0), float(y0))

    @classmethod
    def line(cls, x0: float) -> "Singularity":
        return cls("line", 2, float(x0))

    @property
    def codim(self) -> int:
        """Codimension of the singular set (0 when there is none)."""
        if self.kind == "none":
            return 0
        return 2 if (self.kind == "point" and self.dim == 2) else 1

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "dim": self.dim}
        if self.kind != "none":
            d["x0"] = self.x0
        if self.kind == "point" and self.dim == 2:
            d["y0"] = self.y0
        return d
