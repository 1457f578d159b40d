"""Weight functions M(x, y) and the phase functions P(y) used by the column cases."""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple, Optional, Union

import numpy as np

from .core import TWO_PI, NoLineSingularity, Singularity, wrap_angle

_SAME_ANGLE = 1e-14


def _same_angle(a: float, b: float) -> bool:
    return abs(float(wrap_angle(a - b))) <= _SAME_ANGLE


def _half_sine_power(t, alpha: float):
    return np.abs(np.sin(0.5 * t)) ** alpha


class SliceInfo(NamedTuple):
    """Local behaviour of M restricted to one coordinate slice.

    center: where the slice may vanish (None if nowhere);
    order: vanishing order of M at center (0 if M stays positive, None if unknown);
    vanishes: M is identically zero on the slice.
    """

    center: Optional[float]
    order: Optional[float]
    vanishes: bool = False


@dataclass(frozen=True)
class ConstantWeight:
    c: float = 1.0
    kind = "const"

    def __call__(self, x, y):
        return np.full(np.broadcast(np.asarray(x), np.asarray(y)).shape, float(self.c))

    @property
    def singular(self) -> Singularity:
        return Singularity.none(2)

    @property
    def order(self) -> Optional[float]:
        return 0.0

    def slice_info(self, axis: str, value: float) -> SliceInfo:
        return SliceInfo(None, 0.0, self.c == 0)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "c": self.c}


@dataclass(frozen=True)
class ExampleSum:
    """|sin((x - x0)/2)|^alpha + |sin((y - y0)/2)|^alpha, vanishing only at (x0, y0)."""

    x0: float
    y0: float
    alpha: float
    kind = "examplesum"

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")

    def __call__(self, x, y):
        return _half_sine_power(np.asarray(x) - self.x0, self.alpha) + _half_sine_power(
            np.asarray(y) - self.y0, self.alpha
        )

    @property
    def singular(self) -> Singularity:
        return Singularity.point2d(self.x0, self.y0)

    @property
    def order(self) -> float:
        return self.alpha

    def slice_info(self, axis: str, value: float) -> SliceInfo:
        # axis names the integration variable; value fixes the other one
        if axis == "x":
            return SliceInfo(self.x0, self.alpha if _same_angle(value, self.y0) else 0.0)
        return SliceInfo(self.y0, self.alpha if _same_angle(value, self.x0) else 0.0)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "x0": self.x0, "y0": self.y0, "alpha": self.alpha}


@dataclass(frozen=True)
class ExampleX:
    """|sin((x - x0)/2)|^alpha, vanishing on the line x = x0."""

    x0: float
    alpha: float
    kind = "examplex"

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")

    def __call__(self, x, y):
        x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        return _half_sine_power(x - self.x0, self.alpha)

    @property
    def singular(self) -> Singularity:
        return Singularity.line(self.x0)

    @property
    def order(self) -> float:
        return self.alpha

    def slice_info(self, axis: str, value: float) -> SliceInfo:
        if axis == "x":
            return SliceInfo(self.x0, self.alpha)
        return SliceInfo(None, 0.0, vanishes=_same_angle(value, self.x0))

    def to_dict(self) -> dict:
        return {"kind": self.kind, "x0": self.x0, "alpha": self.alpha}


@dataclass(frozen=True, eq=False)
class TabulatedWeight:
    """Grid values of |M| on the uniform torus grid, bilinearly interpolated.

    values[i, j] is M(2 pi i / n_x, 2 pi j / n_y). Complex input is reduced to
    its modulus. No singular-set metadata is carried.
    """

    values: np.ndarray
    kind = "tabulated"

    def __post_init__(self):
        v = np.abs(np.asarray(self.values))
        if v.ndim != 2 or min(v.shape) < 1:
            raise ValueError("tabulated weight needs a 2D table")
        if not np.all(np.isfinite(v)):
            raise ValueError("tabulated weight has non-finite entries")
        v = v.astype(float)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def __call__(self, x, y):
        n_x, n_y = self.values.shape
        fx = np.mod(np.asarray(x, dtype=float), TWO_PI) * (n_x / TWO_PI)
        fy = np.mod(np.asarray(y, dtype=float), TWO_PI) * (n_y / TWO_PI)
        ix = np.floor(fx).astype(int)
        iy = np.floor(fy).astype(int)
        tx = fx - ix
        ty = fy - iy
        ix %= n_x
        iy %= n_y
        jx = (ix + 1) % n_x
        jy = (iy + 1) % n_y
        v = self.values
        return (
            (1 - tx) * (1 - ty) * v[ix, iy]
            + tx * (1 - ty) * v[jx, iy]
            + (1 - tx) * ty * v[ix, jy]
            + tx * ty * v[jx, jy]
        )

    @property
    def singular(self) -> Singularity:
        return Singularity.none(2)

    @property
    def order(self) -> Optional[float]:
        return None

    def slice_info(self, axis: str, value: float) -> SliceInfo:
        return SliceInfo(None, None)

    def argmin(self) -> tuple[float, float]:
        """Grid location of the smallest table value (first in row-major order)."""
        n_x, n_y = self.values.shape
        i, j = np.unravel_index(int(np.argmin(self.values)), self.values.shape)
        return TWO_PI * i / n_x, TWO_PI * j / n_y

    def to_dict(self) -> dict:
        return {"kind": self.kind, "n_x": self.shape[0], "n_y": self.shape[1]}


Weight = Union[ConstantWeight, ExampleSum, ExampleX, TabulatedWeight]


def eval_weight(w: Weight, x, y):
    return w(x, y)


def read_grid_csv(path: Union[str, Path]) -> np.ndarray:
    """Read an ``n_x,n_y`` record (optionally after that literal header) and n_x * n_y
    row-major values, any number per line. Entries may be complex, e.g. ``1+2j``."""
    rows = []
    with open(path, newline="") as fh:
        for rec in csv.reader(fh):
            cells = [c.strip() for c in rec if c.strip()]
            if cells:
                rows.append(cells)
    if rows and rows[0][:2] == ["n_x", "n_y"]:
        rows = rows[1:]
    if not rows or len(rows[0]) < 2:
        raise ValueError(f"{path}: missing 'n_x,n_y' record")
    n_x, n_y = int(rows[0][0]), int(rows[0][1])
    flat = [c for r in rows[1:] for c in r]
    if len(flat) != n_x * n_y:
        raise ValueError(f"{path}: expected {n_x * n_y} values, found {len(flat)}")
    try:
        vals = np.array([float(c) for c in flat])
    except ValueError:
        vals = np.array([complex(c.replace(" ", "")) for c in flat])
    return vals.reshape(n_x, n_y)


def load_weight_csv(path: Union[str, Path]) -> TabulatedWeight:
    """Tabulated weight from CSV; complex entries are reduced to modulus."""
    vals = read_grid_csv(path)
    if not np.iscomplexobj(vals) and np.any(vals < 0):
        raise ValueError(f"{path}: weight values must be nonnegative")
    return TabulatedWeight(np.abs(vals))


def save_weight_csv(w: TabulatedWeight, path: Union[str, Path]) -> None:
    n_x, n_y = w.shape
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["n_x", "n_y"])
        out.writerow([n_x, n_y])
        for row in w.values:
            out.writerow([repr(float(v)) for v in row])


# --- phase functions -------------------------------------------------------


@dataclass(frozen=True)
class ConstantPhase:
    """P(y) = exp(i x0)."""

    x0: float
    kind = "const"

    def __call__(self, y):
        return np.full(np.shape(y), np.exp(1j * self.x0))

    def power(self, k: int, y):
        return np.full(np.shape(y), np.exp(1j * k * self.x0))

    def to_dict(self) -> dict:
        return {"kind": self.kind, "x0": self.x0}


@dataclass(frozen=True)
class FirstHarmonic:
    """P(y) = exp(i y)."""

    kind = "harmonic"

    def __call__(self, y):
        return np.exp(1j * np.asarray(y, dtype=float))

    def power(self, k: int, y):
        return np.exp(1j * k * np.asarray(y, dtype=float))

    def to_dict(self) -> dict:
        return {"kind": self.kind}


@dataclass(frozen=True, eq=False)
class TabulatedPhase:
    """Complex samples of P on the uniform grid 2 pi j / n.

    Between nodes the modulus is interpolated linearly and the argument along
    the shorter arc, so unimodular tables stay unimodular.
    """

    values: np.ndarray
    kind = "tabulated"

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex).ravel()
        if v.size < 1 or not np.all(np.isfinite(v)):
            raise ValueError("tabulated phase needs finite samples")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        nxt = np.roll(v, -1)
        safe = np.where(v == 0, 1, v)
        step = np.where((v == 0) | (nxt == 0), 0.0, np.angle(nxt / safe))
        object.__setattr__(self, "_arg", np.angle(safe))
        object.__setattr__(self, "_step", step)

    def __call__(self, y):
        v = self.values
        n = v.size
        f = np.mod(np.asarray(y, dtype=float), TWO_PI) * (n / TWO_PI)
        i = np.floor(f).astype(int)
        t = f - i
        i %= n
        j = (i + 1) % n
        mod = (1 - t) * np.abs(v[i]) + t * np.abs(v[j])
        return mod * np.exp(1j * (self._arg[i] + t * self._step[i]))

    def power(self, k: int, y):
        return self(y) ** k

    def to_dict(self) -> dict:
        return {"kind": self.kind, "n": int(self.values.size)}


PhaseFunction = Union[ConstantPhase, FirstHarmonic, TabulatedPhase]


class UpsilonCheck(NamedTuple):
    in_upsilon: bool
    in_upsilon0: bool
    ess_lo: float
    ess_hi: float
    mean: complex

    @property
    def unimodular(self) -> bool:
        return self.in_upsilon and abs(self.ess_lo - 1) <= 1e-12 and abs(self.ess_hi - 1) <= 1e-12


def check_upsilon(P: PhaseFunction, tol: float = 1e-10, n: int = 4096) -> UpsilonCheck:
    """Estimate ess inf / ess sup of |P| and its mean (1/2pi) int P on a dense grid."""
    if isinstance(P, TabulatedPhase):
        samples = P.values
        mod = np.abs(samples)
        # the interpolant's modulus is piecewise linear, so node extremes are exact
        mean = complex(np.mean(P(TWO_PI * np.arange(max(n, 4 * samples.size)) / max(n, 4 * samples.size))))
    else:
        y = TWO_PI * np.arange(n) / n
        samples = P(y)
        mod = np.abs(samples)
        mean = complex(np.mean(samples))
    lo, hi = float(mod.min()), float(mod.max())
    in_u = bool(lo > 0 and np.isfinite(hi))
    return UpsilonCheck(in_u, bool(in_u and abs(mean) <= tol), lo, hi, mean)


def suggest_phase(w: Weight, n: int = 4096) -> PhaseFunction:
    """P(y) = exp(i argmin_x M(x, y)) for weights vanishing along a vertical line."""
    if w.singular.kind != "line":
        raise NoLineSingularity(f"{w.kind} weight has no line singularity")
    if isinstance(w, ExampleX):
        return ConstantPhase(w.x0)
    grid = TWO_PI * np.arange(n) / n
    vals = w(grid[:, None], grid[None, :])
    # np.argmin returns the first minimum, i.e. the smallest x
    return TabulatedPhase(np.exp(1j * grid[np.argmin(vals, axis=0)]))


def parse_phase(text: str) -> PhaseFunction:
    """Parse 'harmonic' or 'const:<x0>'."""
    text = text.strip().lower()
    if text in ("harmonic", "first-harmonic", "e^{iy}"):
        return FirstHarmonic()
    if text.startswith("const:"):
        return ConstantPhase(float(text.split(":", 1)[1]))
    raise ValueError(f"unknown phase {text!r} (use 'harmonic' or 'const:<x0>')")


def weight_from_name(name: str, x0: float = 0.0, y0: float = 0.0, alpha: float = 1.0,
                     csv_path: Optional[str] = None) -> Weight:
    name = name.lower()
    if name in ("const1", "const", "one"):
        return ConstantWeight(1.0)
    if name == "examplex":
        return ExampleX(x0, alpha)
    if name == "examplesum":
        return ExampleSum(x0, y0, alpha)
    if name == "tabulated":
        if csv_path is None:
            raise ValueError("tabulated weight needs a CSV path")
        return load_weight_csv(csv_path)
    raise ValueError(f"unknown weight family {name!r}")
