"""Dyadic step functions on [0, 2**m) and their rearrangements.

A :class:`StepFunction` stores one value per cell of width ``2**-level``.
Cell measures are powers of two, so distribution functions, rearrangements
and block averages of functions with dyadic-rational values are computed
without rounding error.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "StepFunction",
    "DecreasingProfile",
    "LorentzIndex",
    "combine",
    "distribution",
    "rearrange",
    "lp_norm",
    "indicator",
    "block_sums",
]


@dataclass(frozen=True, eq=False)
class StepFunction:
    """Piecewise constant function on ``[0, 2**m)`` with cells of width ``2**-level``.

    The function vanishes outside ``[0, 2**m)``.
    """

    m: int
    level: int
    values: np.ndarray

    def __post_init__(self):
        if self.m < 0 or self.level < 0:
            raise ValueError("m and level must be nonnegative")
        vals = np.array(self.values, dtype=np.float64).reshape(-1)
        if vals.size != 2 ** (self.m + self.level):
            raise ValueError(
                f"expected {2 ** (self.m + self.level)} values for m={self.m}, "
                f"level={self.level}, got {vals.size}"
            )
        if not np.all(np.isfinite(vals)):
            raise ValueError("values must be finite")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @classmethod
    def zeros(cls, m: int, level: int) -> "StepFunction":
        return cls(m, level, np.zeros(2 ** (m + level)))

    @property
    def ncells(self) -> int:
        return self.values.size

    @property
    def cell_width(self) -> float:
        return 2.0 ** -self.level

    @property
    def measure(self) -> float:
        """Measure of the domain, ``2**m``."""
        return 2.0 ** self.m

    def midpoints(self) -> np.ndarray:
        return (np.arange(self.ncells) + 0.5) * self.cell_width

    def refine(self, level: int | None = None, m: int | None = None) -> "StepFunction":
        """Same function on a finer grid and/or a larger domain (zero padded)."""
        level = self.level if level is None else level
        m = self.m if m is None else m
        if level < self.level or m < self.m:
            raise ValueError("refine can only increase level and m")
        vals = np.repeat(self.values, 2 ** (level - self.level))
        if m > self.m:
            vals = np.concatenate([vals, np.zeros(2 ** (m + level) - vals.size)])
        return StepFunction(m, level, vals)

    def equals(self, other: "StepFunction") -> bool:
        """Exact equality as functions (after refinement to a common grid)."""
        a, b = _common(self, other)
        return bool(np.array_equal(a.values, b.values))

    def integral(self) -> float:
        return float(block_sums(self.values, self.ncells)[0]) * self.cell_width

    def abs(self) -> "StepFunction":
        return StepFunction(self.m, self.level, np.abs(self.values))

    def restrict(self, mask: np.ndarray) -> "StepFunction":
        return StepFunction(self.m, self.level, np.where(mask, self.values, 0.0))

    def support_mask(self) -> np.ndarray:
        return self.values != 0

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        idx = np.floor(x / self.cell_width).astype(np.int64)
        inside = (x >= 0) & (idx < self.ncells)
        out = np.zeros(x.shape)
        out[inside] = self.values[idx[inside]]
        return out

    def __add__(self, other: "StepFunction") -> "StepFunction":
        return combine([1.0, 1.0], [self, other])

    def __sub__(self, other: "StepFunction") -> "StepFunction":
        return combine([1.0, -1.0], [self, other])

    def __neg__(self) -> "StepFunction":
        return StepFunction(self.m, self.level, -self.values)

    def __mul__(self, c: float) -> "StepFunction":
        return StepFunction(self.m, self.level, c * self.values)

    __rmul__ = __mul__

    def __repr__(self):
        return f"StepFunction(m={self.m}, level={self.level}, ncells={self.ncells})"

    def to_json(self) -> dict:
        return {"m": self.m, "level": self.level, "values": self.values.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> "StepFunction":
        try:
            return cls(int(obj["m"]), int(obj["level"]), obj["values"])
        except KeyError as exc:
            raise ValueError(f"step function JSON is missing {exc}") from None


def indicator(a: float, b: float, m: int, level: int) -> StepFunction:
    """Indicator of ``[a, b)``; both endpoints must lie on the grid."""
    w = 2.0 ** -level
    i, j = a / w, b / w
    if i != int(i) or j != int(j) or not 0 <= i <= j <= 2 ** (m + level):
        raise ValueError(f"[{a}, {b}) is not resolvable at level {level} in [0, 2**{m})")
    vals = np.zeros(2 ** (m + level))
    vals[int(i):int(j)] = 1.0
    return StepFunction(m, level, vals)


def block_sums(values: np.ndarray, block: int) -> np.ndarray:
    """Sums over consecutive blocks of ``block`` cells (a power of two).

    Uses pairwise halving, so a block of identical values, or a block made of
    two halves that cancel, sums without rounding error.
    """
    arr = np.asarray(values, dtype=np.float64).reshape(-1, block)
    while arr.shape[1] > 1:
        h = arr.shape[1] // 2
        arr = arr[:, :h] + arr[:, h:]
    return arr[:, 0]


def _common(*fs: StepFunction) -> list[StepFunction]:
    level = max(f.level for f in fs)
    m = max(f.m for f in fs)
    return [f.refine(level, m) for f in fs]


def combine(coeffs: Sequence[float], fs: Sequence[StepFunction]) -> StepFunction:
    """``sum(c * f)`` on the finest common grid."""
    if len(fs) == 0:
        raise ValueError("combine needs at least one function")
    if len(coeffs) != len(fs):
        raise ValueError(f"{len(coeffs)} coefficients for {len(fs)} functions")
    fs = _common(*fs)
    out = np.zeros(fs[0].ncells)
    for c, f in zip(coeffs, fs):
        out = out + c * f.values
    return StepFunction(fs[0].m, fs[0].level, out)


def distribution(f: StepFunction, s: float) -> float:
    """Measure of ``{|f| > s}``."""
    if s < 0:
        raise ValueError("s must be nonnegative")
    return int(np.count_nonzero(np.abs(f.values) > s)) * f.cell_width


@dataclass(frozen=True, eq=False)
class LorentzIndex:
    p: float
    q: float

    def __post_init__(self):
        if not (self.p > 0 and self.q > 0):
            raise ValueError(f"Lorentz indices must be positive, got p={self.p}, q={self.q}")

    def __iter__(self):
        return iter((self.p, self.q))


@dataclass(frozen=True, eq=False)
class DecreasingProfile:
    """Right-continuous decreasing step function on ``[0, inf)``.

    Equal to ``values[i]`` on ``[breakpoints[i], breakpoints[i+1])`` and to zero
    from ``breakpoints[-1]`` on.
    """

    breakpoints: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.breakpoints, dtype=np.float64)
        v = np.asarray(self.values, dtype=np.float64)
        if t.size != v.size + 1 or t[0] != 0:
            raise ValueError("breakpoints must start at 0 and have one more entry than values")
        if np.any(np.diff(t) <= 0) or np.any(np.diff(v) >= 0) or np.any(v <= 0):
            raise ValueError("profile must be strictly decreasing, positive, with increasing breakpoints")
        t.flags.writeable = False
        v.flags.writeable = False
        object.__setattr__(self, "breakpoints", t)
        object.__setattr__(self, "values", v)

    @property
    def span(self) -> float:
        return float(self.breakpoints[-1])

    def __len__(self):
        return self.values.size

    def __call__(self, t):
        t = np.asarray(t, dtype=np.float64)
        i = np.searchsorted(self.breakpoints, t, side="right") - 1
        vals = np.append(self.values, 0.0)
        out = vals[np.clip(i, 0, self.values.size)]
        return out if out.ndim else float(out)

    def distribution(self, s: float) -> float:
        """Measure of ``{t : f*(t) > s}``."""
        return float(self.breakpoints[np.count_nonzero(self.values > s)])

    def lp_norm(self, p: float) -> float:
        if self.values.size == 0:
            return 0.0
        if math.isinf(p):
            return float(self.values[0])
        return float(np.sum(self.values ** p * np.diff(self.breakpoints)) ** (1.0 / p))


def rearrange(f: StepFunction) -> DecreasingProfile:
    """Decreasing rearrangement of ``|f|``; ties merge into one step."""
    a = np.abs(f.values)
    a = a[a > 0]
    vals, counts = np.unique(a, return_counts=True)
    vals, counts = vals[::-1], counts[::-1]
    t = np.concatenate([[0], np.cumsum(counts)]) * f.cell_width
    return DecreasingProfile(t, vals)


def lp_norm(f: StepFunction, p: float) -> float:
    if not p > 0:
        raise ValueError("p must be positive")
    a = np.abs(f.values)
    if math.isinf(p):
        return float(a.max())
    return float((np.sum(a ** p) * f.cell_width) ** (1.0 / p))
