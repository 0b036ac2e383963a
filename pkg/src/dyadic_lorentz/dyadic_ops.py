"""Haar functions, dyadic martingale differences and the maximal operator S.

``S(f) = max_j |sum_k a[k, j] D_k(f)|`` for a finitely supported coefficient
table ``a``. Martingale differences are computed from half-interval sums,
``D_k f = (avg_left - avg_right) / 2`` on the left half of each level-k
interval and the negative on the right half, which equals
``sum_I <f, h_I> h_I`` without ever forming ``|I|**-1/2``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .report import VerificationReport
from .stepfn import StepFunction, block_sums

__all__ = [
    "DyadicInterval",
    "CoeffMatrix",
    "PreconditionError",
    "haar",
    "martingale_diff",
    "expectation",
    "maximal_s",
    "zero_locality_check",
]


class PreconditionError(ValueError):
    """Input violates the hypothesis of a check (as opposed to a failed check)."""


@dataclass(frozen=True, order=True)
class DyadicInterval:
    """``[j * 2**-k, (j + 1) * 2**-k)``."""

    k: int
    j: int

    def __post_init__(self):
        if self.j < 0:
            raise ValueError("dyadic index must be nonnegative")

    @property
    def length(self) -> float:
        return 2.0 ** -self.k

    @property
    def left(self) -> float:
        return self.j * self.length

    @property
    def right(self) -> float:
        return (self.j + 1) * self.length

    @property
    def center(self) -> float:
        return (self.j + 0.5) * self.length

    def parent(self) -> "DyadicInterval":
        return DyadicInterval(self.k - 1, self.j // 2)

    def children(self) -> tuple["DyadicInterval", "DyadicInterval"]:
        return DyadicInterval(self.k + 1, 2 * self.j), DyadicInterval(self.k + 1, 2 * self.j + 1)

    def contains(self, other: "DyadicInterval") -> bool:
        return other.k >= self.k and other.j >> (other.k - self.k) == self.j

    def fits(self, m: int) -> bool:
        return self.k >= -m and self.j < 2 ** (m + self.k)

    def cells(self, level: int) -> slice:
        """Slice of cell indices covered at grid ``level`` (``level >= k``)."""
        if level < self.k:
            raise ValueError(f"interval of level {self.k} is not a union of level-{level} cells")
        n = 2 ** (level - self.k)
        return slice(self.j * n, (self.j + 1) * n)

    def mask(self, m: int, level: int) -> np.ndarray:
        out = np.zeros(2 ** (m + level), dtype=bool)
        out[self.cells(level)] = True
        return out

    def indicator(self, m: int, level: int) -> StepFunction:
        return StepFunction(m, level, self.mask(m, level).astype(np.float64))

    def to_json(self) -> dict:
        return {"k": self.k, "j": self.j}


@dataclass(frozen=True)
class CoeffMatrix:
    """Finitely supported coefficients ``a[k, j]``; ``k`` is the scale, ``j`` the row."""

    entries: Mapping[tuple[int, int], float] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (k, j), a in dict(self.entries).items():
            a = float(a)
            if not math.isfinite(a):
                raise ValueError("coefficients must be finite")
            if a != 0:
                clean[(int(k), int(j))] = a
        object.__setattr__(self, "entries", clean)

    def rows(self) -> dict[int, dict[int, float]]:
        out: dict[int, dict[int, float]] = {}
        for (k, j), a in sorted(self.entries.items(), key=lambda e: (e[0][1], e[0][0])):
            out.setdefault(j, {})[k] = a
        return out

    def scales(self) -> list[int]:
        return sorted({k for k, _ in self.entries})

    def to_json(self) -> dict:
        return {"entries": [{"k": k, "j": j, "a": a} for (k, j), a in sorted(self.entries.items())]}

    @classmethod
    def from_json(cls, obj) -> "CoeffMatrix":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls({(int(e["k"]), int(e["j"])): e["a"] for e in obj["entries"]})


def haar(I: DyadicInterval, m: int, level: int) -> StepFunction:
    """``|I|**-1/2`` on the left half of ``I`` and ``-|I|**-1/2`` on the right half."""
    if level < I.k + 1:
        raise ValueError(f"level {level} cannot resolve the halves of an interval of level {I.k}")
    if not I.fits(m):
        raise ValueError(f"{I} is not inside [0, 2**{m})")
    vals = np.zeros(2 ** (m + level))
    left, right = I.children()
    amp = 2.0 ** (I.k / 2)
    vals[left.cells(level)] = amp
    vals[right.cells(level)] = -amp
    return StepFunction(m, level, vals)


def _check_scale(f: StepFunction, k: int) -> None:
    if f.level < k + 1:
        raise ValueError(f"f has level {f.level}; D_{k} needs level >= {k + 1}")
    if k < -f.m:
        raise ValueError(f"scale {k} is coarser than the domain [0, 2**{f.m})")


def expectation(f: StepFunction, k: int) -> StepFunction:
    """Conditional expectation onto level-``k`` dyadic intervals."""
    if k > f.level or k < -f.m:
        raise ValueError(f"scale {k} outside [-{f.m}, {f.level}]")
    n = 2 ** (f.level - k)
    avg = block_sums(f.values, n) / n
    return StepFunction(f.m, f.level, np.repeat(avg, n))


def martingale_diff(f: StepFunction, k: int) -> StepFunction:
    """``D_k f = sum over level-k intervals I of <f, h_I> h_I``."""
    _check_scale(f, k)
    half = 2 ** (f.level - k - 1)
    s = block_sums(f.values, half).reshape(-1, 2)
    c = (s[:, 0] - s[:, 1]) / (2 * half)
    vals = np.repeat(np.stack([c, -c], axis=1).reshape(-1), half)
    return StepFunction(f.m, f.level, vals)


def maximal_s(f: StepFunction, a: CoeffMatrix) -> StepFunction:
    """Pointwise ``max_j |sum_k a[k, j] D_k f|``."""
    rows = a.rows()
    if not rows:
        return StepFunction.zeros(f.m, f.level)
    for k in a.scales():
        _check_scale(f, k)
    diffs = {k: martingale_diff(f, k).values for k in a.scales()}
    out = np.zeros(f.ncells)
    for j, row in rows.items():
        acc = np.zeros(f.ncells)
        for k, coef in row.items():
            acc = acc + coef * diffs[k]
        out = np.maximum(out, np.abs(acc))
    return StepFunction(f.m, f.level, out)


def zero_locality_check(f: StepFunction, a: CoeffMatrix, I0: DyadicInterval) -> VerificationReport:
    """Check that ``S f`` vanishes off ``I0`` for ``f`` mean-zero and supported in ``I0``.

    Raises :class:`PreconditionError` when ``f`` is not supported in ``I0`` or
    its integral exceeds ``1e-12 * ||f||_1``.
    """
    if not I0.fits(f.m) or I0.k > f.level:
        raise PreconditionError(f"{I0} is not a union of cells of f")
    inside = I0.mask(f.m, f.level)
    if np.any(f.values[~inside] != 0):
        raise PreconditionError("f is not supported in I0")
    l1 = float(np.sum(np.abs(f.values))) * f.cell_width
    mean = f.integral()
    if abs(mean) > 1e-12 * l1:
        raise PreconditionError(f"f has nonzero integral {mean}")

    Sf = maximal_s(f, a)
    outside = Sf.values[~inside]
    out_max = float(np.max(outside)) if outside.size else 0.0

    nonzero = [k for k in range(-f.m, f.level) if np.any(martingale_diff(f, k).values != 0)]
    kmin = nonzero[0] if nonzero else None
    coarse_ok = kmin is None or kmin >= I0.k
    passed = out_max == 0.0 and coarse_ok
    return VerificationReport(
        "zerolocal",
        params={"I0": I0.to_json(), "m": f.m, "level": f.level, "scales": a.scales()},
        observed={"max_outside": out_max, "smallest_active_scale": kmin, "integral": mean},
        bound={"max_outside": 0.0, "smallest_active_scale_min": I0.k},
        passed=passed,
    )
