"""Lorentz quasi-norms of step functions and the quasi-norm calculus around them."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .report import VerificationReport
from .stepfn import DecreasingProfile, LorentzIndex, StepFunction, combine, rearrange

__all__ = [
    "QuasiNormProfile",
    "lorentz_norm",
    "profile_lorentz_norm",
    "nesting_ratio",
    "hunt_split",
    "check_hunt_split",
    "alpha_for",
    "estimate_quasi_constant",
    "series_quasi_check",
]


def _index(idx, q=None) -> LorentzIndex:
    if isinstance(idx, LorentzIndex):
        return idx
    if q is not None:
        return LorentzIndex(idx, q)
    return LorentzIndex(*idx)


def _power_increments(t: np.ndarray, a: float) -> np.ndarray:
    """``t[i+1]**a - t[i]**a`` without cancellation for close breakpoints."""
    t0, t1 = t[:-1], t[1:]
    out = np.empty(t0.shape)
    first = t0 == 0
    out[first] = t1[first] ** a
    r = ~first
    out[r] = t0[r] ** a * np.expm1(a * np.log1p((t1[r] - t0[r]) / t0[r]))
    return out


def profile_lorentz_norm(prof: DecreasingProfile, idx) -> float:
    p, q = _index(idx)
    if len(prof) == 0:
        return 0.0
    if math.isinf(p):
        if math.isinf(q):
            return float(prof.values[0])
        raise ValueError("L^{inf,q} with q < inf is not supported")
    v, t = prof.values, prof.breakpoints
    if math.isinf(q):
        return float(np.max(v * t[1:] ** (1.0 / p)))
    s = np.sum(v ** q * (p / q) * _power_increments(t, q / p))
    return float(s ** (1.0 / q))


def lorentz_norm(f: StepFunction, idx, q=None) -> float:
    """``||f||_{L^{p,q}}`` in closed form from the rearrangement of ``f``.

    ``idx`` is a :class:`LorentzIndex`, a ``(p, q)`` pair, or ``p`` with ``q``
    given separately.
    """
    return profile_lorentz_norm(rearrange(f), _index(idx, q))


@dataclass(frozen=True)
class QuasiNormProfile:
    index: LorentzIndex
    K: float
    alpha: float

    def __post_init__(self):
        if self.K < 1 or not 0 < self.alpha <= 1:
            raise ValueError("need K >= 1 and 0 < alpha <= 1")
        if abs((2 * self.K) ** self.alpha - 2) > 1e-12 * 2:
            raise ValueError("(2K)**alpha must equal 2")

    @classmethod
    def from_K(cls, index: LorentzIndex, K: float) -> "QuasiNormProfile":
        return cls(index, K, alpha_for(K))


def alpha_for(K: float) -> float:
    """Exponent ``alpha`` with ``(2K)**alpha == 2``."""
    if not K >= 1:
        raise ValueError(f"quasi-triangle constant must be >= 1, got {K}")
    return math.log(2) / math.log(2 * K)


def nesting_ratio(f: StepFunction, p: float, q: float, r: float) -> float:
    """``||f||_{p,r} / ||f||_{p,q}`` for ``q < r``."""
    if not 0 < q < r:
        raise ValueError(f"nesting needs 0 < q < r, got q={q}, r={r}")
    den = lorentz_norm(f, p, q)
    if den == 0:
        raise ValueError("nesting ratio is undefined for the zero function")
    return lorentz_norm(f, p, r) / den


def hunt_split(f: StepFunction) -> tuple[StepFunction, StepFunction]:
    """Split ``f = f0 + f1`` with ``f0 = f`` on ``{|f| > f*(1)}``."""
    cut = rearrange(f)(1.0)
    mask = np.abs(f.values) > cut
    f0 = f.restrict(mask)
    f1 = f.restrict(~mask)
    return f0, f1


def check_hunt_split(f: StepFunction, p0: float = 1.0, p: float = 2.0,
                     p1: float = 4.0) -> VerificationReport:
    """Exact checks on the split plus the ratio in the two-space bound.

    The profile dominations are tested at every breakpoint of the three
    rearrangements, at ``t = 1`` and at midpoints between those points.
    """
    f0, f1 = hunt_split(f)
    fs, r0, r1 = rearrange(f), rearrange(f0), rearrange(f1)
    cut = fs(1.0)
    pts = np.unique(np.concatenate([fs.breakpoints, r0.breakpoints, r1.breakpoints, [1.0]]))
    pts = pts[pts > 0]
    grid = np.unique(np.concatenate([pts, (pts[:-1] + pts[1:]) / 2, pts[:1] / 2, pts[-1:] * 2]))

    fstar = fs(grid)
    dom0 = bool(np.all(r0(grid) <= np.where(grid < 1, fstar, 0.0)))
    dom1 = bool(np.all(r1(grid) <= np.where(grid < 1, cut, fstar)))
    exact = (f0 + f1).equals(f)

    nf = lorentz_norm(f, p, math.inf)
    lhs = lorentz_norm(f0, p0, 1) + lorentz_norm(f1, p1, 1)
    const = lhs / nf if nf > 0 else 0.0
    return VerificationReport(
        "huntsplit",
        params={"p0": p0, "p": p, "p1": p1},
        observed={"f_star_at_1": cut, "reconstruction_exact": exact,
                  "f0_domination": dom0, "f1_domination": dom1,
                  "grid_points": int(grid.size), "two_space_norm": lhs,
                  "weak_norm": nf, "constant": const},
        bound={"constant": "reported"},
        passed=exact and dom0 and dom1 and math.isfinite(const),
    )


def estimate_quasi_constant(corpus: Iterable[tuple[StepFunction, StepFunction]], idx) -> float:
    """Largest observed ``||f+g|| / (||f|| + ||g||)``, floored at 1."""
    idx = _index(idx)
    best = None
    for f, g in corpus:
        nf, ng = lorentz_norm(f, idx), lorentz_norm(g, idx)
        if nf == 0 and ng == 0:
            raise ValueError("corpus pair with both functions zero")
        ratio = lorentz_norm(f + g, idx) / (nf + ng)
        best = ratio if best is None else max(best, ratio)
    if best is None:
        raise ValueError("empty corpus")
    return max(1.0, best)


def series_quasi_check(fs: Sequence[StepFunction], idx, K: float) -> VerificationReport:
    """``||sum f_j||**alpha <= 4 * sum ||f_j||**alpha`` with ``(2K)**alpha == 2``."""
    idx = _index(idx)
    if len(fs) == 0:
        raise ValueError("empty series")
    alpha = alpha_for(K)
    total = combine([1.0] * len(fs), fs)
    lhs = lorentz_norm(total, idx) ** alpha
    rhs = 4 * sum(lorentz_norm(f, idx) ** alpha for f in fs)
    return VerificationReport(
        "aoki",
        params={"p": idx.p, "q": idx.q, "K": K, "alpha": alpha, "terms": len(fs)},
        observed={"lhs": lhs},
        bound={"rhs": rhs},
        passed=lhs <= rhs * (1 + 1e-9),
    )
