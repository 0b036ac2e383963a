"""Seeded corpora of dyadic step functions.

Corpus functions are signed combinations ``f1 - f2`` with each ``fi`` of the
form ``sum_{k=kmin}^{kmax} 2**-k * chi_{A_k}`` for random unions of dyadic
cells ``A_k``. Their values are dyadic rationals with few significant bits, so
averages, martingale differences and stopping-time sums stay exact.
"""
from __future__ import annotations

from typing import Mapping

import numpy as np

from .dyadic_ops import CoeffMatrix, DyadicInterval
from .stepfn import StepFunction, block_sums

__all__ = [
    "rng_for",
    "random_set",
    "s0_function",
    "random_s0",
    "corpus",
    "random_coeffs",
    "random_interval",
    "mean_zero_in",
]


def rng_for(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _children(seed: int, n: int) -> list[np.random.Generator]:
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(n)]


def random_set(rng: np.random.Generator, m: int, level: int) -> np.ndarray:
    """Boolean cell mask of a random union of dyadic intervals of a random size."""
    coarse = int(rng.integers(0, level + 1))
    density = rng.uniform(0.0, 1.0)
    picks = rng.random(2 ** (m + coarse)) < density
    return np.repeat(picks, 2 ** (level - coarse))


def s0_function(m: int, level: int, sets: Mapping[int, np.ndarray],
                negative: Mapping[int, np.ndarray] | None = None) -> StepFunction:
    """``sum_k 2**-k chi_{sets[k]} - sum_k 2**-k chi_{negative[k]}``."""
    vals = np.zeros(2 ** (m + level))
    for k, mask in sets.items():
        vals = vals + 2.0 ** -k * np.asarray(mask, dtype=bool)
    for k, mask in (negative or {}).items():
        vals = vals - 2.0 ** -k * np.asarray(mask, dtype=bool)
    return StepFunction(m, level, vals)


def random_s0(seed, m: int, level: int, kmin: int = -3, kmax: int = 4,
              signed: bool = True) -> StepFunction:
    """Random function of the ``S_0`` class; the same seed gives the same values."""
    if kmin >= kmax:
        raise ValueError(f"need kmin < kmax, got {kmin} >= {kmax}")
    rng = rng_for(seed)
    pos = {k: random_set(rng, m, level) for k in range(kmin, kmax + 1)}
    neg = {k: random_set(rng, m, level) for k in range(kmin, kmax + 1)} if signed else None
    return s0_function(m, level, pos, neg)


def corpus(seed: int, n: int, m: int, level: int, kmin: int = -3, kmax: int = 4,
           signed: bool = True) -> list[StepFunction]:
    return [random_s0(r, m, level, kmin, kmax, signed) for r in _children(seed, n)]


def random_coeffs(rng: np.random.Generator, scales, rows: int,
                  choices=(-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0)) -> CoeffMatrix:
    """Coefficient table with dyadic entries, so ``S`` is evaluated exactly."""
    scales = list(scales)
    vals = rng.choice(np.asarray(choices), size=(len(scales), rows))
    return CoeffMatrix({(k, j): vals[i, j] for i, k in enumerate(scales) for j in range(rows)})


def random_interval(rng: np.random.Generator, m: int, level: int, kmax: int | None = None) -> DyadicInterval:
    """Uniform level in ``[-m, kmax]``, uniform position."""
    kmax = level - 1 if kmax is None else kmax
    k = int(rng.integers(-m, kmax + 1))
    return DyadicInterval(k, int(rng.integers(0, 2 ** (m + k))))


def mean_zero_in(rng: np.random.Generator, I0: DyadicInterval, m: int, level: int,
                 kmin: int = -2, kmax: int = 4) -> StepFunction:
    """Random S_0-type function restricted to ``I0`` with its mean removed there."""
    f = random_s0(rng, m, level, kmin, kmax)
    sl = I0.cells(level)
    vals = np.zeros(f.ncells)
    piece = f.values[sl]
    n = piece.size
    vals[sl] = piece - block_sums(piece, n)[0] / n
    return StepFunction(m, level, vals)
