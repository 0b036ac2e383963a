"""Calderon-Zygmund decomposition on dyadic intervals and kernel estimates.

The stopping time starts from the whole domain ``[0, 2**m)`` and selects the
maximal dyadic intervals on which the average of ``|f|`` exceeds the height.
Dimension is fixed at ``n = 1``; the ``2**n`` constants are written with
``DIM`` so they read like the classical statements.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .dyadic_ops import DyadicInterval
from .lorentz import lorentz_norm
from .report import VerificationReport
from .stepfn import StepFunction, block_sums

__all__ = [
    "DIM",
    "CZDecomposition",
    "KernelSpec",
    "KERNELS",
    "kernel_by_name",
    "cz_decompose",
    "verify_cz",
    "kernel_size_sup",
    "hormander_integral",
    "apply_kernel",
    "bad_part_kernel_check",
    "good_part_ratio",
    "empirical_weak_type",
]

DIM = 1


@dataclass
class CZDecomposition:
    good: StepFunction
    bad: list[tuple[DyadicInterval, StepFunction]]
    height: float
    n: int = DIM

    @property
    def cubes(self) -> list[DyadicInterval]:
        return [Q for Q, _ in self.bad]

    def bad_total(self) -> StepFunction:
        vals = np.zeros(self.good.ncells)
        for _, b in self.bad:
            vals = vals + b.values
        return StepFunction(self.good.m, self.good.level, vals)

    def to_json(self) -> dict:
        return {
            "height": self.height,
            "n": self.n,
            "good": self.good.to_json(),
            "cubes": [Q.to_json() for Q in self.cubes],
            "bad": [b.to_json() for _, b in self.bad],
        }


def _averages(values: np.ndarray, level: int, k: int) -> np.ndarray:
    n = 2 ** (level - k)
    return block_sums(values, n) / n


def cz_decompose(f: StepFunction, height: float) -> CZDecomposition:
    """Decompose ``f = g + sum b_j`` at ``height``.

    Raises ValueError when the average of ``|f|`` over the whole domain
    already exceeds ``height``; a larger domain exponent ``m`` fixes that.
    """
    if not height > 0:
        raise ValueError("height must be positive")
    a = np.abs(f.values)
    root = _averages(a, f.level, -f.m)[0]
    if root > height:
        raise ValueError(
            f"average of |f| over [0, 2**{f.m}) is {root} > height {height}; "
            "embed f in a larger domain (increase m)"
        )
    covered = np.zeros(f.ncells, dtype=bool)
    cubes = []
    for k in range(-f.m + 1, f.level + 1):
        n = 2 ** (f.level - k)
        hit = (_averages(a, f.level, k) > height) & ~covered[::n]
        for j in np.flatnonzero(hit):
            cubes.append(DyadicInterval(k, int(j)))
        covered |= np.repeat(hit, n)

    g = f.values.copy()
    bad = []
    for Q in cubes:
        sl = Q.cells(f.level)
        n = sl.stop - sl.start
        avg = block_sums(f.values[sl], n)[0] / n
        g[sl] = avg
        b = np.zeros(f.ncells)
        b[sl] = f.values[sl] - avg
        bad.append((Q, StepFunction(f.m, f.level, b)))
    return CZDecomposition(StepFunction(f.m, f.level, g), bad, float(height))


def verify_cz(f: StepFunction, dec: CZDecomposition, tol: float = 1e-12) -> VerificationReport:
    """Check the decomposition inequalities, stopping-time structure and reconstruction.

    Mean-zero checks allow ``tol * ||f||_1``; everything else is compared exactly.
    """
    if (dec.good.m, dec.good.level) != (f.m, f.level) or any(
        (b.m, b.level) != (f.m, f.level) for _, b in dec.bad
    ):
        raise ValueError("decomposition was not produced on the grid of f")
    w = f.cell_width
    h = dec.height
    l1 = float(np.sum(np.abs(f.values))) * w
    g = dec.good.values

    b_l1, b_mean, support, measures = [], [], True, []
    cover = np.zeros(f.ncells, dtype=np.int64)
    for Q, b in dec.bad:
        mask = Q.mask(f.m, f.level)
        cover += mask
        support &= not np.any(b.values[~mask] != 0)
        b_l1.append(float(np.sum(np.abs(b.values))) * w / (Q.length))
        b_mean.append(abs(b.integral()))
        measures.append(Q.length)

    a = np.abs(f.values)
    bracket, maximal = True, True
    for Q in dec.cubes:
        avg = _averages(a[Q.cells(f.level)], f.level, Q.k)[0]
        P = Q.parent()
        pavg = _averages(a[P.cells(f.level)], f.level, P.k)[0] if P.fits(f.m) else 0.0
        bracket &= bool(h < avg <= 2 ** DIM * h)
        maximal &= bool(pavg <= h)

    recon = np.array_equal(g + dec.bad_total().values, f.values)
    checks = {
        "g_sup": float(np.max(np.abs(g))) <= 2 ** DIM * h,
        "g_l1": float(np.sum(np.abs(g))) * w <= l1,
        "b_l1": all(x <= 2 ** (DIM + 1) * h for x in b_l1),
        "b_mean": all(x <= tol * l1 for x in b_mean),
        "cubes_measure": sum(measures) <= l1 / h,
        "disjoint": bool(np.all(cover <= 1)),
        "b_support": support,
        "reconstruction": recon,
        "maximality": maximal,
        "height_bracket": bracket,
    }
    return VerificationReport(
        "cz",
        params={"height": h, "m": f.m, "level": f.level},
        observed={
            "checks": checks,
            "cubes": len(measures),
            "g_sup": float(np.max(np.abs(g))),
            "g_l1": float(np.sum(np.abs(g))) * w,
            "f_l1": l1,
            "max_b_l1_per_measure": max(b_l1, default=0.0),
            "max_abs_b_mean": max(b_mean, default=0.0),
            "cubes_measure": sum(measures),
        },
        bound={
            "g_sup": 2 ** DIM * h,
            "b_l1_per_measure": 2 ** (DIM + 1) * h,
            "b_mean": tol * l1,
            "cubes_measure": l1 / h,
        },
        passed=all(checks.values()),
    )


@dataclass(frozen=True)
class KernelSpec:
    """Kernel ``K(x, y)``, vectorized over numpy arrays, used off the diagonal."""

    evaluator: Callable[[np.ndarray, np.ndarray], np.ndarray]
    description: str = ""
    translation_invariant: bool = field(default=True)

    def __call__(self, x, y):
        return self.evaluator(np.asarray(x, dtype=np.float64), np.asarray(y, dtype=np.float64))


KERNELS = {
    "hilbert": KernelSpec(lambda x, y: 1.0 / (x - y), "1/(x-y)"),
    "gauss": KernelSpec(lambda x, y: np.exp(-(x - y) ** 2), "exp(-(x-y)^2)"),
    "constant": KernelSpec(lambda x, y: np.ones(np.broadcast(x, y).shape), "1"),
}


def kernel_by_name(name: str) -> KernelSpec:
    try:
        return KERNELS[name]
    except KeyError:
        raise ValueError(f"unknown kernel {name!r}; choose from {sorted(KERNELS)}") from None


def kernel_size_sup(K: KernelSpec, points: Sequence[float], ys: Sequence[float] | None = None) -> float:
    """``max |x - y| |K(x, y)|`` over grid pairs with ``x != y``.

    A lower bound for the size constant of the kernel. ``ys`` defaults to
    ``points``.
    """
    xs = np.asarray(points, dtype=np.float64)
    ys = xs if ys is None else np.asarray(ys, dtype=np.float64)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    off = X != Y
    if not np.any(off):
        return 0.0
    X, Y = X[off], Y[off]
    return float(np.max(np.abs(X - Y) * np.abs(K(X, Y))))


def hormander_integral(K: KernelSpec, y: float, y2: float, reach: float = 512,
                       cells_per_delta: int = 32) -> float:
    """Midpoint sum of ``|K(x, y) - K(x, y2)|`` over ``2 delta <= |x - y| <= reach * delta``.

    ``delta = |y - y2|``; the cells tile the two half-lines exactly, starting
    at the boundary of the excluded ball.
    """
    if y == y2:
        raise ValueError("y and y2 must differ")
    delta = abs(y2 - y)
    h = delta / cells_per_delta
    ncell = int(round((reach - 2) * cells_per_delta))
    offs = 2 * delta + (np.arange(ncell) + 0.5) * h
    x = np.concatenate([y + offs, y - offs])
    return float(np.sum(np.abs(K(x, y) - K(x, y2))) * h)


def apply_kernel(K: KernelSpec, f: StepFunction, xs: np.ndarray | None = None) -> np.ndarray:
    """Midpoint quadrature of ``int K(x, y) f(y) dy``.

    Without ``xs`` the operator is evaluated at the cell midpoints of ``f`` and
    the cell containing ``x`` is skipped (principal-value surrogate).
    """
    ym = f.midpoints()
    live = f.values != 0
    yv, fv = ym[live], f.values[live]
    if xs is None:
        X, Y = np.meshgrid(ym, yv, indexing="ij")
        kern = np.where(X == Y, 0.0, K(X, np.where(X == Y, X + 1.0, Y)))
        return kern @ fv * f.cell_width
    xs = np.asarray(xs, dtype=np.float64)
    return K(xs[:, None], yv[None, :]) @ fv * f.cell_width


def bad_part_kernel_check(K: KernelSpec, dec: CZDecomposition, A_prime: float,
                          reach: float = 64, cells_per_side: int = 16,
                          slack: float = 0.05) -> VerificationReport:
    """``int_{outside Q*} |T b_j| <= 2**(n+1) A' height |Q_j|`` for every bad part.

    ``Q*`` has the center of ``Q_j`` and twice its side; the outer integral is
    a midpoint sum out to ``reach`` sides from the center.
    """
    worst = 0.0
    rows = []
    for Q, b in dec.bad:
        side = Q.length
        h = side / cells_per_side
        offs = side + (np.arange(int((reach - 1) * cells_per_side)) + 0.5) * h
        xs = np.concatenate([Q.center + offs, Q.center - offs])
        Tb = apply_kernel(K, b, xs)
        lhs = float(np.sum(np.abs(Tb)) * h)
        rhs = 2 ** (DIM + 1) * A_prime * dec.height * side
        ratio = lhs / rhs
        worst = max(worst, ratio)
        rows.append({"cube": Q.to_json(), "lhs": lhs, "rhs": rhs})
    return VerificationReport(
        "bad_part_kernel",
        params={"A_prime": A_prime, "height": dec.height, "reach": reach, "slack": slack},
        observed={"worst_ratio": worst, "cubes": rows},
        bound={"worst_ratio": 1 + slack},
        passed=worst <= 1 + slack,
    )


def good_part_ratio(f: StepFunction, dec: CZDecomposition, r: float = 2.0) -> float:
    """``||g||_{r,1} / (||f||_1**(1/r) * height**(1 - 1/r))``."""
    l1 = float(np.sum(np.abs(f.values))) * f.cell_width
    if l1 == 0:
        return 0.0
    return lorentz_norm(dec.good, r, 1) / (l1 ** (1 / r) * dec.height ** (1 - 1 / r))


def empirical_weak_type(op: Callable[[StepFunction], StepFunction], inputs: Iterable[StepFunction],
                        p: float, q: float, mode: str = "full") -> VerificationReport:
    """Largest observed ratio of ``||op(f)||_{q,inf}`` to the size of the input.

    ``mode="full"`` divides by ``||f||_p``; ``"restricted"`` expects indicators
    and divides by ``mu(A)**(1/p)``; ``"lorentz"`` divides by ``||f||_{p,1}``.
    The maximizer is reported by its position in ``inputs``.
    """
    if mode not in ("full", "restricted", "lorentz"):
        raise ValueError(f"unknown mode {mode!r}")
    best, arg, count = 0.0, None, 0
    for i, f in enumerate(inputs):
        count += 1
        if mode == "restricted":
            a = np.abs(f.values)
            if np.any((a != 0) & (a != 1)):
                raise ValueError("restricted mode needs indicator functions")
            size = float(np.count_nonzero(a)) * f.cell_width
            den = size ** (1 / p)
        elif mode == "lorentz":
            den = lorentz_norm(f, p, 1)
        else:
            den = lorentz_norm(f, p, p)
        if den == 0:
            continue
        ratio = lorentz_norm(op(f), q, math.inf) / den
        if arg is None or ratio > best:
            best, arg = ratio, i
    if count == 0:
        raise ValueError("empty corpus")
    return VerificationReport(
        "weak_type",
        params={"p": p, "q": q, "mode": mode, "inputs": count},
        observed={"constant": best, "argmax": arg},
        bound={"constant": "reported"},
        passed=math.isfinite(best),
    )
