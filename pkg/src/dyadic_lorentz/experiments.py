"""End-to-end desk-scale checks built on the other modules.

Each ``*_check`` / ``*_demo`` returns a :class:`VerificationReport`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .corpus import random_set, rng_for
from .cz import cz_decompose, empirical_weak_type
from .dyadic_ops import CoeffMatrix, DyadicInterval, maximal_s
from .lorentz import lorentz_norm
from .report import VerificationReport
from .stepfn import StepFunction, combine, indicator

__all__ = [
    "LevelSetDecomposition",
    "limsup_functional",
    "counterexample_demo",
    "level_sets",
    "llog_functional",
    "yano_constant",
    "yano_chain_check",
    "countable_subadd_check",
    "indicator_probes",
    "estimate_s_norm",
    "weak11_demo",
    "lambda_grid",
    "certificate_ratio",
    "spiky_function",
    "spiky_coeffs",
    "weak11_stability",
]


def limsup_functional(f: StepFunction) -> float:
    """``min(1, limsup_n n * int_0^{1/n} |f|)``, i.e. ``min(1, |f|)`` on the first cell."""
    return min(1.0, abs(float(f.values[0])))


def counterexample_demo(N: int, L: int, pairs: int = 100, seed: int = 0) -> VerificationReport:
    """Series of dyadic annuli ``[2**-(j+1), 2**-j)`` whose sum tends to ``chi_[0,1)`` in L^1.

    Every term and every partial sum vanishes near 0, so the functional is 0
    on each term, yet it equals 1 on the limit: the countable inequality
    fails although pairwise subadditivity holds. The limit is evaluated on
    its canonical representative ``chi_[0,1)``; the functional is not
    continuous on L^1 classes, which is the point of the example.
    """
    if N < 0:
        raise ValueError("N must be nonnegative")
    if L < N + 1:
        raise ValueError(f"level {L} cannot resolve {N} annuli; need L >= {N + 1}")
    terms = [indicator(2.0 ** -(j + 1), 2.0 ** -j, 0, L) for j in range(N)]
    limit = indicator(0.0, 1.0, 0, L)
    partial = combine([1.0] * N, terms) if terms else StepFunction.zeros(0, L)
    tail = float(np.sum(np.abs((limit - partial).values))) * limit.cell_width
    t_limit = limsup_functional(limit)
    t_sum = sum(limsup_functional(f) for f in terms)

    rng = rng_for(seed)
    worst = -math.inf
    for _ in range(pairs):
        f, g = (StepFunction(0, L, rng.choice([-2.0, -1.0, -0.5, 0.0, 0.25, 0.5, 1.0, 3.0], 2 ** L))
                for _ in range(2))
        worst = max(worst, limsup_functional(f + g) - limsup_functional(f) - limsup_functional(g))
    pairwise_ok = pairs == 0 or worst <= 0
    violation = t_limit > t_sum
    return VerificationReport(
        "counterexample",
        params={"N": N, "L": L, "pairs": pairs, "seed": seed,
                "terms": "dyadic annuli [2^-(j+1), 2^-j) replacing (1/(j+1), 1/j]"},
        observed={"tail_l1": tail, "T_limit": t_limit, "sum_T_terms": t_sum,
                  "violation": violation, "pairwise_max_excess": worst if pairs else 0.0},
        bound={"tail_l1": 2.0 ** -N},
        passed=violation and pairwise_ok and tail == 2.0 ** -N,
    )


@dataclass
class LevelSetDecomposition:
    """Pieces ``f * chi_{S_k}`` with ``S_0 = {|f| < 2}`` and ``S_k = {2**k <= |f| < 2**(k+1)}``."""

    f: StepFunction
    pieces: list[tuple[int, StepFunction]]
    labels: np.ndarray

    def measure(self, k: int) -> float:
        return int(np.count_nonzero(self.labels == k)) * self.f.cell_width

    def partial(self, K: int) -> StepFunction:
        return self.f.restrict(self.labels <= K)

    def tail_norms(self, p: float) -> list[tuple[int, float]]:
        """``||f - sum_{k <= K} pieces||_{p,1}`` for every piece index ``K``."""
        return [(k, lorentz_norm(self.f - self.partial(k), p, 1)) for k, _ in self.pieces]


def level_sets(f: StepFunction) -> LevelSetDecomposition:
    a = np.abs(f.values)
    _, exp = np.frexp(a)
    labels = np.where(a < 2, 0, exp - 1)
    ks = sorted(set(labels.tolist()) | {0})
    pieces = [(k, f.restrict(labels == k)) for k in ks]
    return LevelSetDecomposition(f, pieces, labels)


def llog_functional(f: StepFunction, alpha: float) -> float:
    """``int |f| (log2+ |f|)**alpha``."""
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    a = np.abs(f.values)
    logs = np.log2(np.where(a > 1, a, 1.0))
    return float(np.sum(a * logs ** alpha)) * f.cell_width


def yano_constant(alpha: float, cutoff: float = 1e-14) -> float:
    """``sum_{k>=1} 2**(k+1) k**alpha 4**-k``, truncated once terms drop below ``cutoff``."""
    total, k = 0.0, 1
    peak = alpha / math.log(2)
    while True:
        term = 2.0 ** (1 - k) * k ** alpha
        total += term
        if term < cutoff and k > peak:
            return total
        k += 1


def yano_chain_check(f: StepFunction, alpha: float) -> VerificationReport:
    """Young step per level set, then the summed chain against ``8 * llog + C_alpha``."""
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    dec = level_sets(f)
    per_k = []
    lhs = 0.0
    for k, _ in dec.pieces:
        if k < 1:
            continue
        mu = dec.measure(k)
        left = mu ** (k / (k + 1))
        right = 4 * mu + 4.0 ** -k
        per_k.append({"k": k, "measure": mu, "lhs": left, "rhs": right, "pass": left <= right})
        lhs += 2.0 ** (k + 1) * k ** alpha * left
    c_alpha = yano_constant(alpha)
    llog = llog_functional(f, alpha)
    rhs = 8 * llog + c_alpha
    young_ok = all(r["pass"] for r in per_k)
    chain_ok = lhs <= rhs * (1 + 1e-12)
    return VerificationReport(
        "yano",
        params={"alpha": alpha, "m": f.m, "level": f.level},
        observed={"per_k": per_k, "chain_lhs": lhs, "llog": llog},
        bound={"chain_rhs": rhs, "C_alpha": c_alpha},
        passed=young_ok and chain_ok,
    )


def countable_subadd_check(a: CoeffMatrix, fs: Sequence[StepFunction]) -> VerificationReport:
    """Pointwise ``S(sum f_j) <= sum S(f_j)``."""
    if len(fs) == 0:
        raise ValueError("empty series")
    total = combine([1.0] * len(fs), fs)
    fs = [f.refine(total.level, total.m) for f in fs]
    lhs = maximal_s(total, a).values
    rhs = np.zeros_like(lhs)
    for f in fs:
        rhs = rhs + maximal_s(f, a).values
    slack = rhs - lhs
    return VerificationReport(
        "countable",
        params={"terms": len(fs), "scales": a.scales(), "rows": len(a.rows())},
        observed={"min_slack": float(slack.min()), "max_slack": float(slack.max())},
        bound={"min_slack": 0.0},
        passed=bool(np.all(lhs <= rhs)),
    )


def indicator_probes(m: int, level: int, seed: int = 0, max_interval_level: int = 6,
                     random_sets: int = 32) -> list[StepFunction]:
    """Indicators of all dyadic intervals down to ``max_interval_level`` plus random dyadic sets."""
    probes = []
    for k in range(-m, min(level, max_interval_level) + 1):
        for j in range(2 ** (m + k)):
            probes.append(DyadicInterval(k, j).indicator(m, level))
    rng = rng_for(seed)
    while random_sets > 0:
        mask = random_set(rng, m, level)
        if mask.any():
            probes.append(StepFunction(m, level, mask.astype(np.float64)))
            random_sets -= 1
    return probes


def estimate_s_norm(a: CoeffMatrix, probes: Sequence[StepFunction], r: float) -> float:
    """Empirical ``L^{r,1} -> L^{r,inf}`` size of ``S`` over ``probes``."""
    rep = empirical_weak_type(lambda h: maximal_s(h, a), probes, r, r, mode="lorentz")
    return rep.observed["constant"]


def _measure_above(f: StepFunction, s: float) -> float:
    return int(np.count_nonzero(f.values > s)) * f.cell_width


def weak11_demo(a: CoeffMatrix, f: StepFunction, lam: float, r: float = 2.0,
                probes: Sequence[StepFunction] | None = None, seed: int = 0,
                max_rounds: int = 8) -> VerificationReport:
    """Run the weak (1,1) argument for ``S`` once at height ``lam``.

    The operator norm ``K_S`` is estimated over indicator probes; the good
    part produced at height ``lam / K_S`` is added to the probes and the
    estimate is redone until it covers that good part (at most
    ``max_rounds`` times), so ``K_S`` is a maximum over every input that the
    argument actually feeds to ``S``.

    Checks: (a) the good-part bound ``||S g||_{r,inf} <= K_S ||g||_{r,1}``,
    (b) ``S b_j`` vanishes off ``Q_j`` and ``S b <= sum S b_j``, and
    (d) ``|{S f > lam}| <= |{S g > lam/2}| + sum |Q_j|``. The certificate
    ``lam |{S f > lam}| / (K_S ||f||_1)`` is reported, not asserted.
    """
    if not (lam > 0 and r > 1):
        raise ValueError("need lam > 0 and r > 1")
    probes = list(probes) if probes is not None else indicator_probes(f.m, f.level, seed)
    k_ind = estimate_s_norm(a, probes, r) if probes else 0.0
    k_s = k_ind if k_ind > 0 else 1.0
    rounds = 0
    while True:
        try:
            dec = cz_decompose(f, lam / k_s)
        except ValueError as exc:
            raise ValueError(f"{exc}; the weak (1,1) argument needs avg|f| <= lam / K_S") from None
        g = dec.good
        gnorm = lorentz_norm(g, r, 1)
        Sg = maximal_s(g, a)
        g_ratio = lorentz_norm(Sg, r, math.inf) / gnorm if gnorm > 0 else 0.0
        if g_ratio <= k_s * (1 + 1e-9) or rounds >= max_rounds:
            break
        k_s = g_ratio
        rounds += 1
    check_a = g_ratio <= k_s * (1 + 1e-9)

    Sf = maximal_s(f, a)
    covered = np.zeros(f.ncells, dtype=bool)
    sb_sum = np.zeros(f.ncells)
    contained = True
    for Q, b in dec.bad:
        mask = Q.mask(f.m, f.level)
        covered |= mask
        Sb = maximal_s(b, a).values
        contained &= not np.any(Sb[~mask] != 0)
        sb_sum = sb_sum + Sb
    Sb_total = maximal_s(dec.bad_total(), a).values
    countable = bool(np.all(Sb_total <= sb_sum))
    check_b = contained and countable and not np.any(Sb_total[~covered] != 0)

    level = _measure_above(Sf, lam)
    cubes = float(sum(Q.length for Q in dec.cubes))
    check_d = level <= _measure_above(Sg, lam / 2) + cubes

    l1 = float(np.sum(np.abs(f.values))) * f.cell_width
    cert = lam * level
    return VerificationReport(
        "weak11",
        params={"lambda": lam, "r": r, "m": f.m, "level": f.level, "scales": a.scales(),
                "probes": len(probes)},
        observed={
            "K_S": k_s, "K_S_indicators": k_ind, "probe_rounds": rounds,
            "gamma": 1 / k_s, "height": lam / k_s, "cubes": len(dec.cubes),
            "cubes_measure": cubes, "good_ratio": g_ratio,
            "level_set_measure": level, "certificate": cert,
            "certificate_constant": cert / (k_s * l1) if l1 > 0 else 0.0,
            "certificate_ratio": cert / l1 if l1 > 0 else 0.0,
            "checks": {"good_part_bound": check_a, "bad_support": check_b, "split_bound": check_d},
        },
        bound={"good_part_bound": k_s * gnorm, "f_l1": l1},
        passed=check_a and check_b and check_d,
    )


def lambda_grid(l1: float, lo: int = -8, hi: int = 8, points: int = 33) -> np.ndarray:
    """Geometric grid ``2**lo * l1 ... 2**hi * l1``."""
    return l1 * 2.0 ** np.linspace(lo, hi, points)


def certificate_ratio(a: CoeffMatrix, f: StepFunction, lams: np.ndarray) -> tuple[float, float]:
    """``max over lams of lam |{S f > lam}| / ||f||_1`` and its maximizer."""
    Sf = maximal_s(f, a)
    l1 = float(np.sum(np.abs(f.values))) * f.cell_width
    vals = [lam * _measure_above(Sf, lam) / l1 for lam in lams]
    i = int(np.argmax(vals))
    return float(vals[i]), float(lams[i])


SPIKES = ((0.1, 1.0), (0.37, 0.5), (0.62, 0.25), (0.9, 0.25))


def spiky_function(level: int, spikes=SPIKES) -> StepFunction:
    """Sum of ``w * 2**level`` on the cell containing each spike location (mass ``w`` each)."""
    vals = np.zeros(2 ** level)
    for x, w in spikes:
        vals[int(x * 2 ** level)] += w * 2.0 ** level
    return StepFunction(0, level, vals)


def spiky_coeffs(level: int, rows: int = 4, seed: int = 0) -> CoeffMatrix:
    """Random-sign martingale transforms over scales ``0 .. level-1``.

    Signs for scale ``k`` come from a generator seeded by ``(seed, k)``, so the
    table at one level extends the table at any coarser level.
    """
    entries = {}
    for k in range(level):
        signs = np.random.default_rng([seed, k]).choice([-1.0, 1.0], rows)
        for j in range(rows):
            entries[(k, j)] = signs[j]
    return CoeffMatrix(entries)


def weak11_stability(levels=(8, 10, 12), rows: int = 4, seed: int = 0, r: float = 2.0,
                     growth_bound: float = 1.5) -> VerificationReport:
    """Certificate ratio of the spiky family across refinements, with CZ runs where admissible."""
    ratios, argmax, cz_runs, cz_ok = [], [], 0, True
    for L in levels:
        f = spiky_function(L)
        a = spiky_coeffs(L, rows, seed)
        l1 = float(np.sum(np.abs(f.values))) * f.cell_width
        lams = lambda_grid(l1)
        ratio, lam_star = certificate_ratio(a, f, lams)
        ratios.append(ratio)
        argmax.append(lam_star)
        probes = indicator_probes(f.m, f.level, seed)
        k_s = estimate_s_norm(a, probes, r)
        for lam in lams[lams >= k_s * l1][::4]:
            rep = weak11_demo(a, f, float(lam), r, probes=probes)
            cz_runs += 1
            cz_ok &= rep.passed
    growth = [ratios[i + 1] / ratios[i] for i in range(len(ratios) - 1)]
    stable = all(g < growth_bound for g in growth)
    return VerificationReport(
        "weak11_stability",
        params={"levels": list(levels), "rows": rows, "seed": seed, "r": r, "spikes": SPIKES},
        observed={"ratios": ratios, "argmax_lambda": argmax, "growth": growth,
                  "cz_runs": cz_runs, "cz_checks": cz_ok},
        bound={"growth": growth_bound},
        passed=stable and cz_ok,
    )
