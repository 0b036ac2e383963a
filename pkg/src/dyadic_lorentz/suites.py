"""Seeded verification suites.

Each suite maps a :class:`SuiteConfig` to a list of reports; :func:`run_suite`
serializes them with the configuration and a content hash of the seed block.
"""
from __future__ import annotations

import hashlib
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from . import corpus as cp
from .cz import (
    bad_part_kernel_check,
    cz_decompose,
    good_part_ratio,
    hormander_integral,
    kernel_by_name,
    kernel_size_sup,
    verify_cz,
)
from .dyadic_ops import haar, zero_locality_check
from .experiments import (
    countable_subadd_check,
    counterexample_demo,
    indicator_probes,
    estimate_s_norm,
    lambda_grid,
    weak11_demo,
    weak11_stability,
    yano_chain_check,
)
from .lorentz import (
    check_hunt_split,
    estimate_quasi_constant,
    lorentz_norm,
    series_quasi_check,
)
from .report import VerificationReport, dumps_reports, jsonable, reports_to_csv
from .stepfn import StepFunction, distribution, lp_norm, rearrange

__all__ = ["SuiteConfig", "SUITES", "SuiteInputError", "run_suite", "execute", "payload"]


class SuiteInputError(ValueError):
    pass


@dataclass
class SuiteConfig:
    suite: str
    seed: int = 0
    cases: int = 100
    level: int = 10
    m: int = 0
    out: str | None = None
    format: str = "json"
    options: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.suite not in SUITES:
            raise SuiteInputError(f"unknown suite {self.suite!r}; valid suites: {', '.join(SUITES)}")
        if self.cases < 1:
            raise SuiteInputError("cases must be >= 1")
        if self.level < 1:
            raise SuiteInputError("level must be >= 1")
        if self.m < 0:
            raise SuiteInputError("m must be >= 0")
        if not 0 <= self.seed < 2 ** 64:
            raise SuiteInputError("seed must be an unsigned 64-bit integer")
        if self.format not in ("json", "csv"):
            raise SuiteInputError("format must be json or csv")

    def seed_block(self) -> dict:
        return {"suite": self.suite, "seed": self.seed, "cases": self.cases,
                "level": self.level, "m": self.m, "options": dict(sorted(self.options.items()))}


def _rel_close(a: float, b: float, tol: float) -> bool:
    if math.isinf(a) or math.isinf(b):
        return a == b
    return abs(a - b) <= tol * max(abs(a), abs(b))


def _grid(f: StepFunction) -> np.ndarray:
    vals = np.unique(np.abs(f.values))
    mids = (vals[:-1] + vals[1:]) / 2
    return np.unique(np.concatenate([[0.0], vals, mids, vals[-1:] + 1.0]))


def suite_rearrange(cfg: SuiteConfig) -> list[VerificationReport]:
    out = []
    for i, f in enumerate(cp.corpus(cfg.seed, cfg.cases, cfg.m, cfg.level)):
        prof = rearrange(f)
        grid = _grid(f)
        equi = all(distribution(f, s) == prof.distribution(s) for s in grid)
        monotone = bool(np.all(np.diff([distribution(f, s) for s in grid]) <= 0))
        norms = {}
        ok = equi and monotone
        for p in (0.5, 1.0, 2.0, math.inf):
            a, b = lp_norm(f, p), prof.lp_norm(p)
            norms[str(p)] = [a, b]
            ok &= _rel_close(a, b, 1e-10)
        out.append(VerificationReport(
            "rearrange", params={"case": i},
            observed={"equimeasurable": equi, "monotone": monotone, "norms": norms,
                      "grid_points": int(grid.size)},
            bound={"norm_rel_tol": 1e-10}, passed=ok))
    return out


INDICATOR_P = (0.5, 1.0, 1.5, 2.0, 4.0)
INDICATOR_Q = (0.5, 1.0, 2.0, 4.0, math.inf)


def indicator_law(p: float, q: float, mu: float) -> float:
    if math.isinf(q):
        return mu ** (1 / p)
    return (p / q) ** (1 / q) * mu ** (1 / p)


def suite_indicator(cfg: SuiteConfig) -> list[VerificationReport]:
    rng = cp.rng_for(cfg.seed)
    out = []
    sets = []
    while len(sets) < cfg.options.get("sets", 20):
        mask = cp.random_set(rng, cfg.m, cfg.level)
        if mask.any():
            sets.append(StepFunction(cfg.m, cfg.level, mask.astype(np.float64)))
    for i, chi in enumerate(sets):
        mu = float(np.count_nonzero(chi.values)) * chi.cell_width
        worst = 0.0
        for p in INDICATOR_P:
            for q in INDICATOR_Q:
                exact = indicator_law(p, q, mu)
                worst = max(worst, abs(lorentz_norm(chi, p, q) - exact) / exact)
        out.append(VerificationReport(
            "indicator_law", params={"set": i, "measure": mu},
            observed={"max_rel_err": worst}, bound={"max_rel_err": 1e-12},
            passed=worst <= 1e-12))
    for i, f in enumerate(cp.corpus(cfg.seed, cfg.cases, cfg.m, cfg.level)):
        worst = 0.0
        for p in (0.5, 1.0, 2.0, 3.0):
            a, b = lorentz_norm(f, p, p), lp_norm(f, p)
            worst = max(worst, abs(a - b) / b if b else abs(a))
        out.append(VerificationReport(
            "lorentz_pp", params={"case": i}, observed={"max_rel_err": worst},
            bound={"max_rel_err": 1e-10}, passed=worst <= 1e-10))
    return out


NESTING = ((1.0, 1.0, 2.0), (1.0, 1.0, math.inf), (2.0, 1.0, 2.0), (2.0, 2.0, math.inf),
           (2.0, 0.5, 1.0), (0.5, 1.0, 4.0))


def suite_nesting(cfg: SuiteConfig) -> list[VerificationReport]:
    fs = [f for f in cp.corpus(cfg.seed, cfg.cases, cfg.m, cfg.level) if np.any(f.values)]
    rng = cp.rng_for(cfg.seed + 1)
    sets = []
    while len(sets) < 20:
        mask = cp.random_set(rng, cfg.m, cfg.level)
        if mask.any():
            sets.append(StepFunction(cfg.m, cfg.level, mask.astype(np.float64)))
    out = []
    for p, q, r in NESTING:
        ind = max(lorentz_norm(c, p, r) / lorentz_norm(c, p, q) for c in sets)
        fwd = [lorentz_norm(f, p, r) / lorentz_norm(f, p, q) for f in fs]
        worst = max(fwd)
        transposed = max(lorentz_norm(f, p, q) / lorentz_norm(f, p, r) for f in fs)
        out.append(VerificationReport(
            "nesting", params={"p": p, "q": q, "r": r, "functions": len(fs)},
            observed={"max_ratio_pr_over_pq": worst, "max_ratio_pq_over_pr": transposed,
                      "note": "embedding direction follows L^{p,q} in L^{p,r} for q < r"},
            bound={"indicator_max": ind}, passed=worst <= ind * (1 + 1e-9)))
    return out


def suite_huntsplit(cfg: SuiteConfig) -> list[VerificationReport]:
    # split point t = 1 is half of [0, 2); m >= 2 keeps the spread stable
    m = max(cfg.m, 2)
    p0, p, p1 = (cfg.options.get(k, d) for k, d in (("p0", 1.0), ("p", 2.0), ("p1", 4.0)))
    out = []
    consts = []
    for i, f in enumerate(cp.corpus(cfg.seed, cfg.cases, m, cfg.level)):
        rep = check_hunt_split(f, p0, p, p1)
        rep.params["case"] = i
        out.append(rep)
        if rep.observed["weak_norm"] > 0:
            consts.append(rep.observed["constant"])
    spread = max(consts) / min(consts) if consts else 1.0
    out.append(VerificationReport(
        "huntsplit_spread", params={"p0": p0, "p": p, "p1": p1, "m": m},
        observed={"min_constant": min(consts, default=0.0), "max_constant": max(consts, default=0.0),
                  "spread": spread},
        bound={"spread": 2.0}, passed=spread < 2.0 and all(map(math.isfinite, consts))))
    return out


def suite_cz(cfg: SuiteConfig) -> list[VerificationReport]:
    out = []
    for i, f in enumerate(cp.corpus(cfg.seed, cfg.cases, cfg.m, cfg.level)):
        base = float(np.sum(np.abs(f.values))) * f.cell_width / f.measure
        base = base if base > 0 else 1.0
        for octave in range(4):
            h = base * 2.0 ** octave
            rep = verify_cz(f, cz_decompose(f, h))
            rep.params.update(case=i, octave=octave)
            out.append(rep)
    return out


HORMANDER_STEPS = ((32, 4), (64, 8), (128, 16), (256, 32), (512, 64))


def suite_hormander(cfg: SuiteConfig) -> list[VerificationReport]:
    K = kernel_by_name(cfg.options.get("kernel", "hilbert"))
    hil = kernel_by_name("hilbert")
    target = math.log(3)
    out = []

    seq = [hormander_integral(hil, 0.0, 2.0 ** -3, reach, cpd) for reach, cpd in HORMANDER_STEPS]
    errs = [abs(v - target) / target for v in seq]
    out.append(VerificationReport(
        "hormander_convergence", params={"steps": [list(s) for s in HORMANDER_STEPS], "delta": 2.0 ** -3},
        observed={"values": seq, "rel_errors": errs},
        bound={"limit": target, "rel_tol": 0.02},
        passed=errs[-1] <= 0.02 and all(b < a for a, b in zip(errs, errs[1:]))))

    reach, cpd = HORMANDER_STEPS[-1]
    scales = {str(d): hormander_integral(hil, 0.0, d, reach, cpd) for d in (2.0 ** -2, 2.0 ** -3, 2.0 ** -4, 2.0 ** -5)}
    moved = hormander_integral(hil, 0.75, 0.75 + 2.0 ** -3, reach, cpd)
    vals = list(scales.values()) + [moved]
    spread = (max(vals) - min(vals)) / min(vals)
    out.append(VerificationReport(
        "hormander_scale", params={"deltas": list(scales), "translation": 0.75},
        observed={"values": scales, "translated": moved, "rel_spread": spread},
        bound={"rel_spread": 0.02}, passed=spread <= 0.02))

    pts = np.arange(-2 ** 6, 2 ** 6 + 1) * 2.0 ** -4
    size = kernel_size_sup(hil, pts)
    gauss = kernel_size_sup(kernel_by_name("gauss"), pts)
    out.append(VerificationReport(
        "kernel_size", params={"grid": "k/16, |k| <= 64"},
        observed={"hilbert": size, "gauss": gauss},
        bound={"hilbert": 1.0, "gauss_max": (2 * math.e) ** -0.5},
        passed=size == 1.0 and gauss <= (2 * math.e) ** -0.5))

    a_prime = max(max(vals), hormander_integral(K, 0.0, 2.0 ** -3, reach, cpd))
    n = min(cfg.cases, cfg.options.get("bad_cases", 8))
    level = min(cfg.level, 7)
    for i, f in enumerate(cp.corpus(cfg.seed, n, cfg.m, level)):
        base = float(np.sum(np.abs(f.values))) * f.cell_width / f.measure
        if base == 0:
            continue
        dec = cz_decompose(f, 2 * base)
        rep = bad_part_kernel_check(K, dec, a_prime)
        rep.params.update(case=i, kernel=K.description)
        rep.observed["good_part_ratio_r2"] = good_part_ratio(f, dec, 2.0)
        rep.observed.pop("cubes")
        out.append(rep)
    return out


def suite_zerolocal(cfg: SuiteConfig) -> list[VerificationReport]:
    rng = cp.rng_for(cfg.seed)
    out = []
    for i in range(cfg.cases):
        I0 = cp.random_interval(rng, cfg.m, cfg.level)
        f = cp.mean_zero_in(rng, I0, cfg.m, cfg.level)
        scales = sorted(rng.choice(np.arange(-cfg.m, cfg.level), size=min(4, cfg.m + cfg.level), replace=False).tolist())
        a = cp.random_coeffs(rng, scales, rows=3)
        rep = zero_locality_check(f, a, I0)
        rep.params["case"] = i
        out.append(rep)
    return out


def suite_countable(cfg: SuiteConfig) -> list[VerificationReport]:
    rng = cp.rng_for(cfg.seed)
    out = []
    for i in range(cfg.cases):
        a = cp.random_coeffs(rng, range(-cfg.m, cfg.level), rows=3)
        terms = []
        for _ in range(10):
            I = cp.random_interval(rng, cfg.m, cfg.level)
            c = float(rng.choice([-2.0, -1.0, -0.5, 0.5, 1.0, 2.0]))
            h = haar(I, cfg.m, cfg.level)
            # sign of the Haar function, so the values stay dyadic
            terms.append(StepFunction(cfg.m, cfg.level, np.sign(h.values) * c))
        terms.append(cp.random_s0(rng, cfg.m, cfg.level))
        rep = countable_subadd_check(a, terms)
        rep.params["case"] = i
        out.append(rep)
    return out


def suite_counterexample(cfg: SuiteConfig) -> list[VerificationReport]:
    if "N" in cfg.options:
        Ns = [int(cfg.options["N"])]
    else:
        Ns = list(range(1, min(8, cfg.level - 1) + 1))
    return [counterexample_demo(N, cfg.level, pairs=100, seed=cfg.seed) for N in Ns]


def suite_aoki(cfg: SuiteConfig) -> list[VerificationReport]:
    out = []
    for p, q in ((0.5, 0.5), (1.0, math.inf)):
        rng = cp.rng_for([cfg.seed, int(p * 4), 0 if math.isinf(q) else int(q * 4)])
        pool = cp.corpus(int(rng.integers(2 ** 32)), max(cfg.cases, 50), cfg.m, cfg.level)
        pairs = [(pool[i], pool[(i * 7 + 3) % len(pool)]) for i in range(len(pool))]
        pairs += [(f, -0.5 * f) for f in pool[:10]]
        k_emp = estimate_quasi_constant(pairs, (p, q))
        K = 2 * k_emp
        for i in range(cfg.cases):
            n = int(rng.integers(1, 13))
            idx = rng.integers(0, len(pool), size=n)
            fs = [pool[j] * float(rng.choice([1.0, -1.0, 0.5, 2.0])) for j in idx]
            rep = series_quasi_check(fs, (p, q), K)
            rep.params.update(case=i, K_emp=k_emp)
            out.append(rep)
    return out


def suite_yano(cfg: SuiteConfig) -> list[VerificationReport]:
    out = []
    for i, f in enumerate(cp.corpus(cfg.seed, cfg.cases, cfg.m, cfg.level, kmin=-6, kmax=3)):
        for alpha in (0.5, 1.0, 2.0):
            rep = yano_chain_check(f, alpha)
            rep.params["case"] = i
            out.append(rep)
    return out


def suite_weak11(cfg: SuiteConfig) -> list[VerificationReport]:
    levels = tuple(cfg.options.get("levels", (8, 10, 12)))
    out = [weak11_stability(levels, seed=cfg.seed)]
    rng = cp.rng_for(cfg.seed)
    level = min(cfg.level, 8)
    m = max(cfg.m, 4)
    n = min(cfg.cases, cfg.options.get("demo_cases", 10))
    for i, f in enumerate(cp.corpus(cfg.seed, n, 0, level)):
        f = f.refine(m=m)
        a = cp.random_coeffs(rng, range(0, level), rows=3)
        probes = indicator_probes(m, level, cfg.seed, max_interval_level=4, random_sets=16)
        k_s = estimate_s_norm(a, probes, 2.0)
        l1 = float(np.sum(np.abs(f.values))) * f.cell_width
        if l1 == 0:
            continue
        lams = [lam for lam in lambda_grid(l1) if lam / k_s >= l1 / f.measure]
        if not lams:
            continue
        rep = weak11_demo(a, f, float(lams[len(lams) // 2]), probes=probes)
        rep.params["case"] = i
        out.append(rep)
    return out


SUITES: dict[str, Callable[[SuiteConfig], list[VerificationReport]]] = {
    "counterexample": suite_counterexample,
    "aoki": suite_aoki,
    "nesting": suite_nesting,
    "huntsplit": suite_huntsplit,
    "cz": suite_cz,
    "hormander": suite_hormander,
    "zerolocal": suite_zerolocal,
    "countable": suite_countable,
    "yano": suite_yano,
    "weak11": suite_weak11,
    "rearrange": suite_rearrange,
    "indicator": suite_indicator,
}


def execute(cfg: SuiteConfig) -> list[VerificationReport]:
    cfg.validate()
    return SUITES[cfg.suite](cfg)


def corpus_hash(cfg: SuiteConfig) -> str:
    """Git blob hash of the canonical JSON seed block."""
    body = json.dumps(jsonable(cfg.seed_block()), sort_keys=True).encode()
    return hashlib.sha1(b"blob %d\0" % len(body) + body).hexdigest()


def payload(cfg: SuiteConfig, reports: list[VerificationReport]) -> dict:
    checks: dict[str, dict[str, int]] = {}
    for r in reports:
        for name, ok in (r.observed.get("checks") or {}).items():
            c = checks.setdefault(name, {"pass": 0, "fail": 0})
            c["pass" if ok else "fail"] += 1
    return {
        "suite": cfg.suite,
        "config": cfg.seed_block(),
        "corpus_hash": corpus_hash(cfg),
        "summary": {"reports": len(reports), "passed": sum(bool(r) for r in reports),
                    "failed": sum(not r for r in reports), "checks": checks},
        "reports": [r.to_json() for r in reports],
    }


def render(cfg: SuiteConfig, reports: list[VerificationReport]) -> str:
    if cfg.format == "csv":
        return reports_to_csv(reports)
    return dumps_reports(payload(cfg, reports))


def run_suite(cfg: SuiteConfig) -> int:
    """Run, write the report, return 0 (all pass), 1 (some failed) or 2 (bad input)."""
    try:
        reports = execute(cfg)
    except SuiteInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = render(cfg, reports)
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0 if all(reports) else 1
