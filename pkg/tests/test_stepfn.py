import math

import numpy as np
import pytest
from hypothesis import given, settings

from dyadic_lorentz import (
    DecreasingProfile,
    StepFunction,
    combine,
    distribution,
    indicator,
    lp_norm,
    rearrange,
)
from dyadic_lorentz.stepfn import block_sums

from conftest import dyadic_steps, step

F = step([3, 1, 0, 0])  # 3 on [0,1/4), 1 on [1/4,1/2)


def test_combine_cancellation():
    out = combine([1, -1], [F, F])
    assert np.all(out.values == 0)


def test_combine_partition_of_unity():
    out = combine([1, 1], [indicator(0, 0.5, 0, 1), indicator(0.5, 1, 0, 1)])
    assert out.equals(indicator(0, 1, 0, 0))


def test_combine_refines_then_adds():
    out = combine([2, 1], [indicator(0, 0.25, 0, 2), indicator(0, 0.5, 0, 1)])
    assert out.level == 2
    assert out.values.tolist() == [3, 1, 0, 0]


def test_combine_domain_grows():
    out = combine([1, 1], [indicator(0, 1, 0, 0), indicator(1, 2, 1, 0)])
    assert (out.m, out.values.tolist()) == (1, [1, 1])


def test_combine_length_mismatch():
    with pytest.raises(ValueError):
        combine([1, 2], [F])
    with pytest.raises(ValueError):
        combine([], [])


@pytest.mark.parametrize("s, expected", [(0.5, 0.5), (2, 0.25), (3, 0.0), (0, 0.5)])
def test_distribution(s, expected):
    assert distribution(F, s) == expected


def test_distribution_rejects_negative_level():
    with pytest.raises(ValueError):
        distribution(F, -1)


def test_rearrange_sorts_by_magnitude():
    prof = rearrange(step([1, -3, 0, 0]))
    assert prof.breakpoints.tolist() == [0, 0.25, 0.5]
    assert prof.values.tolist() == [3, 1]


def test_rearrange_zero():
    prof = rearrange(StepFunction.zeros(0, 3))
    assert len(prof) == 0
    assert prof(0.0) == 0.0


def test_rearrange_translation_invariant():
    prof = rearrange(indicator(0.5, 1, 0, 1))
    assert prof.breakpoints.tolist() == [0, 0.5]
    assert prof.values.tolist() == [1]


def test_rearrange_merges_ties():
    prof = rearrange(step([2, -2, 1, 2]))
    assert prof.values.tolist() == [2, 1]
    assert prof.breakpoints.tolist() == [0, 0.75, 1.0]


def test_profile_right_continuous():
    prof = rearrange(F)
    assert prof(0.25) == 1.0
    assert prof(0.5) == 0.0
    assert prof(0.2499) == 3.0


@pytest.mark.parametrize("f, p, expected", [
    (indicator(0, 1, 0, 0), 2, 1.0),
    (step([3, 0, 0, 0]), 1, 0.75),
    (F, math.inf, 3.0),
])
def test_lp_norm(f, p, expected):
    assert lp_norm(f, p) == expected


def test_profile_validation():
    with pytest.raises(ValueError):
        DecreasingProfile([0, 1, 1], [2, 1])
    with pytest.raises(ValueError):
        DecreasingProfile([0, 1, 2], [1, 2])


def test_stepfunction_validation():
    with pytest.raises(ValueError):
        StepFunction(0, 1, [1.0])
    with pytest.raises(ValueError):
        StepFunction(0, 0, [math.nan])
    f = StepFunction(0, 1, [1.0, 2.0])
    with pytest.raises(ValueError):
        f.values[0] = 5


def test_json_roundtrip():
    g = StepFunction.from_json(F.to_json())
    assert g.equals(F) and g.level == F.level
    with pytest.raises(ValueError):
        StepFunction.from_json({"m": 0, "values": [1]})


def test_block_sums_cancel_exactly():
    c = 0.1
    vals = np.array([c, c, c, c, -c, -c, -c, -c])
    assert block_sums(vals, 8)[0] == 0.0
    assert block_sums(np.full(8, c), 8)[0] == 8 * c


def test_evaluation_and_midpoints():
    assert F([0.1, 0.3, 0.7, 5.0, -1.0]).tolist() == [3, 1, 0, 0, 0]
    assert F.midpoints().tolist() == [0.125, 0.375, 0.625, 0.875]


@settings(max_examples=200, deadline=None)
@given(dyadic_steps())
def test_equimeasurable(f):
    prof = rearrange(f)
    vals = np.unique(np.abs(f.values))
    grid = np.concatenate([vals, (vals[:-1] + vals[1:]) / 2, [0.0, vals[-1] + 1]])
    for s in grid:
        assert distribution(f, s) == prof.distribution(s)
    assert prof.span <= f.measure


@settings(max_examples=200, deadline=None)
@given(dyadic_steps())
def test_norms_preserved(f):
    prof = rearrange(f)
    for p in (0.5, 1, 2, math.inf):
        assert lp_norm(f, p) == pytest.approx(prof.lp_norm(p), rel=1e-12, abs=0)


@settings(max_examples=100, deadline=None)
@given(dyadic_steps())
def test_distribution_monotone(f):
    grid = np.linspace(0, np.abs(f.values).max() + 1, 50)
    d = [distribution(f, s) for s in grid]
    assert all(a >= b for a, b in zip(d, d[1:]))


@settings(max_examples=100, deadline=None)
@given(dyadic_steps())
def test_combine_identity_exact(f):
    assert combine([1], [f]).equals(f)
    assert combine([1], [f.refine(f.level + 2, f.m + 1)]).equals(f)


@settings(max_examples=100, deadline=None)
@given(dyadic_steps())
def test_inf_definition(f):
    # f*(t) = inf{s : distribution(f, s) <= t}, checked against candidate levels
    prof = rearrange(f)
    cands = np.concatenate([[0.0], np.unique(np.abs(f.values))])
    for t in np.concatenate([prof.breakpoints, prof.breakpoints + 1 / 64]):
        expected = min(s for s in cands if distribution(f, s) <= t)
        assert prof(t) == expected
