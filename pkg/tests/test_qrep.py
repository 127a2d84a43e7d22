import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qteich import qrep
from qteich.qrep import CyclicRepContext
from qteich.suites import REP_GRID

from oracles import clock_shift

params = st.floats(min_value=0.05, max_value=20.0)
grid = st.sampled_from(REP_GRID)


def test_context_validation():
    assert CyclicRepContext(1, 3).in_hypothesis
    assert not CyclicRepContext(2, 3).in_hypothesis
    with pytest.raises(ValueError, match="coprime"):
        CyclicRepContext(3, 9)
    with pytest.raises(ValueError):
        CyclicRepContext(0, 3)
    with pytest.raises(ValueError):
        CyclicRepContext(1, 3).root(-1.0)
    ctx = CyclicRepContext(3, 5)
    assert abs(abs(ctx.q) - 1) < 1e-15
    assert abs(ctx.q**ctx.n + 1) < 1e-12


@pytest.mark.parametrize("m, n", REP_GRID)
def test_clock_shift_pair_matches_oracle(m, n):
    ctx = CyclicRepContext(m, n)
    U, V = qrep.clock_shift_pair(ctx, 1.0, 1.0)
    Uo, Vo = clock_shift(n, ctx.q)
    assert np.allclose(U, Uo) and np.allclose(V, Vo)


def test_small_example_is_invertible():
    ctx = CyclicRepContext(1, 3)
    L = qrep.L_matrix(ctx, 1.0)
    assert np.isfinite(L).all()
    assert abs(np.linalg.det(L)) > 1e-3


def test_scaled_unitarity_does_not_hold():
    # recorded as a finding: neither variant of L is a multiple of a unitary
    rng = random.Random(4)
    for m, n in REP_GRID:
        ctx = CyclicRepContext(m, n)
        for variant in qrep.VARIANTS:
            u = rng.uniform(0.1, 10)
            L = qrep.L_matrix(ctx, u, variant)
            assert qrep.scalar_deviation(L @ L.conj().T) > 0.1


@settings(max_examples=40)
@given(grid, params, params)
def test_corrected_pentagon(mn, u, v):
    ctx = CyclicRepContext(*mn)
    assert qrep.pentagon_product(ctx, u, v, "corrected") <= 1e-8


def test_printed_factors_fail_the_pentagon():
    ctx = CyclicRepContext(1, 3)
    assert qrep.pentagon_product(ctx, 1.3, 0.7, "printed") > 0.1


def test_rotations_and_reversal_stay_scalar():
    # this is why the negative control only uses non-dihedral orders
    ctx = CyclicRepContext(3, 5)
    orders = qrep.non_dihedral_orders()
    assert len(orders) == 120 - 10
    dihedral = [list(p) for p in itertools.permutations(range(5)) if list(p) not in orders]
    for order in dihedral:
        assert qrep.pentagon_product(ctx, 1.7, 0.4, "corrected", order) <= 1e-8
    # far above the pentagon tolerance even at this unfavourable point
    assert qrep.reordered_deviation(ctx, 1.7, 0.4) >= 0.05


def test_variant_search_finds_corrected_factors():
    found = {
        (r.sign, r.q_sign, r.offset, r.fourier_sign, r.reversed_order)
        for r in qrep.variant_search(REP_GRID)
        if r.deviation <= 1e-8
    }
    assert found == {
        (-1, 1, 1, 1, False),
        (-1, 1, 1, 1, True),
        (-1, -1, 1, -1, False),
        (-1, -1, 1, -1, True),
    }
    assert (1, 1, -1, 1, False) not in found


@settings(max_examples=20)
@given(grid, params, params)
def test_conjugation_relations(mn, u, v):
    ctx = CyclicRepContext(*mn)
    res = {c.check: c for c in qrep.conjugation_check(ctx, u, v)}
    for check in (
        "corrected:LVL^-1~U((1+u)v)^-1",
        "printed:LVL^-1~U((1+u)v)^-1",
        "corrected:LUL^-1~(1-qU(u))V(1/u)",
        "U^n=u",
        "V^n=v",
        "((1-qU)V)^n=(1+u)v",
    ):
        assert res[check].passed, res[check]


def test_printed_conjugation_forms_fail():
    ctx = CyclicRepContext(1, 5)
    res = {c.check: c for c in qrep.conjugation_check(ctx, 1.3, 0.8)}
    assert not res["corrected:LUL^-1~(1+qU((1+u)v))V(1/u)"].passed
    assert not res["printed:LUL^-1~(1+qU((1+u)v))V(1/u)"].passed
    assert not res["((1+qU)V)^n=(1+u)v"].passed


@given(grid, params, params)
def test_torus_relation_and_central_orbit(mn, u, v):
    ctx = CyclicRepContext(*mn)
    assert qrep.torus_relation_residual(ctx, u, v) <= 1e-10 * max(1.0, u, v)
    orbit = qrep.central_pair_orbit(u, v)
    assert orbit[5][0] == pytest.approx(u, rel=1e-12)
    assert orbit[5][1] == pytest.approx(v, rel=1e-12)


def test_singular_parameter_detected():
    # a factor 1 - q^{2k+1} u^{1/n} vanishes only if q^{2k+1} = 1 and u = 1;
    # with m odd that never happens, with (m, n) = (2, 3) it does at k = 1
    with pytest.raises(qrep.SingularParameter):
        qrep.F_discrete(CyclicRepContext(2, 3), 1.0)
    qrep.F_discrete(CyclicRepContext(1, 3), 1.0)
