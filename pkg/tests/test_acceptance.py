"""Acceptance criteria, one test per criterion.

Each test prints a single ``[n] description: PASS|FAIL (...)`` line and
stores it for the summary shown at the end of the pytest run.  Run this file
directly (``python tests/test_acceptance.py``) to get only the table.
"""

from __future__ import annotations

import math
import random
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))

from acceptance_table import RESULTS  # noqa: E402

from qteich import coords, qdilog, qrep, qtorus, weyl  # noqa: E402
from qteich import fatgraph as fg  # noqa: E402
from qteich.fatgraph import COMMUTE, PENTAGON, SQUARE, Flip  # noqa: E402
from qteich.suites import (  # noqa: E402
    ALL_FIXTURES,
    PENTAGON_FIXTURES,
    REP_GRID,
    generic_flip_neighbourhood,
    load_fixture,
    random_coords,
)

SEED = 20240611


def _record(n: int, description: str, ok: bool, detail: str) -> None:
    line = f"[{n}] {description}: {'PASS' if ok else 'FAIL'} ({detail})"
    RESULTS[n] = line
    print(line)


def _max_diff(a, b):
    return max(abs(a[k] - b[k]) for k in a)


def _coordinate_sweep():
    """100 seeded coordinate assignments on each of the two fixture graphs."""
    rng = random.Random(SEED)
    for name in PENTAGON_FIXTURES:
        g = load_fixture(name)
        for _ in range(100):
            yield name, g, random_coords(g, rng)


def test_criterion_1_classical_pentagon():
    t0 = time.perf_counter()
    words = {}
    for name in PENTAGON_FIXTURES:
        words[name] = [fg.relation_word(r) for r in fg.relation_instances(load_fixture(name), PENTAGON)]
    worst, count = 0.0, 0
    for name, g, c in _coordinate_sweep():
        for w in words[name]:
            worst = max(worst, _max_diff(coords.evolve_word(g, c, w), c))
            count += 1
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-10 and elapsed < 1.0 and count > 0
    _record(1, "five-flip word fixes shear coordinates", ok, f"max |dz| = {worst:.3g} over {count} words, {elapsed:.2f} s")
    assert ok


def test_criterion_2_square_and_commute():
    worst_sq, worst_co, count = 0.0, 0.0, 0
    cache = {}
    for name, g, c in _coordinate_sweep():
        if name not in cache:
            cache[name] = (fg.relation_instances(g, SQUARE), fg.relation_instances(g, COMMUTE))
        squares, commutes = cache[name]
        for rel in squares:
            worst_sq = max(worst_sq, _max_diff(coords.evolve_word(g, c, fg.relation_word(rel)), c))
        for rel in commutes:
            a, b = rel.edges
            worst_co = max(worst_co, _max_diff(coords.evolve_word(g, c, fg.relation_word(rel)), c))
            ab = coords.evolve_word(g, c, [Flip(a), Flip(b)])
            ba = coords.evolve_word(g, c, [Flip(b), Flip(a)])
            worst_co = max(worst_co, _max_diff(ab, ba))
        count += 1
    ok = worst_sq <= 1e-12 and worst_co <= 1e-12
    _record(2, "flip twice and disjoint flips act trivially", ok, f"square {worst_sq:.3g}, commute {worst_co:.3g}, {count} assignments")
    assert ok


def test_criterion_3_casimirs():
    rng = random.Random(SEED)
    worst = 0.0
    integer_ok = True
    for name in ALL_FIXTURES:
        g = load_fixture(name)
        B = coords.wp_bracket(g).matrix
        integer_ok &= bool(np.isin(B, [-2, -1, 0, 1, 2]).all())
        integer_ok &= bool((B == -B.T).all())
        integer_ok &= all(not (B @ coords.face_incidence(g, f)).any() for f in g.faces)
        cur, steps = g, 0
        while steps < 1000:
            e = rng.choice(cur.labels)
            if cur.is_loop(e):
                continue
            worst = max(worst, coords.face_sums_preserved(cur, random_coords(cur, rng), e))
            # the bracket of every visited graph must also kill its faces
            cur = fg.flip(cur, e)
            Bc = coords.wp_bracket(cur).matrix
            integer_ok &= all(not (Bc @ coords.face_incidence(cur, f)).any() for f in cur.faces)
            steps += 1
    ok = worst <= 1e-10 and integer_ok
    _record(3, "face sums are flip invariant and central", ok, f"max face-sum change {worst:.3g} over 1000 flips per fixture, bracket checks {'exact' if integer_ok else 'violated'}")
    assert ok


def test_criterion_4_holonomy():
    rng = random.Random(SEED)
    worst_rel = 0.0
    for name in ALL_FIXTURES:
        g = load_fixture(name)
        for _ in range(50):
            c = random_coords(g, rng, spread=2.0)
            for f in g.faces:
                m = coords.holonomy(g, c, coords.face_path(g, f))
                tr = abs(float(np.trace(coords.normalize(m))))
                expected = 2 * math.cosh(coords.face_length(g, c, f) / 2)
                worst_rel = max(worst_rel, abs(tr - expected) / expected)
    I = np.eye(2)
    proj = max(coords.projective_distance(coords.edge_matrix(z) @ coords.edge_matrix(z), I) for z in np.linspace(-10, 10, 41))
    proj = max(proj, coords.projective_distance(np.linalg.matrix_power(coords.L_MATRIX, 3), I))
    ok = worst_rel <= 1e-9 and proj <= 1e-12
    _record(4, "face holonomy trace equals 2 cosh(l/2)", ok, f"max relative trace error {worst_rel:.3g}, X(z)^2 and L^3 off identity by {proj:.3g}")
    assert ok


def test_criterion_5_phi_identities():
    t0 = time.perf_counter()
    results = {r.name: r for r in qdilog.property_suite()}
    elapsed = time.perf_counter() - t0
    limits = {
        "classical_limit": 0.02,
        "reflection": 1e-8,
        "realness": 1e-8,
        "duality": 1e-8,
        "shift_i_pi_hbar": 1e-8,
        "shift_i_pi": 1e-8,
    }
    ok = all(results[k].residual <= v for k, v in limits.items()) and elapsed < 30
    detail = ", ".join(f"{k} {results[k].residual:.2g}" for k in limits)
    _record(5, "quantum logarithm identities", ok, f"{detail}; {elapsed:.2f} s")
    assert ok


def test_criterion_6_torus_sequence():
    t0 = time.perf_counter()
    r = qtorus.pentagon_sequence()
    elapsed = time.perf_counter() - t0
    s = r.sequence
    period = s.get(4) == qtorus.V_INV and s.get(5) == qtorus.U
    exact = all(c.passed for c in r.checks if c.kind == "exact")
    literal = [c for c in r.checks if c.kind == "literal"]
    failed = [c.check for c in literal if not c.passed]
    ok = period and exact and not failed and len(literal) == 6 and elapsed < 1.0
    detail = (
        f"U4 = V^-1 and U5 = U {'exact' if period else 'violated'}; "
        f"q U_(i+1) U_i = q^-1 U_i U_(i+1) fails for {len(failed)} of {len(literal)} pairs; {elapsed:.2f} s"
    )
    _record(6, "quantum torus sequence has period five and commutes as stated", ok, detail)
    assert ok


def test_criterion_7_weyl_chain():
    chain = weyl.pentagon_chain(assume_periodic=True)
    g = load_fixture("sphere5")
    e, s = generic_flip_neighbourhood(g)
    P = coords.wp_bracket(g)
    im = weyl.quantum_flip(weyl.identity_state(g), g, e)
    ab = weyl.commutator(im[s["A"]], im[s["B"]], P)
    ad = weyl.commutator(im[s["A"]], im[s["D"]], P)
    brackets = ab.is_zero() and ad == weyl.ScalarExpression.build(1)
    ok = chain.passed and brackets
    bad = [x.check for x in chain.entries if not x.passed]
    _record(7, "Weyl chains return after five flips; printed commutators", ok, f"chain residues {'all zero' if not bad else bad}; [A',B'] = {ab}, [A',D'] = {ad}")
    assert ok


def _rep_sweep():
    rng = random.Random(SEED)
    return {mn: [(rng.uniform(0.1, 10), rng.uniform(0.1, 10)) for _ in range(20)] for mn in REP_GRID}


def test_criterion_8_matrix_pentagon():
    t0 = time.perf_counter()
    sweep = _rep_sweep()
    worst = {"printed": 0.0, "corrected": 0.0}
    controls = []
    for (m, n), pts in sweep.items():
        ctx = qrep.CyclicRepContext(m, n)
        for u, v in pts:
            for variant in worst:
                worst[variant] = max(worst[variant], qrep.pentagon_product(ctx, u, v, variant))
            controls.append(qrep.reordered_deviation(ctx, u, v))
    control = float(np.median(controls))
    elapsed = time.perf_counter() - t0
    passing = [r for r in qrep.variant_search(REP_GRID) if r.deviation <= 1e-8]
    documented = any((r.sign, r.q_sign, r.offset, r.fourier_sign) == (-1, 1, 1, 1) for r in passing)
    ok = worst["corrected"] <= 1e-8 and control >= 0.1 and elapsed < 10 and documented
    detail = (
        f"printed factors {worst['printed']:.3g}; variant search: {len(passing)} passing variants, "
        f"adopted factors 1 - q^(2k+1) u^(1/n) give {worst['corrected']:.3g}; "
        f"reordered control median {control:.3g}; {elapsed:.2f} s"
    )
    _record(8, "five L matrices multiply to a scalar", ok, detail)
    assert ok


def test_criterion_9_conjugation():
    sweep = _rep_sweep()
    stated = [
        "corrected:LVL^-1~U((1+u)v)^-1",
        "corrected:LUL^-1~(1+qU((1+u)v))V(1/u)",
    ]
    central = ["U^n=u", "V^n=v", "((1+qU)V)^n=(1+u)v"]
    worst: dict[str, float] = {}
    for (m, n), pts in sweep.items():
        ctx = qrep.CyclicRepContext(m, n)
        for u, v in pts:
            for c in qrep.conjugation_check(ctx, u, v):
                worst[c.check] = max(worst.get(c.check, 0.0), c.residual)
    conj_ok = all(worst[k] <= 1e-8 for k in stated)
    central_ok = all(worst[k] <= 1e-10 for k in central)
    ok = conj_ok and central_ok
    detail = "; ".join(f"{k.split(':')[-1]} {worst[k]:.3g}" for k in stated + central)
    detail += f"; with 1 - qU instead: {worst['corrected:LUL^-1~(1-qU(u))V(1/u)']:.3g} and {worst['((1-qU)V)^n=(1+u)v']:.3g}"
    _record(9, "conjugation by L and central characters", ok, detail)
    assert ok


if __name__ == "__main__":
    status = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                status = 1
    sys.exit(status)
