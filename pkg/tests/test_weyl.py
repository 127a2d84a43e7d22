import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qteich import coords, weyl
from qteich import fatgraph as fg
from qteich.suites import generic_flip_neighbourhood, load_fixture
from qteich.weyl import LinearForm, NotReducible, ScalarExpression, WeylExpression

seeds = st.integers(min_value=0, max_value=2**32 - 1)
# up to 8 vertices, i.e. up to 12 edges
sizes = st.integers(min_value=1, max_value=4).map(lambda k: 2 * k)

W = WeylExpression


def test_normal_form_moves_sign_into_linear_part():
    z = LinearForm.gen("Z")
    a = W.phi(-z)
    b = W.phi(z) - W.gen("Z")
    assert a == b
    assert W.phi(z) - W.phi(-z) == W.gen("Z")


def test_zero_argument_rejected():
    with pytest.raises(ValueError):
        W.phi(LinearForm())


def test_commutator_of_generator_with_itself():
    P = coords.wp_bracket(fg.theta_graph(twisted=False))
    assert weyl.commutator(W.gen("e1"), W.gen("e1"), P).is_zero()


def test_scalar_expression_rule():
    w = LinearForm.gen("Z")
    s = ScalarExpression.build(0, [((w, weyl.HBAR), 1), ((-w, weyl.HBAR), 1)])
    assert s == ScalarExpression.build(1)


def test_printed_commutators_on_generic_neighbourhood():
    g = load_fixture("sphere5")
    e, s = generic_flip_neighbourhood(g)
    P = coords.wp_bracket(g)
    im = weyl.quantum_flip(weyl.identity_state(g), g, e)
    assert im[s["A"]] == W.gen(s["A"]) + W.phi(LinearForm.gen(e))
    assert im[s["B"]] == W.gen(s["B"]) - W.phi(-LinearForm.gen(e))
    assert im[e] == -W.gen(e)
    assert weyl.commutator(im[s["A"]], im[s["B"]], P).is_zero()
    assert weyl.commutator(im[s["A"]], im[s["D"]], P) == ScalarExpression.build(1)


def test_non_commuting_phi_arguments_are_rejected():
    P = coords.wp_bracket(fg.theta_graph(twisted=False))
    with pytest.raises(NotReducible):
        weyl.commutator(W.phi(LinearForm.gen("e1")), W.phi(LinearForm.gen("e2")), P)


def _brute_commutator(e1, e2, P):
    """Expand bilinearly with ``[phi(U), phi(W)] = 0`` when ``[U, W] = 0``."""
    const = Fraction(P.pair(e1.linear.as_dict(), e2.linear.as_dict()))
    primes = {}
    for (w, kind), c in e2.phis:
        primes[(w, kind)] = primes.get((w, kind), 0) + c * P.pair(e1.linear.as_dict(), w.as_dict())
    for (w, kind), c in e1.phis:
        primes[(w, kind)] = primes.get((w, kind), 0) - c * P.pair(e2.linear.as_dict(), w.as_dict())
    return ScalarExpression.build(const, primes.items())


def test_degenerate_neighbourhood_accumulates():
    # on the one-holed torus both neighbours of e1 fill two slots each
    g = fg.theta_graph(twisted=False)
    slots = {k: g.label_of(h) for k, h in fg.flip_slots(g, "e1").items()}
    assert len(set(slots.values())) == 2
    im = weyl.quantum_flip(weyl.identity_state(g), g, "e1")
    z = LinearForm.gen("e1")
    for lab in ("e2", "e3"):
        plus = sum(1 for k in "AC" if slots[k] == lab)
        minus = sum(1 for k in "BD" if slots[k] == lab)
        assert plus + minus == 2
        assert im[lab] == W.gen(lab) + W.phi(z).scale(plus) - W.phi(-z).scale(minus)
    r = weyl.verify_flip_is_morphism(g, "e1")
    assert r.passed
    P = coords.wp_bracket(g)
    P2 = coords.wp_bracket(fg.flip(g, "e1"))
    for a in g.labels:
        for b in g.labels:
            got = _brute_commutator(im[a], im[b], P)
            assert got == ScalarExpression.build(P2[a, b])
    assert W.phi(z) != W.gen("e1")


@given(seeds, sizes)
def test_flip_is_algebra_morphism_on_random_graphs(seed, n):
    rng = random.Random(seed)
    g = fg.random_trivalent(n, rng)
    edges = [e for e in g.labels if not g.is_loop(e)]
    if not edges:
        return
    e = rng.choice(edges)
    r = weyl.verify_flip_is_morphism(g, e)
    assert r.passed, [x for x in r.entries if not x.passed]
    assert any(x.check.startswith("center[") for x in r.entries)


@given(seeds, sizes)
def test_flip_twice_and_disjoint_flips(seed, n):
    rng = random.Random(seed)
    g = fg.random_trivalent(n, rng)
    st0 = weyl.identity_state(g)
    for e in g.labels:
        if g.is_loop(e):
            continue
        twice = weyl.quantum_flip(weyl.quantum_flip(st0, g, e), fg.flip(g, e), e)
        assert twice == st0
    for rel in fg.relation_instances(g, fg.COMMUTE)[:4]:
        a, b = rel.edges
        ab = weyl.quantum_flip(weyl.quantum_flip(st0, g, a), fg.flip(g, a), b)
        ba = weyl.quantum_flip(weyl.quantum_flip(st0, g, b), fg.flip(g, b), a)
        assert ab == ba


@given(seeds, sizes)
def test_face_sums_are_central(seed, n):
    g = fg.random_trivalent(n, random.Random(seed))
    P = coords.wp_bracket(g)
    st0 = weyl.identity_state(g)
    for f in g.faces:
        c = weyl.center_image(g, f, st0)
        for lab in g.labels:
            assert weyl.commutator(c, W.gen(lab), P).is_zero()


@given(seeds, sizes)
def test_duality_commutes_with_flip(seed, n):
    rng = random.Random(seed)
    g = fg.random_trivalent(n, rng)
    edges = [e for e in g.labels if not g.is_loop(e)]
    if edges:
        assert weyl.check_duality_commutes(g, rng.choice(edges)).passed


def test_dualize_is_an_involution_and_rejects_scalars():
    z = LinearForm.of({"a": 1, "b": -2})
    e = W.gen("a") + W.phi(z) - W.phi(-z, weyl.DUAL)
    assert weyl.dualize(weyl.dualize(e)) == e
    with pytest.raises(NotReducible):
        weyl.dualize(W.build(const=1))


def test_pentagon_chain_closes_with_periodicity():
    r = weyl.pentagon_chain(assume_periodic=True)
    assert r.passed
    names = {e.check for e in r.entries}
    assert {f"{k}5={k}0" for k in weyl.CHAIN_NAMES} <= names
    assert {f"recursion[X{i}]" for i in range(1, 6)} <= names


def test_pentagon_chain_residue_without_periodicity():
    r = weyl.pentagon_chain(assume_periodic=False)
    res = {e.check: e.residual for e in r.entries}
    assert res["A5=A0"] == "-X-1 + X4"
    assert res["Y5=Y0"] == "X-1 - X4"
    assert not r.passed


@given(seeds)
def test_rewrite_order_does_not_matter(seed):
    rng = random.Random(seed)
    base = weyl.pentagon_chain(assume_periodic=False)
    shuffled = weyl.pentagon_chain(assume_periodic=False, rng=rng)
    assert [e.residual for e in base.entries] == [e.residual for e in shuffled.entries]


def test_reduce_periodic_window():
    e = W.gen("X4") - W.gen("X-1") + W.gen("X9")
    assert weyl.reduce_periodic(e) == W.gen("X-1")
