"""Formal algebra of quantum shear generators.

Generators ``Z_a`` (one per edge label) have scalar commutators
``[Z_a, Z_b] = 2 pi i hbar {z_a, z_b}``.  Expressions are linear forms in the
generators plus formal terms ``phi(W)`` with ``W`` a linear form.  Nothing is
evaluated numerically; the only identities used are

* ``phi(W) - phi(-W) = W`` (used to put every argument in canonical sign), and
* its derivative ``phi'(W) + phi'(-W) = 1``.

Scalars are stored in units of ``2 pi i hbar``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .coords import PoissonMatrix, wp_bracket
from .fatgraph import FatGraph, flip, flip_slots, match_faces_through_flip

Number = int | Fraction

# kind of a phi-term: the quantum logarithm at hbar, or at 1/hbar
HBAR = "hbar"
DUAL = "dual"


class NotReducible(ValueError):
    """A commutator that is not a scalar under the available rules."""


def _frac(x: Number) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True, order=True)
class LinearForm:
    """Rational combination of generators, stored sorted and without zeros."""

    terms: tuple[tuple[str, Fraction], ...] = ()

    @classmethod
    def of(cls, coeffs: Mapping[str, Number]) -> "LinearForm":
        return cls(tuple(sorted((k, _frac(v)) for k, v in coeffs.items() if v)))

    @classmethod
    def gen(cls, label: str) -> "LinearForm":
        return cls(((label, Fraction(1)),))

    def as_dict(self) -> dict[str, Fraction]:
        return dict(self.terms)

    def __add__(self, other: "LinearForm") -> "LinearForm":
        d = self.as_dict()
        for k, v in other.terms:
            d[k] = d.get(k, Fraction(0)) + v
        return LinearForm.of(d)

    def __neg__(self) -> "LinearForm":
        return LinearForm(tuple((k, -v) for k, v in self.terms))

    def __sub__(self, other: "LinearForm") -> "LinearForm":
        return self + (-other)

    def scale(self, c: Number) -> "LinearForm":
        return LinearForm.of({k: v * c for k, v in self.terms})

    def rename(self, f: Callable[[str], str]) -> "LinearForm":
        d: dict[str, Fraction] = {}
        for k, v in self.terms:
            d[f(k)] = d.get(f(k), Fraction(0)) + v
        return LinearForm.of(d)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_positive(self) -> bool:
        """True if the first nonzero coefficient is positive."""
        return bool(self.terms) and self.terms[0][1] > 0

    def __str__(self) -> str:
        return _fmt_linear(self.terms) or "0"


def _fmt_coeff(c: Fraction, name: str, first: bool) -> str:
    sign = "-" if c < 0 else ("" if first else "+")
    a = abs(c)
    body = name if a == 1 else f"{a}*{name}"
    return f"{sign}{body}" if first else f" {sign} {body}"


def _fmt_linear(terms: Iterable[tuple[str, Fraction]]) -> str:
    out = ""
    for k, v in terms:
        out += _fmt_coeff(v, k, not out)
    return out


PhiKey = tuple[LinearForm, str]


@dataclass(frozen=True)
class WeylExpression:
    """``linear + const * 2 pi i hbar + sum coeff * phi_kind(arg)``.

    Every argument is kept with positive leading coefficient; a term with a
    negative argument is rewritten through ``phi(W) = phi(-W) + W``.  With
    that normal form, equality of expressions is equality of the fields.
    """

    linear: LinearForm = LinearForm()
    const: Fraction = Fraction(0)
    phis: tuple[tuple[PhiKey, Fraction], ...] = ()

    @classmethod
    def build(
        cls,
        linear: LinearForm | Mapping[str, Number] = LinearForm(),
        const: Number = 0,
        phis: Iterable[tuple[PhiKey, Number]] = (),
    ) -> "WeylExpression":
        lin = linear if isinstance(linear, LinearForm) else LinearForm.of(linear)
        acc: dict[PhiKey, Fraction] = {}
        for (arg, kind), c in phis:
            c = _frac(c)
            if not c:
                continue
            if not arg:
                raise ValueError("phi of the zero form is a scalar; not supported")
            if not arg.is_positive():
                lin = lin + arg.scale(c)
                arg = -arg
            acc[(arg, kind)] = acc.get((arg, kind), Fraction(0)) + c
        items = tuple(sorted((k, v) for k, v in acc.items() if v))
        return cls(lin, _frac(const), items)

    @classmethod
    def gen(cls, label: str) -> "WeylExpression":
        return cls(LinearForm.gen(label))

    @classmethod
    def from_linear(cls, lf: LinearForm) -> "WeylExpression":
        return cls(lf)

    @classmethod
    def phi(cls, arg: LinearForm | "WeylExpression", kind: str = HBAR) -> "WeylExpression":
        return cls.build(phis=[((_as_form(arg), kind), 1)])

    def __add__(self, other: "WeylExpression") -> "WeylExpression":
        return WeylExpression.build(self.linear + other.linear, self.const + other.const, self.phis + other.phis)

    def __neg__(self) -> "WeylExpression":
        return self.scale(-1)

    def __sub__(self, other: "WeylExpression") -> "WeylExpression":
        return self + (-other)

    def scale(self, c: Number) -> "WeylExpression":
        return WeylExpression.build(self.linear.scale(c), self.const * c, [(k, v * c) for k, v in self.phis])

    def is_linear(self) -> bool:
        return not self.phis and not self.const

    def __str__(self) -> str:
        out = _fmt_linear(self.linear.terms)
        for (arg, kind), c in self.phis:
            name = ("phi" if kind == HBAR else "phi~") + f"({arg})"
            out += _fmt_coeff(c, name, not out)
        if self.const:
            out += _fmt_coeff(self.const, "2*pi*i*hbar", not out)
        return out or "0"


def _as_form(x: LinearForm | WeylExpression) -> LinearForm:
    if isinstance(x, LinearForm):
        return x
    if not x.is_linear():
        raise NotReducible(f"phi argument {x} is not a linear form in the generators")
    return x.linear


@dataclass(frozen=True)
class ScalarExpression:
    """``(const + sum coeff * phi'_kind(W)) * 2 pi i hbar`` in normal form.

    ``phi'(-W)`` is rewritten as ``1 - phi'(W)`` so only positive arguments
    occur.
    """

    const: Fraction = Fraction(0)
    primes: tuple[tuple[PhiKey, Fraction], ...] = ()

    @classmethod
    def build(cls, const: Number = 0, primes: Iterable[tuple[PhiKey, Number]] = ()) -> "ScalarExpression":
        k0 = _frac(const)
        acc: dict[PhiKey, Fraction] = {}
        for (arg, kind), c in primes:
            c = _frac(c)
            if not c:
                continue
            if not arg.is_positive():
                k0 += c
                c = -c
                arg = -arg
            acc[(arg, kind)] = acc.get((arg, kind), Fraction(0)) + c
        return cls(k0, tuple(sorted((k, v) for k, v in acc.items() if v)))

    def __add__(self, other: "ScalarExpression") -> "ScalarExpression":
        return ScalarExpression.build(self.const + other.const, self.primes + other.primes)

    def __neg__(self) -> "ScalarExpression":
        return ScalarExpression.build(-self.const, [(k, -v) for k, v in self.primes])

    def __sub__(self, other: "ScalarExpression") -> "ScalarExpression":
        return self + (-other)

    def is_zero(self) -> bool:
        return not self.const and not self.primes

    def is_constant(self) -> bool:
        return not self.primes

    def __str__(self) -> str:
        out = ""
        if self.const:
            out = str(self.const)
        for (arg, kind), c in self.primes:
            name = ("phi'" if kind == HBAR else "phi~'") + f"({arg})"
            out += _fmt_coeff(c, name, not out)
        return f"({out or '0'})*2*pi*i*hbar"


def commutator(e1: WeylExpression, e2: WeylExpression, P: PoissonMatrix) -> ScalarExpression:
    """``[e1, e2]`` in units of ``2 pi i hbar``.

    Uses ``[L, phi(W)] = [L, W] phi'(W)``, valid because ``[L, W]`` is central.
    Two phi-terms commute when their arguments do; otherwise the commutator is
    not a scalar and :class:`NotReducible` is raised.
    """
    lin = lambda a, b: Fraction(P.pair(a.as_dict(), b.as_dict()))  # noqa: E731
    const = lin(e1.linear, e2.linear)
    primes: list[tuple[PhiKey, Fraction]] = []
    for key, c in e2.phis:
        primes.append((key, c * lin(e1.linear, key[0])))
    for key, c in e1.phis:
        primes.append((key, -c * lin(e2.linear, key[0])))
    for (w1, _), _c1 in e1.phis:
        for (w2, _), _c2 in e2.phis:
            if lin(w1, w2):
                raise NotReducible(f"[phi({w1}), phi({w2})] has non-commuting arguments")
    return ScalarExpression.build(const, primes)


# -- quantum flips ------------------------------------------------------------

State = dict[str, WeylExpression]

SLOT_SIGNS = {"A": 1, "B": -1, "C": 1, "D": -1}


def identity_state(g: FatGraph) -> State:
    return {lab: WeylExpression.gen(lab) for lab in g.labels}


def quantum_flip(state: Mapping[str, WeylExpression], g: FatGraph, edge: str, kind: str = HBAR) -> State:
    """Images of the generators after flipping ``edge`` of ``g``.

    ``A, C`` gain ``phi(Z)``, ``B, D`` lose ``phi(-Z)``, ``Z`` becomes ``-Z``;
    an edge filling two slots collects both terms.
    """
    slots = flip_slots(g, edge)
    z = _as_form(state[edge])
    out = dict(state)
    plus = WeylExpression.phi(z, kind)
    minus = WeylExpression.phi(-z, kind)
    for name, h in slots.items():
        lab = g.label_of(h)
        if lab == edge:
            continue
        out[lab] = out[lab] + (plus if SLOT_SIGNS[name] > 0 else -minus)
    out[edge] = -state[edge]
    return out


@dataclass
class CheckEntry:
    check: str
    passed: bool
    residual: str
    detail: str = ""


@dataclass
class SymbolicReport:
    name: str
    entries: list[CheckEntry] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def add(self, check: str, passed: bool, residual: object, detail: str = "") -> None:
        self.entries.append(CheckEntry(check, passed, str(residual), detail))


def center_image(g: FatGraph, face: Iterable[int], state: Mapping[str, WeylExpression]) -> WeylExpression:
    """Sum of the current expressions along a face (visits counted)."""
    total = WeylExpression()
    for h in face:
        total = total + state[g.label_of(h)]
    return total


def verify_flip_is_morphism(g: FatGraph, edge: str, P: PoissonMatrix | None = None) -> SymbolicReport:
    """Check that flipping ``edge`` respects commutators, reality and the center.

    For every pair of edges the commutator of the images (old bracket) must be
    the constant given by the bracket of the flipped graph.
    """
    P = P if P is not None else wp_bracket(g)
    g2 = flip(g, edge)
    P_new = wp_bracket(g2)
    images = quantum_flip(identity_state(g), g, edge)
    rep = SymbolicReport(f"flip-morphism:{edge}")
    labels = g.labels
    for i, a in enumerate(labels):
        for b in labels[i:]:
            try:
                got = commutator(images[a], images[b], P)
            except NotReducible as exc:
                rep.add(f"bracket[{a},{b}]", False, "not reducible", str(exc))
                continue
            residual = got - ScalarExpression.build(P_new[a, b])
            rep.add(f"bracket[{a},{b}]", residual.is_zero(), residual, f"image commutator {got}")
    for a in labels:
        rep.add(f"reality[{a}]", images[a].const == 0, images[a].const)
    start = identity_state(g)
    for i, j in match_faces_through_flip(g, edge).items():
        before = center_image(g, g.faces[i], start)
        after = center_image(g2, g2.faces[j], images)
        diff = after - before
        rep.add(f"center[face {i}]", diff == WeylExpression(), diff)
    return rep


# -- hbar <-> 1/hbar duality --------------------------------------------------


def dual_name(label: str) -> str:
    return label[:-1] if label.endswith("~") else label + "~"


def dualize(e: WeylExpression) -> WeylExpression:
    """Divide by ``hbar`` and rewrite ``phi_hbar(W)/hbar = phi_{1/hbar}(W/hbar)``.

    Generators ``Z`` become ``Z~ = Z/hbar`` and the two kinds of phi-term swap.
    """
    if e.const:
        raise NotReducible("scalar part has no rational image under hbar -> 1/hbar")
    swap = {HBAR: DUAL, DUAL: HBAR}
    return WeylExpression.build(
        e.linear.rename(dual_name),
        0,
        [((arg.rename(dual_name), swap[kind]), c) for (arg, kind), c in e.phis],
    )


def check_duality_commutes(g: FatGraph, edge: str) -> SymbolicReport:
    rep = SymbolicReport(f"duality:{edge}")
    start = identity_state(g)
    via_flip = {k: dualize(v) for k, v in quantum_flip(start, g, edge, HBAR).items()}
    dual_start = {k: dualize(v) for k, v in start.items()}
    via_dual = quantum_flip(dual_start, g, edge, DUAL)
    for lab in g.labels:
        diff = via_flip[lab] - via_dual[lab]
        rep.add(f"duality[{lab}]", diff == WeylExpression(), diff)
    return rep


# -- the five-flip chain ------------------------------------------------------


def X(i: int) -> str:
    return f"X{i}"


def _index(label: str) -> int | None:
    if label.startswith("X"):
        try:
            return int(label[1:])
        except ValueError:
            return None
    return None


def rewrite_phi(e: WeylExpression, order: list[int] | None = None) -> WeylExpression:
    """Eliminate ``phi(X_i)`` through ``phi(X_i) = X_i - X_{i+1} - X_{i-1}``.

    ``phi(-X_i)`` needs no separate rule: in normal form it is already
    ``phi(X_i) - X_i``.  Terms whose argument is not a single ``X_i`` are left
    in place.  ``order`` permutes the order in which terms are visited.
    """
    terms = list(e.phis)
    idx = order if order is not None else list(range(len(terms)))
    cur = WeylExpression(e.linear, e.const, ())
    rest = []
    for k in idx:
        (arg, kind), c = terms[k]
        i = _index(arg.terms[0][0]) if len(arg.terms) == 1 and arg.terms[0][1] == 1 else None
        if kind == HBAR and i is not None:
            lf = LinearForm.of({X(i): 1}) - LinearForm.of({X(i + 1): 1}) - LinearForm.of({X(i - 1): 1})
            cur = cur + WeylExpression(lf.scale(c))
        else:
            rest.append(((arg, kind), c))
    return cur + WeylExpression.build(phis=rest)


def reduce_periodic(e: WeylExpression, period: int = 5, base: int = -1) -> WeylExpression:
    """Identify ``X_{i+period}`` with ``X_i``, choosing indices in ``[base, base+period)``."""

    def canon(label: str) -> str:
        i = _index(label)
        if i is None:
            return label
        return X((i - base) % period + base)

    return WeylExpression.build(
        e.linear.rename(canon), e.const, [((arg.rename(canon), kind), c) for (arg, kind), c in e.phis]
    )


CHAIN_NAMES = ("A", "B", "C", "D", "E", "Y")


def chain_step(s: Mapping[str, WeylExpression], i: int) -> dict[str, WeylExpression]:
    """One flip of the five-edge configuration, stated with the symbol ``X_i``."""
    x = WeylExpression.gen(X(i))
    p_plus = WeylExpression.phi(x)
    p_minus = WeylExpression.phi(-x)
    return {
        "A": s["D"],
        "B": s["E"],
        "C": s["A"] + p_plus,
        "D": s["B"] - p_minus,
        "E": s["C"] + p_plus,
        "Y": -x,
        # the recursion that defines X_{i+1}; it is what justifies the rewrite
        "Xnext": s["Y"] - p_minus,
    }


def chain_initial() -> dict[str, WeylExpression]:
    s = {k: WeylExpression.gen(f"{k}0") for k in "ABCDE"}
    s["Y"] = -WeylExpression.gen(X(-1))
    return s


def pentagon_chain(assume_periodic: bool = True, rng: random.Random | None = None) -> SymbolicReport:
    """Run five steps and reduce every chain back to its start.

    With ``assume_periodic=False`` the residues ``X_{i+4} - X_{i-1}`` remain.
    ``rng`` shuffles the order of rewrite applications (the result must not
    depend on it).
    """
    rep = SymbolicReport("weyl-pentagon")
    s = chain_initial()
    start = dict(s)
    for i in range(5):
        new = chain_step(s, i)
        # consistency of the rewrite rule with the recursion for X_{i+1}
        defined = rewrite_phi(new.pop("Xnext"))
        rep.add(f"recursion[X{i + 1}]", defined == WeylExpression.gen(X(i + 1)), defined - WeylExpression.gen(X(i + 1)))
        s = new
    for name in CHAIN_NAMES:
        e = s[name]
        order = None
        if rng is not None:
            order = list(range(len(e.phis)))
            rng.shuffle(order)
        reduced = rewrite_phi(e, order)
        residue = reduced - start[name]
        if assume_periodic:
            residue = reduce_periodic(residue)
        rep.add(f"{name}5={name}0", residue == WeylExpression(), residue, f"{name}5 = {reduced}")
    return rep
