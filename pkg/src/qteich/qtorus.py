"""Exact arithmetic in the quantum torus ``V U = q^2 U V``.

Elements are finite sums ``sum c_{m,n}(q) U^m V^n`` in normal order (all
``U`` to the left), with coefficients Laurent polynomials in ``q`` over the
rationals.  Reordering uses ``V^b U^c = q^{2bc} U^c V^b``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

Number = int | Fraction


class InexactDivision(ArithmeticError):
    def __init__(self, msg: str, remainder: object = None):
        super().__init__(msg)
        self.remainder = remainder


@dataclass(frozen=True)
class QPoly:
    """Laurent polynomial in ``q`` with rational coefficients."""

    terms: tuple[tuple[int, Fraction], ...] = ()

    @classmethod
    def of(cls, coeffs: Mapping[int, Number] | Iterable[tuple[int, Number]]) -> "QPoly":
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[int, Fraction] = {}
        for k, v in items:
            acc[k] = acc.get(k, Fraction(0)) + Fraction(v)
        return cls(tuple(sorted((k, v) for k, v in acc.items() if v)))

    @classmethod
    def const(cls, c: Number) -> "QPoly":
        return cls.of({0: c})

    @classmethod
    def q(cls, power: int = 1) -> "QPoly":
        return cls.of({power: 1})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other: "QPoly") -> "QPoly":
        return QPoly.of(self.terms + other.terms)

    def __neg__(self) -> "QPoly":
        return QPoly(tuple((k, -v) for k, v in self.terms))

    def __sub__(self, other: "QPoly") -> "QPoly":
        return self + (-other)

    def __mul__(self, other: "QPoly") -> "QPoly":
        return QPoly.of((a + b, x * y) for a, x in self.terms for b, y in other.terms)

    def shift(self, k: int) -> "QPoly":
        return QPoly(tuple((a + k, v) for a, v in self.terms))

    def divide(self, other: "QPoly") -> "QPoly":
        """Exact quotient in the Laurent ring, or :class:`InexactDivision`."""
        if not other:
            raise ZeroDivisionError("division by the zero polynomial")
        if len(other.terms) == 1:
            (k, c), = other.terms
            return QPoly(tuple((a - k, v / c) for a, v in self.terms))
        rem = self
        out: list[tuple[int, Fraction]] = []
        top_b, lead_b = other.terms[-1]
        low_b = other.terms[0][0]
        low_bound = self.terms[0][0] - low_b if self.terms else 0
        while rem:
            top, lead = rem.terms[-1]
            k = top - top_b
            if k < low_bound:
                raise InexactDivision(f"{self} is not divisible by {other}", rem)
            t = lead / lead_b
            out.append((k, t))
            rem = rem - other.shift(k) * QPoly.const(t)
        return QPoly.of(out)

    def __call__(self, q: complex) -> complex:
        return sum(complex(float(v)) * q**k for k, v in self.terms) if self.terms else 0j

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k, v in reversed(self.terms):
            mono = "" if k == 0 else ("q" if k == 1 else f"q^{k}")
            coeff = str(abs(v))
            body = mono if (abs(v) == 1 and mono) else (coeff if not mono else f"{coeff}*{mono}")
            parts.append(("-" if v < 0 else "+", body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s


Monomial = tuple[int, int]


@dataclass(frozen=True)
class NCLaurent:
    """``sum c_{m,n}(q) U^m V^n``, keyed by ``(m, n)``."""

    terms: tuple[tuple[Monomial, QPoly], ...] = ()

    @classmethod
    def of(cls, coeffs: Mapping[Monomial, QPoly | Number] | Iterable[tuple[Monomial, QPoly | Number]]) -> "NCLaurent":
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[Monomial, QPoly] = {}
        for key, v in items:
            p = v if isinstance(v, QPoly) else QPoly.const(v)
            acc[key] = acc.get(key, QPoly()) + p
        return cls(tuple(sorted((k, v) for k, v in acc.items() if v)))

    @classmethod
    def monomial(cls, m: int, n: int, coeff: QPoly | Number = 1) -> "NCLaurent":
        return cls.of({(m, n): coeff})

    @classmethod
    def one(cls) -> "NCLaurent":
        return cls.monomial(0, 0)

    def as_dict(self) -> dict[Monomial, QPoly]:
        return dict(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other: "NCLaurent") -> "NCLaurent":
        return NCLaurent.of(self.terms + other.terms)

    def __neg__(self) -> "NCLaurent":
        return NCLaurent(tuple((k, -v) for k, v in self.terms))

    def __sub__(self, other: "NCLaurent") -> "NCLaurent":
        return self + (-other)

    def __mul__(self, other: "NCLaurent") -> "NCLaurent":
        return multiply(self, other)

    def scale(self, c: QPoly) -> "NCLaurent":
        return NCLaurent.of((k, v * c) for k, v in self.terms)

    def lead(self) -> tuple[Monomial, QPoly]:
        return self.terms[-1]

    def trail(self) -> tuple[Monomial, QPoly]:
        return self.terms[0]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (m, n), c in self.terms:
            mono = "*".join(
                s for s in (
                    "" if m == 0 else ("U" if m == 1 else f"U^{m}"),
                    "" if n == 0 else ("V" if n == 1 else f"V^{n}"),
                ) if s
            )
            cs = str(c)
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"({cs})*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def multiply(a: NCLaurent, b: NCLaurent) -> NCLaurent:
    """Normal-ordered product: ``(U^a V^b)(U^c V^d) = q^{2bc} U^{a+c} V^{b+d}``."""
    out = []
    for (m1, n1), c1 in a.terms:
        for (m2, n2), c2 in b.terms:
            out.append(((m1 + m2, n1 + n2), (c1 * c2).shift(2 * n1 * m2)))
    return NCLaurent.of(out)


U = NCLaurent.monomial(1, 0)
V = NCLaurent.monomial(0, 1)
U_INV = NCLaurent.monomial(-1, 0)
V_INV = NCLaurent.monomial(0, -1)
Q = QPoly.q()


def exact_divide_right(c: NCLaurent, b: NCLaurent) -> NCLaurent:
    """The unique ``p`` with ``p * b == c``.

    Long division against the lexicographically largest monomial of ``b``.
    Leading monomials multiply, so the quotient's monomials lie between
    ``lead(c) - lead(b)`` and ``trail(c) - trail(b)``; once the next quotient
    term would fall below that window the division cannot be exact.
    """
    if not b:
        raise ZeroDivisionError("division by zero")
    if not c:
        return NCLaurent()
    (bm, bn), bc = b.lead()
    (tm, tn), _ = b.trail()
    (cm, cn), _ = c.trail()
    floor = (cm - tm, cn - tn)
    rem = c
    quotient: list[tuple[Monomial, QPoly]] = []
    while rem:
        (rm, rn), rc = rem.lead()
        key = (rm - bm, rn - bn)
        if key < floor:
            raise InexactDivision(f"no exact right quotient of {c} by {b}", rem)
        # t U^key * b has leading coefficient t * bc * q^{2 * key_n * bm}
        try:
            t = rc.divide(bc.shift(2 * key[1] * bm))
        except InexactDivision as exc:
            raise InexactDivision(f"no exact right quotient of {c} by {b}", rem) from exc
        term = NCLaurent.monomial(key[0], key[1], t)
        quotient.append((key, t))
        rem = rem - multiply(term, b)
    return NCLaurent.of(quotient)


def one_plus_qu(x: NCLaurent) -> NCLaurent:
    return NCLaurent.one() + x.scale(Q)


@dataclass
class TorusCheck:
    check: str
    passed: bool
    residual: str
    kind: str  # "exact", "period", "literal" or "mirror"


@dataclass
class TorusReport:
    sequence: dict[int, NCLaurent]
    checks: list[TorusCheck]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> list[TorusCheck]:
        return [c for c in self.checks if not c.passed]


def pentagon_sequence(steps: int = 5) -> TorusReport:
    """Iterate ``U_{i+1} = (1 + q U_i) U_{i-1}^{-1}`` from ``U_{-1} = V^{-1}``, ``U_0 = U``.

    Checks five-periodicity and two orderings of the commutation between
    neighbours: ``q U_{i+1} U_i = q^{-1} U_i U_{i+1}`` and the mirrored
    ``q U_i U_{i+1} = q^{-1} U_{i+1} U_i``.  In this algebra only the
    mirrored one can hold (it is the defining relation at ``i = -1``).
    """
    seq: dict[int, NCLaurent] = {-1: V_INV, 0: U}
    checks: list[TorusCheck] = []
    for i in range(0, steps):
        try:
            seq[i + 1] = exact_divide_right(one_plus_qu(seq[i]), seq[i - 1])
        except InexactDivision as exc:
            checks.append(TorusCheck(f"exact[U{i + 1}]", False, str(exc.remainder), "exact"))
            return TorusReport(seq, checks)
        checks.append(TorusCheck(f"exact[U{i + 1}]", True, "0", "exact"))
    if steps >= 5:
        for i, j in ((4, -1), (5, 0)):
            diff = seq[i] - seq[j]
            checks.append(TorusCheck(f"U{i}=U{j}", not diff, str(diff), "period"))
    q, qi = Q, QPoly.q(-1)
    for i in range(-1, steps):
        a, b = seq[i], seq[i + 1]
        lit = (b * a).scale(q) - (a * b).scale(qi)
        checks.append(TorusCheck(f"qU{i + 1}U{i}=q^-1U{i}U{i + 1}", not lit, str(lit), "literal"))
        mir = (a * b).scale(q) - (b * a).scale(qi)
        checks.append(TorusCheck(f"qU{i}U{i + 1}=q^-1U{i + 1}U{i}", not mir, str(mir), "mirror"))
    return TorusReport(seq, checks)


def evaluate(x: NCLaurent, q: complex, u_mat: np.ndarray, v_mat: np.ndarray) -> np.ndarray:
    """Image under ``U -> u_mat``, ``V -> v_mat`` at the number ``q``."""
    n = u_mat.shape[0]
    out = np.zeros((n, n), dtype=complex)
    for (m, k), c in x.terms:
        mu = np.linalg.matrix_power(u_mat, m) if m >= 0 else np.linalg.matrix_power(np.linalg.inv(u_mat), -m)
        mv = np.linalg.matrix_power(v_mat, k) if k >= 0 else np.linalg.matrix_power(np.linalg.inv(v_mat), -k)
        out += c(q) * (mu @ mv)
    return out
