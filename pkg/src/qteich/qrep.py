"""Cyclic representations of the quantum torus at a root of unity.

For ``hbar = m/n`` with ``m, n`` odd and coprime, ``q = exp(i pi m / n)``
satisfies ``q^n = -1``.  The torus acts on ``C^n`` by clock and shift
matrices; the discrete quantum dilogarithm ``L(u)`` is an ``n x n`` matrix
whose conjugation action realizes a flip, and five of them multiply to a
scalar.

Two versions of ``L`` are provided.  ``"printed"`` uses the factors
``1 + q^{2k-1} u^{1/n}``; ``"corrected"`` uses ``1 - q^{2k+1} u^{1/n}``.  Only
the corrected one satisfies the five-term identity and the matching
conjugation relations (see :func:`variant_search`, which reproduces the
finding).
"""

from __future__ import annotations

import cmath
import itertools
import math
import random
from dataclasses import dataclass
from typing import Literal

import numpy as np

Variant = Literal["printed", "corrected"]
VARIANTS: tuple[Variant, ...] = ("printed", "corrected")


class SingularParameter(ValueError):
    pass


@dataclass(frozen=True)
class CyclicRepContext:
    """``hbar = m/n``; ``q = exp(i pi m/n)``.

    Contexts with an even ``m`` or ``n`` can be built but carry
    ``in_hypothesis = False``; the pentagon checks skip them.
    """

    m: int
    n: int

    def __post_init__(self) -> None:
        if self.m <= 0 or self.n <= 0:
            raise ValueError("m and n must be positive")
        if math.gcd(self.m, self.n) != 1:
            raise ValueError(f"m={self.m} and n={self.n} must be coprime")

    @property
    def in_hypothesis(self) -> bool:
        return self.m % 2 == 1 and self.n % 2 == 1

    @property
    def hbar(self) -> float:
        return self.m / self.n

    @property
    def q(self) -> complex:
        return cmath.exp(1j * math.pi * self.m / self.n)

    def root(self, x: float) -> float:
        """Positive real ``n``-th root."""
        if not x > 0:
            raise ValueError(f"parameter must be positive, got {x!r}")
        return x ** (1.0 / self.n)


def shift_matrix(n: int) -> np.ndarray:
    """``S[i, i+1 mod n] = 1``."""
    return np.roll(np.eye(n, dtype=complex), 1, axis=1)


def clock_shift_pair(ctx: CyclicRepContext, u: float, v: float) -> tuple[np.ndarray, np.ndarray]:
    """``U = u^{1/n} S`` and ``V = v^{1/n} diag(q^{-2i})``.

    With this clock, ``V U = q^2 U V``; ``U^n = u`` and ``V^n = v``.
    """
    n = ctx.n
    U = ctx.root(u) * shift_matrix(n)
    V = ctx.root(v) * np.diag(ctx.q ** (-2 * np.arange(n)))
    return U, V


def F_discrete(ctx: CyclicRepContext, u: float, variant: Variant = "corrected") -> np.ndarray:
    """Column weights ``F(j, u)`` for ``j = 0..n-1``."""
    n, q, x = ctx.n, ctx.q, ctx.root(u)
    scale = (1 + u) ** (1.0 / n)
    out = np.ones(n, dtype=complex)
    for j in range(1, n):
        k = j - 1
        if variant == "printed":
            factor = 1 + q ** (2 * k - 1) * x
        elif variant == "corrected":
            factor = 1 - q ** (2 * k + 1) * x
        else:
            raise ValueError(f"unknown variant {variant!r}")
        if abs(factor) < 1e-14:
            raise SingularParameter(f"factor {k} vanishes at u={u!r}")
        out[j] = out[j - 1] * scale / factor
    return out


def L_matrix(ctx: CyclicRepContext, u: float, variant: Variant = "corrected") -> np.ndarray:
    """``L(u)[i, j] = F(j, u) q^{2ij}``."""
    idx = np.arange(ctx.n)
    return ctx.q ** (2 * np.outer(idx, idx)) * F_discrete(ctx, u, variant)[None, :]


def scalar_deviation(M: np.ndarray) -> float:
    """``max |M / lambda - I|`` with ``lambda`` the entry of largest modulus."""
    flat = M.reshape(-1)
    lam = flat[np.argmax(np.abs(flat))]
    if lam == 0:
        return math.inf
    return float(np.max(np.abs(M / lam - np.eye(M.shape[0]))))


def proportionality(A: np.ndarray, B: np.ndarray) -> float:
    """How far ``A`` is from a scalar multiple of ``B`` (``B`` invertible)."""
    return scalar_deviation(A @ np.linalg.inv(B))


def pentagon_arguments(u: float, v: float) -> list[float]:
    """Arguments of the five factors, leftmost first."""
    return [1 / v, 1 / (u * v) + 1 / u, v + v / u + 1 / u, v + u * v, u]


def _product(mats: list[np.ndarray]) -> np.ndarray:
    M = mats[0]
    for A in mats[1:]:
        M = M @ A
    return M


def non_dihedral_orders() -> list[list[int]]:
    """Orderings of five factors that are not rotations or reversals.

    A rotation of a product equal to a scalar is again that scalar, and the
    reversed product turns out to be scalar as well, so neither can serve as
    a negative control.
    """
    rot = {tuple((i + k) % 5 for i in range(5)) for k in range(5)}
    ref = {tuple((k - i) % 5 for i in range(5)) for k in range(5)}
    return [list(p) for p in itertools.permutations(range(5)) if p not in rot and p not in ref]


def reordered_deviation(ctx: CyclicRepContext, u: float, v: float, variant: Variant = "corrected") -> float:
    """Median deviation from a scalar over all non-dihedral factor orders."""
    mats = [L_matrix(ctx, a, variant) for a in pentagon_arguments(u, v)]
    devs = [scalar_deviation(_product([mats[i] for i in order])) for order in non_dihedral_orders()]
    return float(np.median(devs))


def pentagon_product(
    ctx: CyclicRepContext,
    u: float,
    v: float,
    variant: Variant = "corrected",
    order: list[int] | None = None,
) -> float:
    """Deviation of the five-fold product from a scalar matrix.

    ``order`` permutes the factors (default: the natural order).
    """
    mats = [L_matrix(ctx, a, variant) for a in pentagon_arguments(u, v)]
    if order is not None:
        mats = [mats[i] for i in order]
    return scalar_deviation(_product(mats))


@dataclass
class RepCheck:
    check: str
    residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return math.isfinite(self.residual) and self.residual <= self.tol


def conjugation_check(ctx: CyclicRepContext, u: float, v: float, tol: float = 1e-8) -> list[RepCheck]:
    """Conjugation by ``L(u)`` and the central characters.

    Checks, each as "is a scalar multiple of":

    * ``L V{v} L^-1 ~ U{(1+u)v}^-1`` for both variants;
    * ``L U{u} L^-1 ~ (1 + q U{(1+u)v}) V{1/u}`` for both variants;
    * ``L U{u} L^-1 ~ (1 - q U{u}) V{1/u}`` for the corrected variant;
    * ``U^n = u``, ``V^n = v``, ``((1 + qU) V)^n = (1+u) v`` and
      ``((1 - qU) V)^n = (1+u) v`` within ``1e-10``.
    """
    q = ctx.q
    I = np.eye(ctx.n)
    Uu, Vv = clock_shift_pair(ctx, u, v)
    Uw, _ = clock_shift_pair(ctx, (1 + u) * v, 1.0)
    _, Vi = clock_shift_pair(ctx, 1.0, 1 / u)
    out = []
    for variant in VARIANTS:
        L = L_matrix(ctx, u, variant)
        Li = np.linalg.inv(L)
        out.append(RepCheck(f"{variant}:LVL^-1~U((1+u)v)^-1", proportionality(L @ Vv @ Li, np.linalg.inv(Uw)), tol))
        out.append(RepCheck(f"{variant}:LUL^-1~(1+qU((1+u)v))V(1/u)", proportionality(L @ Uu @ Li, (I + q * Uw) @ Vi), tol))
    L = L_matrix(ctx, u, "corrected")
    out.append(RepCheck("corrected:LUL^-1~(1-qU(u))V(1/u)", proportionality(L @ Uu @ np.linalg.inv(L), (I - q * Uu) @ Vi), tol))
    ctol = 1e-10
    n = ctx.n

    def central(M: np.ndarray, value: float) -> float:
        P = np.linalg.matrix_power(M, n)
        return float(np.max(np.abs(P - value * I)) / max(1.0, abs(value)))

    out.append(RepCheck("U^n=u", central(Uu, u), ctol))
    out.append(RepCheck("V^n=v", central(Vv, v), ctol))
    out.append(RepCheck("((1+qU)V)^n=(1+u)v", central((I + q * Uu) @ Vv, (1 + u) * v), ctol))
    out.append(RepCheck("((1-qU)V)^n=(1+u)v", central((I - q * Uu) @ Vv, (1 + u) * v), ctol))
    return out


def torus_relation_residual(ctx: CyclicRepContext, u: float, v: float) -> float:
    """``max |q U V - q^-1 V U|``."""
    U, V = clock_shift_pair(ctx, u, v)
    q = ctx.q
    return float(np.max(np.abs(q * U @ V - V @ U / q)))


def central_pair_orbit(u: float, v: float, steps: int = 5) -> list[tuple[float, float]]:
    """Iterate ``(u, v) -> ((1+u) v, 1/u)``."""
    out = [(u, v)]
    for _ in range(steps):
        u, v = (1 + u) * v, 1 / u
        out.append((u, v))
    return out


@dataclass(frozen=True)
class VariantResult:
    sign: int  # +1 for 1 + ..., -1 for 1 - ...
    q_sign: int  # exponent direction of q in the factors
    offset: int  # factor k uses q^{q_sign (2k + offset)}
    fourier_sign: int  # L[i, j] contains q^{fourier_sign 2ij}
    reversed_order: bool
    deviation: float


def variant_search(grid: list[tuple[int, int]], samples: int = 3, seed: int = 1) -> list[VariantResult]:
    """Try sign, q-direction, index offset, Fourier sign and factor order.

    Returns every variant with its worst deviation over the grid; the
    printed variant is ``(+1, +1, -1, +1, False)``.
    """
    rng = random.Random(seed)
    pts = [(math.exp(rng.uniform(-2, 2)), math.exp(rng.uniform(-2, 2))) for _ in range(samples)]
    results = []
    for sign, qs, off, fs, rev in itertools.product((1, -1), (1, -1), (-1, 0, 1), (1, -1), (False, True)):
        worst = 0.0
        for m, n in grid:
            ctx = CyclicRepContext(m, n)
            q = ctx.q
            idx = np.arange(n)
            W = q ** (fs * 2 * np.outer(idx, idx))
            for u, v in pts:
                mats = []
                for a in pentagon_arguments(u, v):
                    x = ctx.root(a)
                    F = np.ones(n, dtype=complex)
                    for j in range(1, n):
                        F[j] = F[j - 1] * (1 + a) ** (1 / n) / (1 + sign * q ** (qs * (2 * (j - 1) + off)) * x)
                    mats.append(W * F[None, :])
                if rev:
                    mats.reverse()
                M = mats[0] @ mats[1] @ mats[2] @ mats[3] @ mats[4]
                worst = max(worst, scalar_deviation(M))
        results.append(VariantResult(sign, qs, off, fs, rev, worst))
    return results
