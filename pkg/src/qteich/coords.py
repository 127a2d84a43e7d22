"""Shear coordinates on edges, their flip transformations, holonomy and the
Weil-Petersson bracket."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence, Union

import numpy as np

from .fatgraph import (
    FatGraph,
    Flip,
    MoveError,
    MoveWord,
    ParseError,
    Symmetry,
    apply_move,
    flip,
    flip_slots,
    format_float,
    match_faces_through_flip,
)

EdgeCoordinates = dict[str, float]

# sign with which each neighbour slot picks up phi(+z) or phi(-z)
SLOT_SIGNS = {"A": 1, "B": -1, "C": 1, "D": -1}


def classical_phi(z: float) -> float:
    """``log(exp(z) + 1)`` without overflow."""
    if z > 0:
        return z + math.log1p(math.exp(-z))
    return math.log1p(math.exp(z))


def _check_coords(g: FatGraph, c: Mapping[str, float]) -> None:
    if set(c) != set(g.labels):
        missing = sorted(set(g.labels) - set(c))
        extra = sorted(set(c) - set(g.labels))
        raise ValueError(f"coordinates do not match the edges (missing {missing}, extra {extra})")
    for lab, x in c.items():
        if not math.isfinite(x):
            raise ValueError(f"coordinate of {lab!r} is not finite")


def classical_flip(g: FatGraph, c: Mapping[str, float], edge: str) -> EdgeCoordinates:
    """Coordinates after flipping ``edge``; all updates use the old value of ``z``.

    If one edge fills two of the four neighbour slots, it receives both
    contributions.
    """
    _check_coords(g, c)
    slots = flip_slots(g, edge)
    z = c[edge]
    gain, loss = classical_phi(z), classical_phi(-z)
    out = dict(c)
    for name, h in slots.items():
        lab = g.label_of(h)
        if lab == edge:
            continue
        out[lab] += gain if SLOT_SIGNS[name] > 0 else -loss
    out[edge] = -z
    return out


def evolve_word(g: FatGraph, c: Mapping[str, float], word: MoveWord) -> EdgeCoordinates:
    """Push coordinates along a word; the graph travels with them."""
    cur = dict(c)
    for i, move in enumerate(word):
        try:
            if isinstance(move, Flip):
                cur = classical_flip(g, cur, move.label)
            else:
                mapping = move.as_dict()
                cur = {mapping.get(k, k): v for k, v in cur.items()}
            g = apply_move(g, move)
        except (ValueError, KeyError) as exc:
            if isinstance(exc, MoveError):
                raise
            raise MoveError(i, str(exc).strip("'\"")) from exc
    return cur


def face_sum(g: FatGraph, c: Mapping[str, float], face: Sequence[int]) -> float:
    """Signed sum of coordinates along a face; repeated visits count again."""
    return math.fsum(c[g.label_of(h)] for h in face)


def face_length(g: FatGraph, c: Mapping[str, float], face: Sequence[int]) -> float:
    """Length of the geodesic around the hole bounded by ``face``."""
    return abs(face_sum(g, c, face))


def face_sums_preserved(g: FatGraph, c: Mapping[str, float], edge: str) -> float:
    """Largest change of a face sum across a flip (faces matched through it)."""
    g2 = flip(g, edge)
    c2 = classical_flip(g, c, edge)
    worst = 0.0
    for i, j in match_faces_through_flip(g, edge).items():
        worst = max(worst, abs(face_sum(g, c, g.faces[i]) - face_sum(g2, c2, g2.faces[j])))
    return worst


# -- holonomy -----------------------------------------------------------------

L_MATRIX = np.array([[1.0, 1.0], [-1.0, 0.0]])
L_INVERSE = np.array([[0.0, -1.0], [1.0, 1.0]])


def edge_matrix(z: float) -> np.ndarray:
    """``X(z)``; its square is ``-I``, the identity of PSL(2, R)."""
    return np.array([[0.0, math.exp(z / 2)], [-math.exp(-z / 2), 0.0]])


@dataclass(frozen=True)
class LongEdge:
    label: str


@dataclass(frozen=True)
class Turn:
    """Turn at the current vertex; ``positive`` goes clockwise, to the right."""

    positive: bool = True


TurnPositive = Turn(True)
TurnNegative = Turn(False)
Step = Union[LongEdge, Turn]


@dataclass(frozen=True)
class GraphPath:
    """A path of the auxiliary graph, starting at the corner of half-edge ``start``.

    A position is a half-edge (the end of an edge at a vertex).  A long edge
    moves to the other end of the same edge, a turn moves to a neighbouring
    half-edge at the same vertex.
    """

    start: int
    steps: tuple[Step, ...]


class PathError(ValueError):
    pass


def walk(g: FatGraph, path: GraphPath) -> int:
    """Check a path and return its final position."""
    h = path.start
    if not 0 <= h < g.num_half_edges:
        raise PathError(f"start half-edge {h} out of range")
    for i, step in enumerate(path.steps):
        if isinstance(step, LongEdge):
            if g.label_of(h) != step.label:
                raise PathError(f"step {i}: edge {step.label!r} does not start at the current corner")
            h ^= 1
        elif isinstance(step, Turn):
            h = g.vp_inv[h] if step.positive else g.vp[h]
        else:
            raise PathError(f"step {i}: unknown step {step!r}")
    return h


def holonomy(g: FatGraph, c: Mapping[str, float], path: GraphPath) -> np.ndarray:
    """Ordered product ``X_N ... X_1`` of the step matrices along ``path``."""
    walk(g, path)
    m = np.eye(2)
    for step in path.steps:
        if isinstance(step, LongEdge):
            m = edge_matrix(c[step.label]) @ m
        else:
            m = (L_MATRIX if step.positive else L_INVERSE) @ m
    return m


def face_path(g: FatGraph, face: Sequence[int]) -> GraphPath:
    """Closed path running once around a face: long edge, right turn, repeated."""
    steps: list[Step] = []
    for h in face:
        steps.append(LongEdge(g.label_of(h)))
        steps.append(TurnPositive)
    return GraphPath(face[0], tuple(steps))


def normalize(m: np.ndarray) -> np.ndarray:
    d = float(np.linalg.det(m))
    if d == 0 or not math.isfinite(d):
        raise ValueError("singular matrix")
    return m / math.sqrt(abs(d))


def projective_distance(m1: np.ndarray, m2: np.ndarray) -> float:
    """Distance of ``m1`` to the nearer of ``+m2`` and ``-m2`` after normalization."""
    a, b = normalize(m1), normalize(m2)
    return float(min(np.max(np.abs(a - b)), np.max(np.abs(a + b))))


def projective_equal(m1: np.ndarray, m2: np.ndarray, tol: float = 1e-12) -> bool:
    return projective_distance(m1, m2) <= tol


class EllipticError(ValueError):
    pass


def geodesic_length(m: np.ndarray) -> float:
    """Translation length ``|log(l1/l2)|`` of a hyperbolic or parabolic element."""
    t = abs(float(np.trace(normalize(m))))
    if t < 2:
        if t > 2 - 1e-12:
            return 0.0
        raise EllipticError(f"elliptic element, |trace| = {t!r} < 2")
    return 2 * math.acosh(t / 2)


# -- Weil-Petersson bracket ---------------------------------------------------


@dataclass(frozen=True)
class PoissonMatrix:
    """Integer bracket ``{z_a, z_b}`` between edge coordinates."""

    labels: tuple[str, ...]
    matrix: np.ndarray

    def __getitem__(self, key: tuple[str, str]) -> int:
        a, b = key
        idx = {lab: i for i, lab in enumerate(self.labels)}
        return int(self.matrix[idx[a], idx[b]])

    def as_dict(self) -> dict[tuple[str, str], int]:
        n = len(self.labels)
        return {
            (self.labels[i], self.labels[j]): int(self.matrix[i, j])
            for i in range(n)
            for j in range(n)
            if self.matrix[i, j]
        }

    def pair(self, v1: Mapping[str, object], v2: Mapping[str, object]) -> object:
        """Bilinear pairing ``v1^T B v2`` of two coefficient maps."""
        total: object = 0
        for a, x in v1.items():
            if not x:
                continue
            i = self.labels.index(a)
            for b, y in v2.items():
                if not y:
                    continue
                entry = int(self.matrix[i, self.labels.index(b)])
                if entry:
                    total = total + entry * x * y
        return total


def right_neighbour(g: FatGraph, h: int) -> int:
    """The half-edge following ``h``'s far end counterclockwise at its vertex."""
    return g.vp[h ^ 1]


def wp_bracket(g: FatGraph) -> PoissonMatrix:
    """Sum over oriented edges of ``d/dz_a ^ d/dz_b``, ``b`` next to ``a`` at its head."""
    n = g.num_edges
    b = np.zeros((n, n), dtype=np.int64)
    for h in range(g.num_half_edges):
        i, j = h >> 1, right_neighbour(g, h) >> 1
        b[i, j] += 1
        b[j, i] -= 1
    return PoissonMatrix(g.labels, b)


def face_incidence(g: FatGraph, face: Sequence[int]) -> np.ndarray:
    v = np.zeros(g.num_edges, dtype=np.int64)
    for h in face:
        v[h >> 1] += 1
    return v


# -- coordinate files ---------------------------------------------------------


def dumps_coords(c: Mapping[str, float], order: Sequence[str] | None = None) -> str:
    keys = list(order) if order is not None else list(c)
    return "".join(f"Z {k} {format_float(c[k])}\n" for k in keys)


def loads_coords(text: str) -> EdgeCoordinates:
    out: EdgeCoordinates = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3 or parts[0] != "Z":
            raise ParseError(lineno, "expected 'Z <label> <value>'")
        try:
            x = float(parts[2])
        except ValueError:
            raise ParseError(lineno, f"bad number {parts[2]!r}") from None
        if not math.isfinite(x):
            raise ParseError(lineno, "coordinate is not finite")
        if parts[1] in out:
            raise ParseError(lineno, f"duplicate coordinate for {parts[1]!r}")
        out[parts[1]] = x
    return out


def load_coords(path: str | Path) -> EdgeCoordinates:
    return loads_coords(Path(path).read_text(encoding="utf-8"))


def save_coords(path: str | Path, c: Mapping[str, float], order: Sequence[str] | None = None) -> None:
    Path(path).write_text(dumps_coords(c, order), encoding="utf-8")

