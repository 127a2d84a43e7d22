"""Fat graphs (ribbon graphs), flips and the relations of the modular groupoid.

A fat graph is stored as a set of half-edges with two permutations:

* ``opposite`` pairs the two halves of an edge.  Edge ``k`` owns the
  half-edges ``2k`` (its tail) and ``2k + 1`` (its head), so
  ``opposite(h) == h ^ 1``.
* ``vp`` sends a half-edge to the next half-edge counterclockwise around the
  same vertex.

Faces are the closed paths that turn left at every vertex; with the
conventions above the face successor of ``h`` is ``vp^-1(opposite(h))``.

Edges carry labels (the marking).  A flip keeps every label in place: the
flipped edge and its four neighbours are identified across the move, which is
what makes the pentagon relation checkable as a marked isomorphism.
"""

from __future__ import annotations

import random
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping, Sequence, Union


class GraphError(ValueError):
    """Invalid fat graph data."""


class FlipError(ValueError):
    """A flip was requested on an edge where it is undefined."""


class MoveError(ValueError):
    """A move of a word could not be applied."""

    def __init__(self, index: int, reason: str):
        super().__init__(f"move {index}: {reason}")
        self.index = index
        self.reason = reason


@dataclass(frozen=True)
class FatGraph:
    """Immutable fat graph.

    ``vertices[v]`` lists the half-edges at vertex ``v`` in counterclockwise
    order.  ``half_edge_names`` and ``vertex_ids`` only matter for file I/O.
    """

    labels: tuple[str, ...]
    vertices: tuple[tuple[int, ...], ...]
    half_edge_names: tuple[str, ...]
    vertex_ids: tuple[str, ...]

    # -- derived permutations -------------------------------------------------

    @cached_property
    def num_edges(self) -> int:
        return len(self.labels)

    @cached_property
    def num_half_edges(self) -> int:
        return 2 * len(self.labels)

    @cached_property
    def vp(self) -> tuple[int, ...]:
        perm = [0] * self.num_half_edges
        for cycle in self.vertices:
            for i, h in enumerate(cycle):
                perm[h] = cycle[(i + 1) % len(cycle)]
        return tuple(perm)

    @cached_property
    def vp_inv(self) -> tuple[int, ...]:
        inv = [0] * self.num_half_edges
        for h, k in enumerate(self.vp):
            inv[k] = h
        return tuple(inv)

    @cached_property
    def fp(self) -> tuple[int, ...]:
        """Face permutation (left turn at the head of each half-edge)."""
        return tuple(self.vp_inv[h ^ 1] for h in range(self.num_half_edges))

    @cached_property
    def vertex_of(self) -> tuple[int, ...]:
        owner = [0] * self.num_half_edges
        for v, cycle in enumerate(self.vertices):
            for h in cycle:
                owner[h] = v
        return tuple(owner)

    @cached_property
    def edge_index(self) -> dict[str, int]:
        return {lab: k for k, lab in enumerate(self.labels)}

    @cached_property
    def half_edge_index(self) -> dict[str, int]:
        return {name: h for h, name in enumerate(self.half_edge_names)}

    def label_of(self, h: int) -> str:
        return self.labels[h >> 1]

    def half_edges(self, label: str) -> tuple[int, int]:
        try:
            k = self.edge_index[label]
        except KeyError:
            raise KeyError(f"unknown edge label {label!r}") from None
        return 2 * k, 2 * k + 1

    def endpoints(self, label: str) -> tuple[int, int]:
        t, h = self.half_edges(label)
        return self.vertex_of[t], self.vertex_of[h]

    def is_loop(self, label: str) -> bool:
        a, b = self.endpoints(label)
        return a == b

    def common_vertices(self, a: str, b: str) -> set[int]:
        return set(self.endpoints(a)) & set(self.endpoints(b))

    # -- topology -------------------------------------------------------------

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @cached_property
    def faces(self) -> tuple[tuple[int, ...], ...]:
        return _cycles(self.fp)

    @property
    def num_faces(self) -> int:
        return len(self.faces)

    @property
    def euler_characteristic(self) -> int:
        """``V - E``, the Euler characteristic of the thickened surface."""
        return self.num_vertices - self.num_edges

    @property
    def genus(self) -> int:
        return (2 - self.euler_characteristic - self.num_faces) // 2

    @property
    def num_holes(self) -> int:
        return self.num_faces

    def face_of(self, h: int) -> int:
        for i, f in enumerate(self.faces):
            if h in f:
                return i
        raise GraphError(f"half-edge {h} is not on any face")

    def face_labels(self, face: Sequence[int]) -> list[str]:
        """Edge labels visited by a face, with multiplicity."""
        return [self.label_of(h) for h in face]

    def is_trivalent(self) -> bool:
        return all(len(c) == 3 for c in self.vertices)

    def relabel(self, mapping: Mapping[str, str]) -> "FatGraph":
        new = tuple(mapping.get(lab, lab) for lab in self.labels)
        if len(set(new)) != len(new):
            raise GraphError("relabelling is not a bijection")
        return FatGraph(new, self.vertices, self.half_edge_names, self.vertex_ids)

    def __str__(self) -> str:
        return dumps(self)


def _cycles(perm: Sequence[int]) -> tuple[tuple[int, ...], ...]:
    seen = [False] * len(perm)
    out = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        cyc = []
        h = start
        while not seen[h]:
            seen[h] = True
            cyc.append(h)
            h = perm[h]
        out.append(tuple(cyc))
    return tuple(out)


def _validate(g: FatGraph, trivalent: bool) -> None:
    n = g.num_half_edges
    seen = Counter(h for c in g.vertices for h in c)
    if any(c == 0 for c in map(len, g.vertices)):
        raise GraphError("empty vertex")
    missing = [h for h in range(n) if seen[h] == 0]
    if missing:
        raise GraphError(f"dangling half-edge {g.half_edge_names[missing[0]]}")
    repeated = [h for h, c in seen.items() if c > 1]
    if repeated:
        raise GraphError(f"half-edge {g.half_edge_names[repeated[0]]} appears at two vertices")
    if trivalent:
        for vid, cyc in zip(g.vertex_ids, g.vertices):
            if len(cyc) != 3:
                raise GraphError(f"vertex {vid} has valence {len(cyc)}, expected 3")
    if len(set(g.labels)) != len(g.labels):
        dup = next(lab for lab, c in Counter(g.labels).items() if c > 1)
        raise GraphError(f"duplicate label {dup!r}")
    if g.vertices and len(_component(g, 0)) != n:
        raise GraphError("graph is disconnected")


def _component(g: FatGraph, start: int) -> set[int]:
    seen = {start}
    todo = [start]
    while todo:
        h = todo.pop()
        for k in (h ^ 1, g.vp[h]):
            if k not in seen:
                seen.add(k)
                todo.append(k)
    return seen


def from_spec(
    vertex_cycles: Sequence[Sequence[str]],
    pairing: Sequence[tuple[str, str]],
    labels: Sequence[str] | None = None,
    vertex_ids: Sequence[str] | None = None,
    trivalent: bool = True,
) -> FatGraph:
    """Build and validate a fat graph from named half-edges.

    ``vertex_cycles`` gives the counterclockwise order at each vertex and
    ``pairing`` the edges as ``(tail, head)`` pairs; ``labels[k]`` marks
    ``pairing[k]``.
    """
    if labels is None:
        labels = [f"e{k + 1}" for k in range(len(pairing))]
    if len(labels) != len(pairing):
        raise GraphError("one label per edge required")
    if vertex_ids is None:
        vertex_ids = [f"v{i}" for i in range(len(vertex_cycles))]
    names: list[str] = []
    for a, b in pairing:
        names.extend((a, b))
    if len(set(names)) != len(names):
        raise GraphError("pairing is not a matching: a half-edge is used twice")
    index = {name: h for h, name in enumerate(names)}
    vertices = []
    for vid, cyc in zip(vertex_ids, vertex_cycles):
        try:
            vertices.append(tuple(index[name] for name in cyc))
        except KeyError as exc:
            raise GraphError(f"dangling half-edge {exc.args[0]} at vertex {vid}") from None
    g = FatGraph(tuple(labels), tuple(vertices), tuple(names), tuple(vertex_ids))
    _validate(g, trivalent)
    return g


# -- flips --------------------------------------------------------------------


def flip_slots(g: FatGraph, label: str) -> dict[str, int]:
    """Half-edges in the four neighbour slots of ``label``.

    Counterclockwise after the tail of the edge come slots ``B`` then ``A``;
    after the head come ``D`` then ``C``.  ``A`` and ``C`` are the slots that
    gain ``phi(z)`` under a flip, ``B`` and ``D`` lose ``phi(-z)``.
    """
    tail, head = g.half_edges(label)
    if g.vertex_of[tail] == g.vertex_of[head]:
        raise FlipError(f"flip undefined: edge {label!r} is a self-loop")
    for h in (tail, head):
        if len(g.vertices[g.vertex_of[h]]) != 3:
            raise FlipError(f"flip undefined: edge {label!r} has an endpoint of valence != 3")
    vp = g.vp
    return {"B": vp[tail], "A": vp[vp[tail]], "D": vp[head], "C": vp[vp[head]]}


def flip(g: FatGraph, label: str) -> FatGraph:
    """Contract ``label`` and re-expand the four-valent vertex the other way."""
    slots = flip_slots(g, label)
    tail, head = g.half_edges(label)
    p, q = g.vertex_of[tail], g.vertex_of[head]
    vertices = list(g.vertices)
    vertices[p] = (tail, slots["A"], slots["D"])
    vertices[q] = (head, slots["C"], slots["B"])
    return FatGraph(g.labels, tuple(vertices), g.half_edge_names, g.vertex_ids)


def match_faces_through_flip(g: FatGraph, label: str) -> dict[int, int]:
    """Map face indices of ``g`` to face indices of ``flip(g, label)``.

    Faces are matched through any half-edge not belonging to the flipped edge.
    """
    g2 = flip(g, label)
    zs = set(g.half_edges(label))
    out = {}
    for i, f in enumerate(g.faces):
        h = next(h for h in f if h not in zs)
        out[i] = g2.face_of(h)
    return out


# -- duality ------------------------------------------------------------------


def dual(g: FatGraph) -> FatGraph:
    """The dual fat graph: faces become vertices, the edges are kept."""
    vertices = g.faces
    ids = tuple(f"f{i}" for i in range(len(vertices)))
    d = FatGraph(g.labels, vertices, g.half_edge_names, ids)
    _validate(d, trivalent=False)
    return d


# -- isomorphism --------------------------------------------------------------


def find_marked_isomorphism(g1: FatGraph, g2: FatGraph) -> dict[int, int] | None:
    """Half-edge bijection preserving ``opposite``, ``vp`` and the marking.

    Returns the witness map or ``None``.
    """
    if sorted(g1.labels) != sorted(g2.labels):
        return None
    if sorted(map(len, g1.vertices)) != sorted(map(len, g2.vertices)):
        return None
    if g1.num_half_edges == 0:
        return {}
    lab0 = g1.label_of(0)
    for target in g2.half_edges(lab0):
        m = _extend(g1, g2, 0, target)
        if m is not None:
            return m
    return None


def _extend(g1: FatGraph, g2: FatGraph, h1: int, h2: int) -> dict[int, int] | None:
    fwd = {h1: h2}
    used = {h2}
    todo = deque([h1])
    while todo:
        a = todo.popleft()
        b = fwd[a]
        if g1.label_of(a) != g2.label_of(b):
            return None
        for a2, b2 in ((a ^ 1, b ^ 1), (g1.vp[a], g2.vp[b])):
            if a2 in fwd:
                if fwd[a2] != b2:
                    return None
            else:
                if b2 in used:
                    return None
                fwd[a2] = b2
                used.add(b2)
                todo.append(a2)
    if len(fwd) != g1.num_half_edges:
        return None
    return fwd


def is_isomorphic_marked(g1: FatGraph, g2: FatGraph) -> bool:
    return find_marked_isomorphism(g1, g2) is not None


# -- words in the modular groupoid -------------------------------------------


@dataclass(frozen=True)
class Flip:
    label: str


@dataclass(frozen=True)
class Symmetry:
    """Relabelling move ``old label -> new label`` (a permutation of labels)."""

    mapping: tuple[tuple[str, str], ...]

    @classmethod
    def swap(cls, a: str, b: str) -> "Symmetry":
        return cls(((a, b), (b, a)))

    def as_dict(self) -> dict[str, str]:
        return dict(self.mapping)


Move = Union[Flip, Symmetry]
MoveWord = Sequence[Move]


def apply_move(g: FatGraph, move: Move) -> FatGraph:
    if isinstance(move, Flip):
        return flip(g, move.label)
    mapping = move.as_dict()
    if sorted(mapping) != sorted(mapping.values()):
        raise GraphError("symmetry is not a permutation of labels")
    unknown = set(mapping) - set(g.labels)
    if unknown:
        raise KeyError(f"unknown edge label {sorted(unknown)[0]!r}")
    return g.relabel(mapping)


def apply_word(g: FatGraph, word: MoveWord) -> FatGraph:
    for i, move in enumerate(word):
        try:
            g = apply_move(g, move)
        except (FlipError, GraphError, KeyError) as exc:
            raise MoveError(i, str(exc).strip("'\"")) from exc
    return g


SQUARE = "square"
COMMUTE = "commute"
PENTAGON = "pentagon"
RELATION_KINDS = (SQUARE, COMMUTE, PENTAGON)


@dataclass(frozen=True)
class Relation:
    kind: str  # one of RELATION_KINDS
    edges: tuple[str, ...]

    @classmethod
    def square(cls, a: str) -> "Relation":
        """A flip followed by the same flip."""
        return cls(SQUARE, (a,))

    @classmethod
    def commute(cls, a: str, b: str) -> "Relation":
        """Flips in two edges without a common vertex commute."""
        return cls(COMMUTE, (a, b))

    @classmethod
    def pentagon(cls, a: str, b: str) -> "Relation":
        """Five alternating flips in two edges sharing one vertex."""
        return cls(PENTAGON, (a, b))

    def __str__(self) -> str:
        return f"{self.kind}({', '.join(self.edges)})"


def relation_word(rel: Relation) -> list[Move]:
    """Closed word of the relation; applying it must return the start graph.

    The five pentagon flips alternate between the two edges and leave them
    with exchanged roles, so that word ends with the transposition.
    """
    if rel.kind == SQUARE:
        (a,) = rel.edges
        return [Flip(a), Flip(a)]
    a, b = rel.edges
    if rel.kind == COMMUTE:
        return [Flip(a), Flip(b), Flip(a), Flip(b)]
    if rel.kind == PENTAGON:
        return [Flip(a), Flip(b), Flip(a), Flip(b), Flip(a), Symmetry.swap(a, b)]
    raise ValueError(f"unknown relation {rel.kind!r}")


def check_relation_precondition(g: FatGraph, rel: Relation) -> str | None:
    """Return a description of the violated precondition, or ``None``."""
    for e in rel.edges:
        if e not in g.edge_index:
            return f"unknown edge label {e!r}"
        if g.is_loop(e):
            return f"edge {e!r} is a self-loop"
    if rel.kind == SQUARE:
        return None
    a, b = rel.edges
    if a == b:
        return "the two edges must differ"
    common = len(g.common_vertices(a, b))
    if rel.kind == COMMUTE and common != 0:
        return f"commuting flips need edges without common vertex, {a!r} and {b!r} share {common}"
    if rel.kind == PENTAGON and common != 1:
        return f"the pentagon needs edges with exactly one common vertex, {a!r} and {b!r} share {common}"
    return None


@dataclass
class RelationReport:
    relation: str
    status: str  # "pass", "fail" or "precondition"
    detail: str = ""
    witness: dict[int, int] | None = field(default=None, repr=False)

    @property
    def passed(self) -> bool:
        return self.status == "pass"


def verify_groupoid_relation(g: FatGraph, rel: Relation) -> RelationReport:
    problem = check_relation_precondition(g, rel)
    if problem is not None:
        return RelationReport(str(rel), "precondition", problem)
    try:
        end = apply_word(g, relation_word(rel))
    except MoveError as exc:
        return RelationReport(str(rel), "precondition", str(exc))
    witness = find_marked_isomorphism(g, end)
    if witness is None:
        return RelationReport(str(rel), "fail", "end graph is not marked-isomorphic to the start")
    if rel.kind == COMMUTE:
        a, b = rel.edges
        ab = apply_word(g, [Flip(a), Flip(b)])
        ba = apply_word(g, [Flip(b), Flip(a)])
        if not is_isomorphic_marked(ab, ba):
            return RelationReport(str(rel), "fail", "flips do not commute")
    return RelationReport(str(rel), "pass", witness=witness)


def relation_instances(g: FatGraph, kind: str) -> list[Relation]:
    """All relation instances of a kind whose preconditions hold in ``g``."""
    labels = [lab for lab in g.labels if not g.is_loop(lab)]
    if kind == SQUARE:
        return [Relation.square(a) for a in labels]
    out = []
    for i, a in enumerate(labels):
        for b in labels[i + 1:]:
            rel = Relation(kind, (a, b))
            if check_relation_precondition(g, rel) is None:
                out.append(rel)
    return out


# -- random graphs ------------------------------------------------------------


def random_trivalent(num_vertices: int, rng: random.Random, max_tries: int = 1000) -> FatGraph:
    """Random connected trivalent fat graph (``num_vertices`` even, >= 2)."""
    if num_vertices < 2 or num_vertices % 2:
        raise ValueError("a trivalent graph needs an even, positive number of vertices")
    n = 3 * num_vertices
    for _ in range(max_tries):
        slots = list(range(n))
        rng.shuffle(slots)
        pairing = [(f"h{slots[2 * k]}", f"h{slots[2 * k + 1]}") for k in range(n // 2)]
        cycles = [[f"h{3 * v + i}" for i in range(3)] for v in range(num_vertices)]
        try:
            return from_spec(cycles, pairing)
        except GraphError:
            continue
    raise RuntimeError("could not draw a connected graph")


# -- text format --------------------------------------------------------------


def dumps(g: FatGraph, coords: Mapping[str, float] | None = None) -> str:
    lines = []
    for vid, cyc in zip(g.vertex_ids, g.vertices):
        lines.append(f"V {vid}: " + " ".join(g.half_edge_names[h] for h in cyc))
    for k, lab in enumerate(g.labels):
        lines.append(f"E {lab}: {g.half_edge_names[2 * k]} {g.half_edge_names[2 * k + 1]}")
    if coords:
        for lab in g.labels:
            if lab in coords:
                lines.append(f"Z {lab} {format_float(coords[lab])}")
    return "\n".join(lines) + "\n"


def format_float(x: float) -> str:
    """Shortest text that reads back to the same float."""
    return repr(float(x))


class ParseError(ValueError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


def loads(text: str, trivalent: bool = True) -> tuple[FatGraph, dict[str, float]]:
    """Parse the text format; returns the graph and any ``Z`` coordinate lines."""
    vids, cycles, labels, pairs = [], [], [], []
    coords: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tag, _, rest = line.partition(" ")
        if tag in ("V", "E"):
            name, colon, body = rest.partition(":")
            if not colon or not name.strip():
                raise ParseError(lineno, f"expected '{tag} <id>: ...'")
            items = body.split()
            if tag == "V":
                if not items:
                    raise ParseError(lineno, "vertex without half-edges")
                vids.append(name.strip())
                cycles.append(items)
            else:
                if len(items) != 2:
                    raise ParseError(lineno, "an edge needs exactly two half-edges")
                labels.append(name.strip())
                pairs.append((items[0], items[1]))
        elif tag == "Z":
            items = rest.split()
            if len(items) != 2:
                raise ParseError(lineno, "expected 'Z <label> <value>'")
            try:
                coords[items[0]] = float(items[1])
            except ValueError:
                raise ParseError(lineno, f"bad number {items[1]!r}") from None
        else:
            raise ParseError(lineno, f"unknown record {tag!r}")
    g = from_spec(cycles, pairs, labels, vids, trivalent=trivalent)
    return g, coords


def load(path: str | Path, trivalent: bool = True) -> tuple[FatGraph, dict[str, float]]:
    return loads(Path(path).read_text(encoding="utf-8"), trivalent=trivalent)


def save(path: str | Path, g: FatGraph, coords: Mapping[str, float] | None = None) -> None:
    Path(path).write_text(dumps(g, coords), encoding="utf-8")


# -- standard examples --------------------------------------------------------


def theta_graph(twisted: bool) -> FatGraph:
    """Two vertices joined by three edges.

    With ``twisted=False`` both vertices read ``e1 e2 e3`` counterclockwise and
    the surface is a one-holed torus; ``twisted=True`` reverses the second
    vertex and gives a three-holed sphere.
    """
    second = ["b3", "b2", "b1"] if twisted else ["b1", "b2", "b3"]
    return from_spec(
        [["a1", "a2", "a3"], second],
        [("a1", "b1"), ("a2", "b2"), ("a3", "b3")],
        ["e1", "e2", "e3"],
        ["u", "w"],
    )


def iter_faces_labels(g: FatGraph) -> Iterable[list[str]]:
    for f in g.faces:
        yield g.face_labels(f)
