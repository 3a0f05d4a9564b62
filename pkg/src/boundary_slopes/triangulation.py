"""Ideal triangulations given as face-gluing tables, and their edge classes.

A triangulation file has one line per tetrahedron::

    <tet>: <g012> <g013> <g023> <g123>

where each gluing token ``t(abc)`` says that the face's vertices, listed in
ascending order, are sent to vertices ``a``, ``b``, ``c`` of tetrahedron
``t``.  The vertex missing from the face goes to the vertex missing from
``abc``.  Lines starting with ``#`` are comments.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

FACES = ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3))
FACE_NAMES = ("012", "013", "023", "123")
EDGE_PAIRS = ("01", "02", "03", "12", "13", "23")

_TOKEN = re.compile(r"^(\d+)\(([0-3])([0-3])([0-3])\)$")
_ROW = re.compile(r"^\s*(\d+)\s*:\s*(.*)$")
_MEMBER = re.compile(r"^\s*(\d+)\s*\(?\s*([0-3])([0-3])\s*\)?\s*$")


class TriangulationError(ValueError):
    """Raised for malformed or inconsistent gluing tables."""


def face_index(vertices) -> int:
    return FACE_NAMES.index("".join(str(v) for v in sorted(vertices)))


def edge_index(u: int, v: int) -> int:
    return EDGE_PAIRS.index(f"{min(u, v)}{max(u, v)}")


def normalize_pair(pair) -> str:
    """Return the canonical two-digit name of an edge, e.g. ``"32" -> "23"``."""
    s = "".join(str(c) for c in pair)
    if len(s) != 2 or s[0] == s[1] or not set(s) <= set("0123"):
        raise ValueError(f"not a tetrahedron edge: {pair!r}")
    return "".join(sorted(s))


def parse_member(text: str) -> tuple[int, str]:
    """Parse ``"4(03)"``, ``"4 (03)"`` or ``"4:03"`` into ``(4, "03")``."""
    m = _MEMBER.match(text.replace(":", " "))
    if not m:
        raise ValueError(f"cannot parse edge member {text!r}")
    return int(m.group(1)), normalize_pair(m.group(2) + m.group(3))


@dataclass(frozen=True)
class FaceGluing:
    target_tet: int
    vertex_map: tuple[int, int, int, int]

    def __post_init__(self):
        if sorted(self.vertex_map) != [0, 1, 2, 3]:
            raise TriangulationError(f"vertex map {self.vertex_map} is not a permutation of 0123")

    def inverse_map(self) -> tuple[int, int, int, int]:
        inv = [0] * 4
        for src, dst in enumerate(self.vertex_map):
            inv[dst] = src
        return tuple(inv)

    def token(self, face: int) -> str:
        images = "".join(str(self.vertex_map[v]) for v in FACES[face])
        return f"{self.target_tet}({images})"


@dataclass(frozen=True)
class EdgeClass:
    id: int
    members: tuple[tuple[int, str], ...]

    @property
    def degree(self) -> int:
        return len(self.members)

    def __contains__(self, member) -> bool:
        return member in self.members


@dataclass(frozen=True)
class Triangulation:
    """Tetrahedra with all four faces glued; ``tets[t][f]`` is a :class:`FaceGluing`."""

    tets: tuple[tuple[FaceGluing, FaceGluing, FaceGluing, FaceGluing], ...]

    def __len__(self) -> int:
        return len(self.tets)

    @property
    def size(self) -> int:
        return len(self.tets)

    def gluing(self, tet: int, face) -> FaceGluing:
        f = face if isinstance(face, int) else FACE_NAMES.index(face)
        return self.tets[tet][f]

    def replace(self, rows: dict[int, tuple[FaceGluing, ...]]) -> "Triangulation":
        """Return a copy with the given rows replaced or appended (no validation)."""
        count = max([len(self.tets) - 1, *rows]) + 1
        tets = []
        for t in range(count):
            if t in rows:
                tets.append(tuple(rows[t]))
            elif t < len(self.tets):
                tets.append(self.tets[t])
            else:
                raise TriangulationError(f"row {t} missing after applying changes")
        return Triangulation(tuple(tets))

    def relabel(self, perm: Sequence[int]) -> "Triangulation":
        """Renumber tets so that old tet u becomes ``perm[u]``; vertex labels are kept."""
        if sorted(perm) != list(range(len(self.tets))):
            raise TriangulationError(f"{list(perm)} is not a permutation of the {len(self.tets)} tets")
        tets: list = [None] * len(self.tets)
        for u, row in enumerate(self.tets):
            tets[perm[u]] = tuple(FaceGluing(perm[g.target_tet], g.vertex_map) for g in row)
        return Triangulation(tuple(tets))


def parse_relabeling(text: str) -> list[int]:
    """``"old:new"`` pairs (whitespace separated, ``#`` comments) -> permutation list."""
    pairs = {}
    for raw in text.splitlines():
        for tok in raw.split("#")[0].split():
            old, _, new = tok.partition(":")
            pairs[int(old)] = int(new)
    perm = [pairs.get(u, -1) for u in range(len(pairs))]
    if sorted(perm) != list(range(len(pairs))):
        raise TriangulationError("relabeling is not a permutation")
    return perm


def _parse_token(token: str, tet: int, face: int) -> FaceGluing:
    m = _TOKEN.match(token)
    where = f"tet {tet} face {FACE_NAMES[face]}"
    if not m:
        raise TriangulationError(f"{where}: bad gluing token {token!r}")
    target = int(m.group(1))
    images = [int(g) for g in m.group(2, 3, 4)]
    if len(set(images)) != 3:
        raise TriangulationError(f"{where}: repeated vertex in {token!r}")
    vmap = [0] * 4
    for src, dst in zip(FACES[face], images):
        vmap[src] = dst
    (missing_src,) = set(range(4)) - set(FACES[face])
    (missing_dst,) = set(range(4)) - set(images)
    vmap[missing_src] = missing_dst
    return FaceGluing(target, tuple(vmap))


def parse_rows(text: str) -> dict[int, tuple[FaceGluing, ...]]:
    """Parse gluing rows without any global validation."""
    rows: dict[int, tuple[FaceGluing, ...]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _ROW.match(line)
        if not m:
            raise TriangulationError(f"line {lineno}: expected '<tet>: g012 g013 g023 g123'")
        tet = int(m.group(1))
        tokens = m.group(2).replace("&", " ").split()
        if len(tokens) != 4:
            raise TriangulationError(f"line {lineno} (tet {tet}): expected 4 gluings, got {len(tokens)}")
        if tet in rows:
            raise TriangulationError(f"line {lineno}: tet {tet} listed twice")
        rows[tet] = tuple(_parse_token(tok, tet, f) for f, tok in enumerate(tokens))
    return rows


def check(tri: Triangulation) -> None:
    """Raise :class:`TriangulationError` unless every face is matched by an inverse gluing."""
    n = len(tri.tets)
    partner: dict[tuple[int, int], tuple[int, int]] = {}
    for t, row in enumerate(tri.tets):
        if len(row) != 4:
            raise TriangulationError(f"tet {t}: expected 4 faces")
        for f, g in enumerate(row):
            where = f"tet {t} face {FACE_NAMES[f]}"
            if not 0 <= g.target_tet < n:
                raise TriangulationError(f"{where}: target tet {g.target_tet} out of range 0..{n - 1}")
            image = face_index(g.vertex_map[v] for v in FACES[f])
            if (g.target_tet, image) == (t, f):
                raise TriangulationError(f"{where}: face glued to itself")
            partner[(t, f)] = (g.target_tet, image)
    seen: dict[tuple[int, int], tuple[int, int]] = {}
    for (t, f), (u, h) in partner.items():
        if (u, h) in seen and seen[(u, h)] != (t, f):
            a, b = seen[(u, h)]
            raise TriangulationError(
                f"tet {u} face {FACE_NAMES[h]} glued twice "
                f"(from tet {a} face {FACE_NAMES[b]} and tet {t} face {FACE_NAMES[f]})"
            )
        seen[(u, h)] = (t, f)
        back = tri.tets[u][h]
        g = tri.tets[t][f]
        if back.target_tet != t or any(back.vertex_map[g.vertex_map[v]] != v for v in range(4)):
            raise TriangulationError(
                f"tet {t} face {FACE_NAMES[f]} -> {g.token(f)} is not inverted by "
                f"tet {u} face {FACE_NAMES[h]} ({back.token(h)})"
            )


def parse_triangulation(text: str) -> Triangulation:
    rows = parse_rows(text)
    if not rows:
        raise TriangulationError("no tetrahedra")
    n = max(rows) + 1
    missing = [t for t in range(n) if t not in rows]
    if missing:
        raise TriangulationError(f"rows missing for tets {missing}")
    tri = Triangulation(tuple(rows[t] for t in range(n)))
    check(tri)
    return tri


def apply_delta(base: Triangulation, text: str) -> Triangulation:
    """Replace/append the rows given in ``text`` and validate the result."""
    tri = base.replace(parse_rows(text))
    check(tri)
    return tri


def format_triangulation(tri: Triangulation) -> str:
    lines = [f"{t}: " + " ".join(g.token(f) for f, g in enumerate(row)) for t, row in enumerate(tri.tets)]
    return "\n".join(lines) + "\n"


class _UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def edge_classes(tri: Triangulation) -> list[EdgeClass]:
    """Orbits of the 6T tetrahedron edges under the face gluings.

    Classes are numbered by first appearance, scanning tetrahedra in order
    and edges within a tetrahedron in the order 01, 02, 03, 12, 13, 23.
    """
    uf = _UnionFind(6 * len(tri.tets))
    for t, row in enumerate(tri.tets):
        for f, g in enumerate(row):
            for u, v in combinations(FACES[f], 2):
                uf.union(6 * t + edge_index(u, v),
                         6 * g.target_tet + edge_index(g.vertex_map[u], g.vertex_map[v]))
    order: dict[int, list[tuple[int, str]]] = {}
    for t in range(len(tri.tets)):
        for e, pair in enumerate(EDGE_PAIRS):
            order.setdefault(uf.find(6 * t + e), []).append((t, pair))
    return [EdgeClass(i, tuple(members)) for i, members in enumerate(order.values())]


def diagnostics(tri: Triangulation, classes: list[EdgeClass] | None = None) -> list[str]:
    """Soft checks; an empty list means nothing suspicious."""
    classes = edge_classes(tri) if classes is None else classes
    notes = []
    total = sum(c.degree for c in classes)
    if total != 6 * len(tri.tets):
        notes.append(f"degree sum {total} != 6T = {6 * len(tri.tets)}")
    if len(classes) != len(tri.tets):
        notes.append(f"{len(classes)} edge classes for {len(tri.tets)} tetrahedra "
                     "(expected equal counts for torus cusps)")
    return notes
