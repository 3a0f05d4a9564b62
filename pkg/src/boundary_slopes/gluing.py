"""Gluing-equation exponents and the matrix R.

Each tetrahedron edge carries one of the shape parameters z, z' = 1/w or
z'' = -w/z (w = 1 - z).  Around an edge class the product of parameters is
rewritten as +-prod z^r' w^r'', and R collects the (r', r'') pairs.
"""

from __future__ import annotations

from dataclasses import dataclass

from .triangulation import EDGE_PAIRS, EdgeClass, Triangulation, normalize_pair, parse_member

Z, ZP, ZPP = "z", "z'", "z''"

_PARAMETER = {"01": Z, "23": Z, "02": ZP, "13": ZP, "03": ZPP, "12": ZPP}


def edge_parameter(pair) -> str:
    """Shape parameter carried by a tetrahedron edge: ``z``, ``z'`` or ``z''``."""
    return _PARAMETER[normalize_pair(pair)]


@dataclass(frozen=True)
class EdgeExponentCounts:
    """``p[i][t]`` etc. count edges of tet t in class i carrying z, z', z''."""

    p: tuple[tuple[int, ...], ...]
    p_prime: tuple[tuple[int, ...], ...]
    p_dprime: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class ExponentMatrix:
    rows: tuple[tuple[int, ...], ...]
    omitted_edge: int
    omitted_member: tuple[int, str]
    class_ids: tuple[int, ...]
    sign_parities: tuple[int, ...]

    @property
    def n_tets(self) -> int:
        return len(self.rows[0]) // 2 if self.rows else len(self.class_ids) + 1

    def z_column(self, tet: int) -> list[int]:
        return [row[2 * tet] for row in self.rows]

    def w_column(self, tet: int) -> list[int]:
        return [row[2 * tet + 1] for row in self.rows]

    def dump(self) -> str:
        t, pair = self.omitted_member
        lines = [f"# omitted edge class {self.omitted_edge} (member {t}:{pair})"]
        lines += [" ".join(str(x) for x in row) for row in self.rows]
        return "\n".join(lines) + "\n"


def exponent_rows(tri: Triangulation, classes: list[EdgeClass]):
    """Return ``(counts, full)`` where ``full`` has one 2n-vector per class."""
    n = len(tri.tets)
    p = [[0] * n for _ in classes]
    pp = [[0] * n for _ in classes]
    ppp = [[0] * n for _ in classes]
    for i, cls in enumerate(classes):
        for t, pair in cls.members:
            kind = _PARAMETER[pair]
            if kind == Z:
                p[i][t] += 1
            elif kind == ZP:
                pp[i][t] += 1
            else:
                ppp[i][t] += 1
    full = []
    for i in range(len(classes)):
        row = []
        for t in range(n):
            row += [p[i][t] - ppp[i][t], ppp[i][t] - pp[i][t]]
        full.append(row)
    counts = EdgeExponentCounts(
        tuple(map(tuple, p)), tuple(map(tuple, pp)), tuple(map(tuple, ppp))
    )
    return counts, full


def select_class(classes: list[EdgeClass], selector) -> int:
    """Position of the class picked by an int id, a ``(tet, pair)`` member or a ``"tet:pair"`` string."""
    if isinstance(selector, str):
        selector = int(selector) if selector.strip().isdigit() else parse_member(selector)
    if isinstance(selector, int):
        hits = [k for k, c in enumerate(classes) if c.id == selector]
        what = f"class id {selector}"
    else:
        member = (int(selector[0]), normalize_pair(selector[1]))
        hits = [k for k, c in enumerate(classes) if member in c.members]
        what = f"member {member[0]}:{member[1]}"
    if not hits:
        raise ValueError(f"{what} matches no edge class")
    if len(hits) > 1:
        raise ValueError(f"{what} is ambiguous")
    return hits[0]


def build_R(tri: Triangulation, classes: list[EdgeClass], omit) -> ExponentMatrix:
    """Drop the redundant equation selected by ``omit`` and keep class order."""
    counts, full = exponent_rows(tri, classes)
    k = select_class(classes, omit)
    keep = [i for i in range(len(classes)) if i != k]
    parities = tuple(sum(counts.p_dprime[i]) % 2 for i in keep)
    member = omit if isinstance(omit, tuple) else classes[k].members[0]
    member = (int(member[0]), normalize_pair(member[1]))
    return ExponentMatrix(
        rows=tuple(tuple(full[i]) for i in keep),
        omitted_edge=classes[k].id,
        omitted_member=member,
        class_ids=tuple(classes[i].id for i in keep),
        sign_parities=parities,
    )


def order_classes(classes: list[EdgeClass], representatives) -> list[EdgeClass]:
    """Reorder and renumber classes so that class i contains ``representatives[i]``.

    Representatives that are absent, or that land in an already placed class,
    are skipped.  Unmatched classes follow in their original order.
    """
    where = {m: k for k, c in enumerate(classes) for m in c.members}
    order: list[int] = []
    for rep in representatives:
        k = where.get((int(rep[0]), normalize_pair(rep[1])))
        if k is not None and k not in order:
            order.append(k)
    order += [k for k in range(len(classes)) if k not in order]
    return [EdgeClass(i, classes[k].members) for i, k in enumerate(order)]


def parse_edge_table(text: str) -> list[tuple[int, int, list[tuple[int, str]]]]:
    """Parse ``"<edge> <degree>: t(ab) ..."`` lines into ``(edge, degree, members)``."""
    table = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, _, body = line.partition(":")
        edge, degree = (int(x) for x in head.split())
        members = [parse_member(tok) for tok in body.split()]
        if len(members) != degree:
            raise ValueError(f"edge {edge}: degree {degree} but {len(members)} members")
        table.append((edge, degree, members))
    return table


__all__ = [
    "EDGE_PAIRS",
    "EdgeExponentCounts",
    "ExponentMatrix",
    "build_R",
    "edge_parameter",
    "exponent_rows",
    "order_classes",
    "parse_edge_table",
    "select_class",
]
