"""The two knot families built by stacking folded tetrahedra onto a base triangulation.

K_n (odd n >= 5) starts from K_5 and each step adds one tetrahedron, taking
n to n + 2.  J_n (even n >= 2) starts from J_2 the same way.  Edge classes
are recomputed from scratch for every member; the shipped edge tables only
fix the order of the equations, which in turn fixes the overall sign of the
degeneration vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import data
from .degeneration import INF, degeneration_matrix, degeneration_vector
from .gluing import ExponentMatrix, build_R, order_classes
from .peripheral import PeripheralCurve, Slope, SlopeResult, boundary_slope, valuations
from .triangulation import FaceGluing, Triangulation, TriangulationError, edge_classes, parse_rows


class FamilyError(ValueError):
    """A triangulation lacks the fold pattern an extension step needs, or n is out of range."""


@dataclass(frozen=True)
class FamilySpec:
    family: str
    base_name: str
    base_n: int
    index_templates: tuple[tuple[int, ...], ...]
    append_symbol: int
    omit: tuple[int, str]
    edge_table: str
    table_rows: int
    tail_pair: str
    relabel: tuple[int, ...] | None = None

    def data_tet(self, tet: int) -> int:
        """Tet number in the curve/index numbering of a tet of the gluing tables."""
        if self.relabel is None or tet >= len(self.relabel):
            return tet
        return self.relabel[tet]

    def tets(self, n: int) -> int:
        return (n + 25) // 2 if self.family == "K" else (n + 34) // 2

    def check_n(self, n: int) -> None:
        parity_ok = n % 2 == self.base_n % 2
        if n < self.base_n or not parity_ok:
            kind = "odd" if self.base_n % 2 else "even"
            raise FamilyError(f"{self.family}_n needs {kind} n >= {self.base_n}, got {n}")


def family_spec(family: str) -> FamilySpec:
    family = family.upper()
    if family == "K":
        return FamilySpec("K", "k5", 5, tuple(data.indices("k5")), INF, (2, "03"), "k5", 15, "02")
    if family == "J":
        perm = tuple(data.relabeling("j2"))
        return FamilySpec("J", "j2", 2, tuple(data.indices("j2")), 0, (perm[4], "03"), "j8", 19, "23",
                          relabel=perm)
    raise FamilyError(f"unknown family {family!r} (expected K or J)")


# --------------------------------------------------------------------------
# gluing-table surgery


def _g(token: str, face: int) -> FaceGluing:
    return parse_rows(f"0: {' '.join([token] * 4)}")[0][face]


def _row(tokens: str, m: int) -> tuple[FaceGluing, ...]:
    toks = tokens.replace("m-1", str(m - 1)).replace("m", str(m)).split()
    return tuple(_g(t, f) for f, t in enumerate(toks))


def _has(tri: Triangulation, tet: int, face: int, token: str) -> bool:
    return tri.tets[tet][face].token(face) == token


def extend_K(tri: Triangulation) -> Triangulation:
    """Unfold the last tet of a K member and fold a new one on top."""
    last = tri.size - 1
    if not (_has(tri, last, 0, f"{last}(320)") and _has(tri, last, 2, f"{last}(210)")):
        raise FamilyError(f"tet {last} does not carry the K fold pattern")
    m = tri.size
    old = list(tri.tets[last])
    old[0], old[2] = _g(f"{m}(312)", 0), _g(f"{m}(013)", 2)
    new = _row("m(320) m-1(023) m(210) m-1(120)", m)
    return Triangulation(tri.tets[:last] + (tuple(old), new))


def extend_J(tri: Triangulation, hexagon: tuple[int, int] = (6, 10)) -> Triangulation:
    """Insert the first folded tet along the hexagon between faces a:023 and b:012,
    or stack onto the last fold.  ``hexagon`` names tets a and b."""
    m = tri.size
    last = m - 1
    a, b = hexagon
    if m == 18:
        if not (_has(tri, a, 2, f"{b}(021)") and _has(tri, b, 0, f"{a}(032)")):
            raise FamilyError(f"faces {a}:023 and {b}:012 are not glued as in J_2")
        tets = [list(t) for t in tri.tets]
        tets[a][2] = _g("18(021)", 2)
        tets[b][0] = _g("18(013)", 0)
        tets.append(list(_row(f"{a}(032) {b}(012) 18(231) 18(302)", m)))
        return Triangulation(tuple(map(tuple, tets)))
    if not (_has(tri, last, 2, f"{last}(231)") and _has(tri, last, 3, f"{last}(302)")):
        raise FamilyError(f"tet {last} does not carry the J fold pattern")
    old = list(tri.tets[last])
    old[2], old[3] = _g(f"{m}(021)", 2), _g(f"{m}(103)", 3)
    new = _row("m-1(032) m-1(213) m(231) m(302)", m)
    return Triangulation(tri.tets[:last] + (tuple(old), new))


def extend_peripherals(family: str, m: PeripheralCurve, l: PeripheralCurve):
    """Pad both curves by one tet; K also swaps l for l - 4m to keep it null-homologous."""
    m2, l2 = m.padded(), l.padded()
    if family.upper() == "K":
        l2 = PeripheralCurve(l2.name, tuple(a - 4 * b for a, b in zip(l2.coeffs, m2.coeffs)))
    return m2, l2


# --------------------------------------------------------------------------
# members


@dataclass(frozen=True)
class FamilyMember:
    family: str
    n: int
    triangulation: Triangulation
    R: ExponentMatrix
    meridian: PeripheralCurve
    longitude: PeripheralCurve
    indices: tuple[tuple[int, ...], ...]

    def evaluate(self) -> list[SlopeResult]:
        out = []
        for index in self.indices:
            dv = degeneration_vector(degeneration_matrix(self.R, index))
            try:
                v_mu, v_lambda = valuations(self.meridian, self.longitude, index, dv)
                out.append(SlopeResult(index, dv.d, v_mu, v_lambda, boundary_slope(v_mu, v_lambda)))
            except ValueError:
                out.append(SlopeResult(index, dv.d, certified=False))
        return out


def class_representatives(spec: FamilySpec, tets: int):
    """Class order for the equations of a member with ``tets`` tetrahedra.

    K follows the K_5 edge table and then the new tail classes.  J_2 follows
    the J_8 edge table; larger J members keep first-appearance order, which
    reproduces the published signs and keeps each new class last.
    """
    if spec.family == "J" and tets > 18:
        return []
    table = data.edge_table(spec.edge_table)
    reps = [(spec.data_tet(t), pair) for t, pair in (members[0] for _, _, members in table[: spec.table_rows])]
    reps += [(j - 1, spec.tail_pair) for j in range(spec.table_rows, tets + 1)]
    return reps


def exponent_matrix(family: str, tri: Triangulation) -> ExponentMatrix:
    spec = family_spec(family)
    classes = order_classes(edge_classes(tri), class_representatives(spec, tri.size))
    return build_R(tri, classes, spec.omit)


@lru_cache(maxsize=None)
def _chain(family: str, n: int):
    spec = family_spec(family)
    spec.check_n(n)
    if n == spec.base_n:
        return base_triangulation(family), *data.curves(spec.base_name)
    tri, m, l = _chain(family, n - 2)
    m, l = extend_peripherals(spec.family, m, l)
    if spec.family == "K":
        return extend_K(tri), m, l
    return extend_J(tri, (spec.data_tet(6), spec.data_tet(10))), m, l


def base_triangulation(family: str) -> Triangulation:
    """The base member in the numbering of the shipped curves and index lists."""
    spec = family_spec(family)
    tri = data.triangulation(spec.base_name)
    return tri.relabel(spec.relabel) if spec.relabel else tri


SHIPPED_MEMBERS = {"k5": ("K", 5), "k11": ("K", 11), "k13": ("K", 13),
                   "j2": ("J", 2), "j4": ("J", 4), "j6": ("J", 6), "j8": ("J", 8)}


def member(family: str, n: int) -> FamilyMember:
    """K_n or J_n with its equations, curves and extended index lists."""
    spec = family_spec(family)
    spec.check_n(n)
    tri, m, l = _chain(spec.family, n)
    extra = tri.size - len(spec.index_templates[0])
    indices = tuple(t + (spec.append_symbol,) * extra for t in spec.index_templates)
    return FamilyMember(spec.family, n, tri, exponent_matrix(spec.family, tri), m, l, indices)


# --------------------------------------------------------------------------
# closed forms and checks


def closed_form_vector(family: str, index_id: int, n: int) -> tuple[int, ...]:
    """Predicted degeneration vector; ``index_id`` counts from 1."""
    family = family.upper()
    if family == "K":
        if n < 5 or n % 2 == 0:
            raise FamilyError(f"K closed forms need odd n >= 5, got {n}")
        heads = {
            1: (1, n - 1, 1, n, 1, n - 1, n - 1, n - 1, n + 1, n, 3 * n - 1, 2 * n - 1, 2 * n, n - 1),
            2: (1, 2, 1, 1, 1, n - 2, 1, 2, n - 2, 1, 1, 3, 4, 2),
            3: (1, 2, 1, 1, 1, n - 2, 1, 2, n - 2, 1, 1, 2, 2, 1),
        }
        sign = (-1) ** ((n + 1) // 2) if index_id == 3 else (-1) ** ((n - 1) // 2)
        tail = tuple(range(n - 3, 0, -2))
    elif family == "J":
        if n < 2 or n % 2:
            raise FamilyError(f"J closed forms need even n >= 2, got {n}")
        heads = {
            1: (2 * n - 1, n, n, 1, n - 1, n + 1, n - 1, 2 * n - 1, n, 3 * n - 2, 2 * n,
                n - 1, n - 1, n - 1, 1, 1, 1, 1),
            2: (2 * n + 1, n + 1, n + 1, 1, n, n + 2, n, 2 * n, n, 2 * n, 3 * n + 3,
                n, 2 * n + 1, 1, n + 2, 1, 1, 1),
        }
        sign = (-1) ** (n // 2)
        tail = tuple(range(n - 2, 0, -2))
    else:
        raise FamilyError(f"unknown family {family!r}")
    if index_id not in heads:
        raise FamilyError(f"{family} has no index list I_{index_id}")
    return tuple(sign * v for v in heads[index_id] + tail)


def expected_slope(family: str, index_id: int, n: int) -> Slope:
    family = family.upper()
    if family == "K":
        value = {1: Fraction(2 * n * n - 10 * n + 2, n), 2: Fraction(6), 3: Fraction(0)}[index_id]
    else:
        value = {1: Fraction(-(14 * n - 2), n), 2: Fraction(-(10 * n + 8), n + 1)}[index_id]
    return Slope.of(value.numerator, value.denominator)


def check_structural_lemma(before, after) -> bool:
    """``after`` is ``before`` bordered by row (0..0, 1, -2) and column (0..0, 1, -2)^T."""
    before = [list(r) for r in before]
    after = [list(r) for r in after]
    r, c = len(before), len(before[0]) if before else 0
    if len(after) != r + 1 or any(len(row) != c + 1 for row in after):
        raise ValueError(f"expected a {r + 1} x {c + 1} matrix after a {r} x {c} one")
    if r < 1 or c < 1:
        raise ValueError("the bordering check needs a non-empty matrix")
    border_row = [0] * (c - 1) + [1, -2]
    border_col = [0] * (r - 1) + [1]
    return (
        all(after[i][:c] == before[i] for i in range(r))
        and [after[i][c] for i in range(r)] == border_col
        and after[r] == border_row
    )


def check_recurrence(d_n, d_n2, d_n4, family: str, n: int, index_id: int = 1) -> bool:
    """d_{n+4} = -2 (d_{n+2}, 0) - (d_n, 0, 0) + s (0, ..., 0, 2).

    s is the sign of d_{n+4}: (-1)^((n+3)/2) for K and (-1)^((n+4)/2) for J.
    The K list I_3 has the opposite overall sign, so its s flips as well.
    """
    d_n, d_n2, d_n4 = list(d_n), list(d_n2), list(d_n4)
    if len(d_n2) != len(d_n) + 1 or len(d_n4) != len(d_n) + 2:
        raise ValueError("consecutive vectors must grow by one entry per step")
    if family.upper() == "K":
        exp = (n + 3) // 2 + (1 if index_id == 3 else 0)
    else:
        exp = (n + 4) // 2
    want = [-2 * a - b for a, b in zip(d_n2 + [0], d_n + [0, 0])]
    want[-1] += 2 * (-1) ** exp
    return want == d_n4


@dataclass
class FamilyRow:
    n: int
    tets: int
    results: list[SlopeResult]
    expected: list[Slope]
    closed_form_ok: bool | None
    lemma_ok: bool | None
    recurrence_ok: bool | None

    @property
    def slopes(self) -> list[Slope | None]:
        return [r.slope for r in self.results]

    @property
    def ok(self) -> bool:
        checks = (self.closed_form_ok, self.lemma_ok, self.recurrence_ok)
        return self.slopes == self.expected and all(c is not False for c in checks)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "tets": self.tets,
            "slopes": [str(s) if s is not None else None for s in self.slopes],
            "expected_slopes": [str(s) for s in self.expected],
            "d_vectors": [list(r.d) for r in self.results],
            "closed_form_ok": self.closed_form_ok,
            "recurrence_ok": self.recurrence_ok,
            "lemma_ok": self.lemma_ok,
        }


def family_report(family: str, max_n: int, min_n: int | None = None) -> list[FamilyRow]:
    """Evaluate every member up to ``max_n`` and run all family-level checks."""
    spec = family_spec(family)
    start = spec.base_n if min_n is None else min_n
    spec.check_n(start)
    closed_from = 5 if spec.family == "K" else 2
    lemma_from = 7 if spec.family == "K" else 8
    rows: list[FamilyRow] = []
    history: dict[int, list[SlopeResult]] = {}
    matrices: dict[int, list] = {}
    n = spec.base_n
    while n <= max_n:
        mem = member(spec.family, n)
        if mem.triangulation.size != spec.tets(n):
            raise TriangulationError(f"{spec.family}_{n}: {mem.triangulation.size} tets, "
                                     f"expected {spec.tets(n)}")
        results = mem.evaluate()
        history[n] = results
        matrices[n] = [degeneration_matrix(mem.R, idx) for idx in mem.indices]
        if n < start:
            n += 2
            continue
        ids = range(1, len(results) + 1)
        closed = None
        if n >= closed_from:
            closed = all(r.d == closed_form_vector(spec.family, i, n) for i, r in zip(ids, results))
        lemma = None
        if n >= lemma_from and n - 2 in matrices:
            lemma = all(check_structural_lemma(a, b) for a, b in zip(matrices[n - 2], matrices[n]))
        rec = None
        if n - 4 >= closed_from and n - 4 in history:
            rec = all(check_recurrence(a.d, b.d, c.d, spec.family, n - 4, i)
                      for i, a, b, c in zip(ids, history[n - 4], history[n - 2], results))
        expected = [expected_slope(spec.family, i, n) for i in ids]
        rows.append(FamilyRow(n, mem.triangulation.size, results, expected, closed, lemma, rec))
        n += 2
    return rows
