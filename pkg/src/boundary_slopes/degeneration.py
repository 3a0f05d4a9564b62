"""Degeneration matrices R(I), exact maximal minors and the ideal-point test.

Everything here works over Python integers; nothing is ever converted to
floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Sequence

INF = 2
_SYMBOLS = {"0": 0, "1": 1, "i": INF, "I": INF, "∞": INF, "inf": INF}


def parse_index(text: str) -> tuple[int, ...]:
    """``"i01"`` (or ``"∞ 0 1"``) -> ``(INF, 0, 1)``."""
    text = text.strip()
    parts = text.replace(",", " ").split() if (" " in text or "," in text) else list(text)
    try:
        return tuple(_SYMBOLS[p] for p in parts)
    except KeyError as exc:
        raise ValueError(f"bad degeneration index symbol {exc.args[0]!r} in {text!r}") from None


def format_index(index: Sequence[int]) -> str:
    return "".join("i" if v == INF else str(v) for v in index)


def read_index_file(text: str) -> list[tuple[int, ...]]:
    return [parse_index(line) for line in text.splitlines()
            if line.strip() and not line.lstrip().startswith("#")]


def degeneration_matrix(R, index: Sequence[int]) -> list[list[int]]:
    """Column k is the z-column of tet k (i=0), its w-column (i=1) or minus their sum (i=inf)."""
    rows = R.rows if hasattr(R, "rows") else R
    n = len(index)
    out = []
    for row in rows:
        if len(row) != 2 * n:
            raise ValueError(f"index has length {n} but R has {len(row) // 2} tetrahedra")
        new = []
        for k, i in enumerate(index):
            a, b = row[2 * k], row[2 * k + 1]
            if i == 0:
                new.append(a)
            elif i == 1:
                new.append(b)
            elif i == INF:
                new.append(-a - b)
            else:
                raise ValueError(f"index entry {i!r} not in {{0, 1, inf}}")
        out.append(new)
    return out


def exact_det(M: Sequence[Sequence[int]]) -> int:
    """Determinant by Bareiss fraction-free elimination."""
    A = [list(r) for r in M]
    n = len(A)
    if any(len(r) != n for r in A):
        raise ValueError("matrix is not square")
    sign, prev = 1, 1
    for k in range(n):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        p = A[k][k]
        rk = A[k]
        for i in range(k + 1, n):
            ri = A[i]
            a = ri[k]
            for j in range(k + 1, n):
                ri[j] = (p * ri[j] - a * rk[j]) // prev
        prev = p
    return sign * prev if n else 1


def signed_minors(M: Sequence[Sequence[int]]) -> list[int]:
    """``d_k = (-1)^k det(M without column k)`` (0-based) for an r x (r+1) matrix.

    One fraction-free Gauss-Jordan pass: at the end the pivot columns hold
    D*I, and the kernel vector read off the free column is d up to the sign
    bookkeeping below.
    """
    A = [list(r) for r in M]
    r = len(A)
    n = r + 1
    if any(len(row) != n for row in A):
        raise ValueError(f"expected an {r} x {n} matrix")
    sign, prev, row = 1, 1, 0
    pivots: list[int] = []
    for c in range(n):
        if row == r:
            break
        for i in range(row, r):
            if A[i][c] != 0:
                break
        else:
            continue
        if i != row:
            A[row], A[i] = A[i], A[row]
            sign = -sign
        p = A[row][c]
        pr = A[row]
        for i in range(r):
            if i == row:
                continue
            ri = A[i]
            a = ri[c]
            if a == 0 and prev == p:
                continue
            for j in range(n):
                ri[j] = (p * ri[j] - a * pr[j]) // prev
        prev = p
        pivots.append(c)
        row += 1
    if row < r:
        return [0] * n
    (free,) = set(range(n)) - set(pivots)
    x = [0] * n
    x[free] = prev
    for i, c in enumerate(pivots):
        x[c] = -A[i][free]
    s = sign if free % 2 == 0 else -sign
    return [s * v for v in x]


@dataclass(frozen=True)
class DegenerationVector:
    d: tuple[int, ...]

    @property
    def content(self) -> int:
        c = 0
        for v in self.d:
            c = gcd(c, v)
        return c

    @property
    def primitive(self) -> tuple[int, ...]:
        c = self.content
        return tuple(v // c for v in self.d) if c else self.d

    def __neg__(self) -> "DegenerationVector":
        return DegenerationVector(tuple(-v for v in self.d))


def degeneration_vector(RI: Sequence[Sequence[int]]) -> DegenerationVector:
    return DegenerationVector(tuple(signed_minors(RI)))


def is_ideal_point(d) -> bool:
    """True iff every entry is strictly positive or every entry strictly negative."""
    vals = d.d if isinstance(d, DegenerationVector) else tuple(d)
    return bool(vals) and (all(v > 0 for v in vals) or all(v < 0 for v in vals))
