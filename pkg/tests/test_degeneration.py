import random
from functools import lru_cache

import pytest
from hypothesis import given, strategies as st

from boundary_slopes import data
from boundary_slopes.degeneration import (
    INF,
    DegenerationVector,
    degeneration_matrix,
    degeneration_vector,
    exact_det,
    format_index,
    is_ideal_point,
    parse_index,
    read_index_file,
    signed_minors,
)
from boundary_slopes.families import SHIPPED_MEMBERS, member
from boundary_slopes.gluing import build_R
from boundary_slopes.triangulation import edge_classes


def cofactor_det(M):
    """Laplace expansion along the first remaining row (memoized on the column set)."""
    n = len(M)

    @lru_cache(maxsize=None)
    def det(row, cols):
        if row == n:
            return 1
        total, sign = 0, 1
        for c in cols:
            if M[row][c]:
                total += sign * M[row][c] * det(row + 1, tuple(x for x in cols if x != c))
            sign = -sign
        return total

    return det(0, tuple(range(n)))


def test_exact_det_against_cofactor_oracle():
    rng = random.Random(20240611)
    checked = 0
    for _ in range(10_500):
        n = rng.randint(1, 7)
        M = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)]
        if rng.random() < 0.1 and n > 1:  # force some singular matrices
            M[-1] = list(M[0])
        assert exact_det(M) == cofactor_det(M), M
        checked += 1
    assert checked >= 10_000


def test_exact_det_small_cases():
    assert exact_det([]) == 1
    assert exact_det([[7]]) == 7
    assert exact_det([[0, 1], [1, 0]]) == -1
    with pytest.raises(ValueError):
        exact_det([[1, 2]])


def test_signed_minors_definition():
    rng = random.Random(7)
    for _ in range(2000):
        r = rng.randint(1, 6)
        M = [[rng.randint(-3, 3) for _ in range(r + 1)] for _ in range(r)]
        want = [(-1) ** k * exact_det([row[:k] + row[k + 1:] for row in M]) for k in range(r + 1)]
        assert signed_minors(M) == want


def test_signed_minors_empty_and_degenerate():
    assert signed_minors([]) == [1]
    assert signed_minors([[0, 0, 0], [1, 2, 3]]) == [0, 0, 0]


def test_index_parsing():
    assert parse_index("i01") == (INF, 0, 1)
    assert parse_index("∞ 0 1") == (INF, 0, 1)
    assert format_index((INF, 0, 1)) == "i01"
    assert read_index_file("# c\ni0\n\n01\n") == [(INF, 0), (0, 1)]
    with pytest.raises(ValueError):
        parse_index("0x1")


def test_matrix_columns():
    R = [[1, 2, 3, 4]]
    assert degeneration_matrix(R, (0, 0)) == [[1, 3]]
    assert degeneration_matrix(R, (1, 1)) == [[2, 4]]
    assert degeneration_matrix(R, (INF, INF)) == [[-3, -7]]
    with pytest.raises(ValueError):
        degeneration_matrix(R, (0,))


def test_vector_content_and_primitive():
    d = DegenerationVector((4, 2, 6))
    assert d.content == 2 and d.primitive == (2, 1, 3)
    assert (-d).d == (-4, -2, -6)


@given(st.lists(st.integers(-5, 5), min_size=1, max_size=10))
def test_ideal_point_negation_symmetry(values):
    d = tuple(values)
    assert is_ideal_point(d) == is_ideal_point(tuple(-v for v in d))
    if 0 in d:
        assert not is_ideal_point(d)


def _shipped_R(name):
    if name in SHIPPED_MEMBERS:
        return member(*SHIPPED_MEMBERS[name]).R
    tri = data.triangulation(name)
    return build_R(tri, edge_classes(tri), 0)


@pytest.mark.parametrize("name", data.TRIANGULATIONS)
def test_kernel_property_random_indices(name):
    R = _shipped_R(name)
    n = len(R.rows[0]) // 2
    rng = random.Random(name)
    for _ in range(1000):
        index = tuple(rng.choice((0, 1, INF)) for _ in range(n))
        M = degeneration_matrix(R, index)
        d = degeneration_vector(M).d
        assert all(sum(a * b for a, b in zip(row, d)) == 0 for row in M)
