import pytest

from boundary_slopes import data
from boundary_slopes.degeneration import degeneration_matrix
from boundary_slopes.families import (
    FamilyError,
    check_recurrence,
    check_structural_lemma,
    closed_form_vector,
    extend_J,
    extend_K,
    extend_peripherals,
    family_report,
    family_spec,
    member,
)
from boundary_slopes.triangulation import check, edge_classes


def row(tri, t):
    return " ".join(g.token(f) for f, g in enumerate(tri.tets[t]))


def test_extend_K_from_K5():
    k7 = extend_K(data.triangulation("k5"))
    check(k7)
    assert k7.size == 16
    assert row(k7, 14) == "15(312) 4(213) 15(013) 6(103)"
    assert row(k7, 15) == "15(320) 14(023) 15(210) 14(120)"


def test_extend_K_reproduces_shipped_tables():
    k11 = extend_K(extend_K(extend_K(data.triangulation("k5"))))
    assert k11 == data.triangulation("k11")
    assert extend_K(k11) == data.triangulation("k13")


def test_extend_K_edge_classes():
    before = edge_classes(data.triangulation("k11"))
    after = edge_classes(extend_K(data.triangulation("k11")))
    assert len(after) == len(before) + 1
    assert after[-1].degree == 3
    # the old final class picks up one member from the new tet
    grown = next(c for c in after if set(before[-1].members) <= set(c.members))
    assert grown.degree == 4
    # total degree grows by exactly six
    assert sum(c.degree for c in after) == sum(c.degree for c in before) + 6


def test_extend_J_tables():
    j2, j4, j6, j8 = (data.triangulation(f"j{k}") for k in (2, 4, 6, 8))
    assert extend_J(j2) == j4
    assert row(j4, 18) == "6(032) 10(012) 18(231) 18(302)"
    got6 = extend_J(j4)
    assert got6 == j6
    assert row(got6, 18) == "6(032) 10(012) 19(021) 19(103)"
    assert row(got6, 19) == "18(032) 18(213) 19(231) 19(302)"
    got8 = extend_J(got6)
    assert got8 == j8
    assert row(got8, 19) == "18(032) 18(213) 20(021) 20(103)"
    assert row(got8, 20) == "19(032) 19(213) 20(231) 20(302)"
    assert edge_classes(got8)[-1].members == ((19, "23"), (20, "03"), (20, "12"))


def test_extension_preconditions():
    with pytest.raises(FamilyError):
        extend_K(data.triangulation("j2"))
    with pytest.raises(FamilyError):
        extend_J(data.triangulation("k5"))
    with pytest.raises(FamilyError):
        extend_J(data.triangulation("k11"))  # 18 tets but no hexagon gluing


def test_extend_peripherals_K():
    m, l = data.curves("k5")
    threes = [i for i, v in enumerate(l.coeffs) if v == 3]
    fours = [i for i, v in enumerate(l.coeffs) if v == 4]
    for _ in range(2):
        m, l = extend_peripherals("K", m, l)
    assert len(m) == len(l) == 34
    assert [l.coeffs[i] for i in threes] == [11, 11]
    assert [l.coeffs[i] for i in fours] == [12]
    assert l.coeffs[-4:] == (0, 0, 0, 0)


def test_extend_peripherals_J_pads_only():
    m, l = data.curves("j2")
    m2, l2 = extend_peripherals("J", m, l)
    assert l2.coeffs == l.coeffs + (0, 0)
    assert m2.coeffs == m.coeffs + (0, 0)


def test_meridian_support_fixed():
    for family, base in (("K", 5), ("J", 2)):
        support = {i for i, v in enumerate(member(family, base).meridian.coeffs) if v}
        for n in range(base + 2, base + 12, 2):
            assert {i for i, v in enumerate(member(family, n).meridian.coeffs) if v} == support


def test_generated_members_match_shipped_in_data_numbering():
    for k in (4, 6, 8):
        perm = data.relabeling(f"j{k}")
        assert perm[:18] == list(family_spec("J").relabel)
        assert member("J", k).triangulation == data.triangulation(f"j{k}").relabel(perm)


def test_closed_forms():
    assert closed_form_vector("K", 1, 7) == tuple(-v for v in (1, 6, 1, 7, 1, 6, 6, 6, 8, 7, 20, 13, 14, 6, 4, 2))
    assert closed_form_vector("K", 1, 5) == (1, 4, 1, 5, 1, 4, 4, 4, 6, 5, 14, 9, 10, 4, 2)
    assert closed_form_vector("K", 3, 5) == tuple(-v for v in (1, 2, 1, 1, 1, 3, 1, 2, 3, 1, 1, 2, 2, 1, 2))
    assert closed_form_vector("J", 1, 8) == (15, 8, 8, 1, 7, 9, 7, 15, 8, 22, 16, 7, 7, 7, 1, 1, 1, 1, 6, 4, 2)


@pytest.mark.parametrize("family,index_id,n", [("K", 1, 3), ("K", 1, 6), ("J", 1, 3), ("J", 1, 0), ("K", 4, 5), ("Q", 1, 5)])
def test_closed_form_range_errors(family, index_id, n):
    with pytest.raises(FamilyError):
        closed_form_vector(family, index_id, n)


def test_member_range_errors():
    with pytest.raises(FamilyError):
        member("K", 6)
    with pytest.raises(FamilyError):
        member("J", 5)


@pytest.mark.parametrize("family,n", [("K", 5), ("K", 9), ("K", 21), ("J", 2), ("J", 4), ("J", 12)])
def test_computed_vectors_match_closed_forms(family, n):
    for i, result in enumerate(member(family, n).evaluate(), start=1):
        assert result.d == closed_form_vector(family, i, n)


def _matrices(family, n):
    mem = member(family, n)
    return [degeneration_matrix(mem.R, idx) for idx in mem.indices]


def test_structural_lemma():
    assert check_structural_lemma(_matrices("K", 7)[0], _matrices("K", 9)[0])
    assert check_structural_lemma(_matrices("J", 6)[1], _matrices("J", 8)[1])
    after = [list(r) for r in _matrices("K", 9)[0]]
    after[-1][-1] = -3
    assert not check_structural_lemma(_matrices("K", 7)[0], after)
    after = [list(r) for r in _matrices("J", 8)[1]]
    after[-2][-1] = 0
    assert not check_structural_lemma(_matrices("J", 6)[1], after)
    with pytest.raises(ValueError):
        check_structural_lemma(_matrices("K", 7)[0], _matrices("K", 11)[0])


def test_recurrence_examples():
    d5 = (1, 4, 1, 5, 1, 4, 4, 4, 6, 5, 14, 9, 10, 4, 2)
    d7 = tuple(-v for v in (1, 6, 1, 7, 1, 6, 6, 6, 8, 7, 20, 13, 14, 6, 4, 2))
    d9 = member("K", 9).evaluate()[0].d
    assert check_recurrence(d5, d7, d9, "K", 5)

    d6 = tuple(-v for v in (11, 6, 6, 1, 5, 7, 5, 11, 6, 16, 12, 5, 5, 5, 1, 1, 1, 1, 4, 2))
    d8 = (15, 8, 8, 1, 7, 9, 7, 15, 8, 22, 16, 7, 7, 7, 1, 1, 1, 1, 6, 4, 2)
    d10 = member("J", 10).evaluate()[0].d
    assert check_recurrence(d6, d8, d10, "J", 6)

    e6 = tuple(-v for v in (13, 7, 7, 1, 6, 8, 6, 12, 6, 12, 21, 6, 13, 1, 8, 1, 1, 1, 4, 2))
    assert member("J", 6).evaluate()[1].d == e6
    e8, e10 = member("J", 8).evaluate()[1].d, member("J", 10).evaluate()[1].d
    assert check_recurrence(e6, e8, e10, "J", 6)

    assert not check_recurrence(d5, d7, tuple(-v for v in d9), "K", 5)
    with pytest.raises(ValueError):
        check_recurrence(d5, d7, d7, "K", 5)


def test_tet_counts():
    for n in range(5, 30, 2):
        assert member("K", n).triangulation.size == (n + 25) // 2
    for n in range(2, 31, 2):
        assert member("J", n).triangulation.size == (n + 34) // 2


@pytest.mark.parametrize("n", range(5, 28, 2))
def test_K_edge_schema(n):
    tri = member("K", n + 2).triangulation
    m = tri.size - 1
    classes = edge_classes(tri)
    assert sum(c.degree for c in classes) == 6 * tri.size and len(classes) == tri.size
    big = next(c for c in classes if (m, "03") in c)
    assert big.degree == n + 3
    assert big.members[-3:] == ((m, "02"), (m, "03"), (m, "12"))
    degrees = [c.degree for c in classes]
    tail = (n + 2 - 5) // 2
    assert degrees[-1] == 3 and degrees[-1 - tail:-1] == [4] * tail


@pytest.mark.parametrize("n", range(4, 29, 2))
def test_J_edge_schema(n):
    tri = member("J", n + 2).triangulation
    m = tri.size - 1
    classes = edge_classes(tri)
    assert sum(c.degree for c in classes) == 6 * tri.size and len(classes) == tri.size
    big = next(c for c in classes if (m, "02") in c)
    assert big.degree == n + 5
    assert big.members[-3:] == ((m, "02"), (m, "13"), (m, "23"))
    degrees = [c.degree for c in classes]
    tail = (n + 2) // 2 - 1
    assert degrees[-1] == 3 and degrees[-1 - tail:-1] == [4] * tail


def test_family_report_rows():
    rows = family_report("K", 11)
    assert [r.n for r in rows] == [5, 7, 9, 11]
    assert all(r.ok for r in rows)
    assert rows[0].lemma_ok is None and rows[1].lemma_ok
    assert rows[1].recurrence_ok is None and rows[2].recurrence_ok
    assert [str(s) for s in rows[3].slopes] == ["134/11", "6/1", "0/1"]
    j = family_report("J", 10, min_n=8)
    assert [r.n for r in j] == [8, 10] and all(r.ok for r in j)
    assert set(j[0].to_json()) == {"n", "tets", "slopes", "expected_slopes", "d_vectors",
                                   "closed_form_ok", "recurrence_ok", "lemma_ok"}

