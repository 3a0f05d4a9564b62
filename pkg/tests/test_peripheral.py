import pytest
from hypothesis import given, strategies as st

from boundary_slopes import data
from boundary_slopes.degeneration import INF, DegenerationVector, degeneration_matrix, degeneration_vector
from boundary_slopes.peripheral import (
    NoSlope,
    NotIdealPoint,
    PeripheralCurve,
    Slope,
    SlopeResult,
    boundary_slope,
    direction_vector,
    format_curves,
    parse_curves,
    valuations,
    wedge,
)

vectors = st.integers(1, 5).flatmap(
    lambda n: st.tuples(*[st.lists(st.integers(-6, 6), min_size=2 * n, max_size=2 * n)] * 3))


@given(vectors, st.integers(-4, 4))
def test_wedge_bilinear_antisymmetric(xyz, a):
    x, y, z = xyz
    assert wedge(x, y) == -wedge(y, x)
    assert wedge(x, x) == 0
    combo = [a * u + v for u, v in zip(x, z)]
    assert wedge(combo, y) == a * wedge(x, y) + wedge(z, y)


def test_wedge_length_check():
    with pytest.raises(ValueError):
        wedge([1, 2], [1, 2, 3, 4])


def test_direction_vector_keeps_sign():
    assert direction_vector((1, 0, INF), (2, -1, 3)) == [2, 0, 0, 1, -3, 3]


def test_slopes():
    assert str(Slope.of(4, -10)) == "-2/5"
    assert Slope.of(3, 0) == Slope(1, 0)
    assert Slope.parse("6") == Slope(6, 1)
    assert str(boundary_slope(5, -2)) == "2/5"
    with pytest.raises(NoSlope):
        boundary_slope(0, 0)
    with pytest.raises(ValueError):
        Slope.of(0, 0)


def test_curve_file_round_trip():
    m, l = data.curves("k5")
    assert parse_curves(format_curves(m, l)) == (m, l)
    assert len(m) == 30
    with pytest.raises(ValueError):
        parse_curves("meridian: 0 1\n")
    with pytest.raises(ValueError):
        parse_curves("meridian: 0 1\nlongitude: 0 1 2 3\n")


def test_padding():
    m = PeripheralCurve("meridian", (1, 2))
    assert m.padded(2).coeffs == (1, 2, 0, 0, 0, 0)


def test_curves_orthogonal_to_edge_equations(k5, j2):
    # the cusp curves pair to zero with every edge equation
    for mem in (k5, j2):
        for row in mem.R.rows:
            assert wedge(mem.meridian.coeffs, row) == 0
            assert wedge(mem.longitude.coeffs, row) == 0


def test_global_sign_flips_valuations_not_slope(k5):
    index = k5.indices[0]
    d = degeneration_vector(degeneration_matrix(k5.R, index))
    v = valuations(k5.meridian, k5.longitude, index, d)
    w = valuations(k5.meridian, k5.longitude, index, -d)
    assert w == (-v[0], -v[1])
    assert boundary_slope(*v) == boundary_slope(*w)


def test_non_definite_vector_rejected(k5):
    with pytest.raises(NotIdealPoint):
        valuations(k5.meridian, k5.longitude, (0,) * 15, DegenerationVector((1, 0) + (1,) * 13))


def test_result_json():
    r = SlopeResult((INF, 0), (2, 4), 1, -3, Slope(3, 1))
    assert r.c == 2
    assert r.to_json() == {"index": ["inf", 0], "d": [2, 4], "c": 2, "v_mu": 1, "v_lambda": -3, "slope": "3/1"}
    bad = SlopeResult((0, 0), (0, 1), certified=False)
    assert bad.to_json()["status"] == "not sign-definite"
