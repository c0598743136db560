import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from platoonsim.errors import DomainError
from platoonsim.geoframe import (
    FrameConfig,
    GeoCoordinate,
    LocalPoint,
    from_local,
    heading_from_local,
    heading_to_local,
    project,
    rotate,
    to_local,
    wrap_angle,
)

R = 6_371_000.0
REF = GeoCoordinate.from_degrees(40.0, -83.0)
coord = st.floats(-10_000, 10_000, allow_nan=False)
angle = st.floats(-math.pi, math.pi, allow_nan=False).filter(lambda a: a > -math.pi)


def test_reference_maps_to_origin():
    for rot in (0.0, 0.7, math.pi):
        assert to_local(REF, FrameConfig(REF, rot)) == (0.0, 0.0)


def test_project_north_offset_hand_value():
    frame = FrameConfig(GeoCoordinate(0.3, 0.1))
    x, y = project(GeoCoordinate(0.3 + 1e-5, 0.1), frame)
    assert x == 0.0
    assert y == pytest.approx(63.71, abs=1e-9)


def test_project_east_offset_at_equator():
    frame = FrameConfig(GeoCoordinate(0.0, 0.2))
    x, y = project(GeoCoordinate(0.0, 0.2 + 1e-5), frame)
    assert x == pytest.approx(63.71, abs=1e-9)
    assert y == 0.0


@pytest.mark.parametrize("p, theta, expected", [((1, 0), 0.0, (1, 0)), ((1, 0), math.pi / 2, (0, 1)), ((3, 4), math.pi, (-3, -4))])
def test_rotate_matrix(p, theta, expected):
    assert rotate(p, theta) == pytest.approx(expected, abs=1e-15)


def test_to_local_quarter_turn_composes_projection_and_rotation():
    frame = FrameConfig(GeoCoordinate(0.3, 0.1), rotation=math.pi / 2)
    q = to_local(GeoCoordinate(0.3 + 1e-5, 0.1), frame)
    # (0, 63.71) under [[c,-s],[s,c]] at 90 degrees -> (-63.71, 0)
    assert q == pytest.approx((-63.71, 0.0), abs=1e-9)


def test_from_local_origin_is_reference():
    frame = FrameConfig(REF, 0.4)
    g = from_local(LocalPoint(0.0, 0.0), frame)
    assert g.lat == pytest.approx(REF.lat, abs=1e-15)
    assert g.lon == pytest.approx(REF.lon, abs=1e-15)


@pytest.mark.parametrize("p, tol", [((10.0, 5.0), 1e-6), ((-50.0, 120.0), 1e-5)])
def test_round_trip_examples(p, tol):
    frame = FrameConfig(REF, 0.3)
    q = to_local(from_local(LocalPoint(*p), frame), frame)
    assert math.dist(q, p) <= tol


@given(coord, coord, angle)
def test_round_trip_property(qx, qy, rot):
    frame = FrameConfig(REF, rot)
    q = to_local(from_local(LocalPoint(qx, qy), frame), frame)
    assert math.dist(q, (qx, qy)) <= 1e-5


@given(coord, coord, angle)
def test_rotation_preserves_norm(x, y, theta):
    n0 = math.hypot(x, y)
    n1 = math.hypot(*rotate((x, y), theta))
    assert abs(n1 - n0) <= 1e-12 * max(n0, 1e-300) + 1e-300


@given(st.floats(-0.001, 0.001), st.floats(-0.001, 0.001))
def test_zero_rotation_equals_projection(dlat, dlon):
    frame = FrameConfig(REF)
    g = GeoCoordinate(REF.lat + dlat, REF.lon + dlon)
    assert tuple(to_local(g, frame)) == project(g, frame)


def test_projection_linear_in_latitude_along_reference_meridian():
    frame = FrameConfig(REF)
    d = np.linspace(-1e-3, 1e-3, 11)
    ys = [project(GeoCoordinate(REF.lat + di, REF.lon), frame)[1] for di in d]
    np.testing.assert_allclose(ys, R * d, rtol=0, atol=1e-7)


def test_non_finite_input_rejected():
    frame = FrameConfig(REF)
    with pytest.raises(DomainError):
        project(GeoCoordinate(math.nan, 0.0), frame)
    with pytest.raises(DomainError):
        rotate((math.inf, 0.0), 0.0)


@pytest.mark.parametrize("kwargs", [{"earth_radius": 0.0}, {"earth_radius": -1.0}, {"rotation": -math.pi}, {"rotation": 4.0}])
def test_frame_config_validation(kwargs):
    with pytest.raises(DomainError):
        FrameConfig(REF, **kwargs)


def test_from_local_out_of_range_latitude():
    with pytest.raises(DomainError):
        from_local(LocalPoint(0.0, 1.2e7), FrameConfig(REF))


@given(st.floats(-10, 10), angle)
def test_heading_conversion_inverse(h, rot):
    frame = FrameConfig(REF, rot)
    assert wrap_angle(heading_from_local(heading_to_local(h, frame), frame) - h) == pytest.approx(0.0, abs=1e-12)


@given(st.floats(-100, 100))
def test_wrap_angle_range(a):
    w = wrap_angle(a)
    assert -math.pi < w <= math.pi
    assert math.isclose(math.cos(w), math.cos(a), abs_tol=1e-9)
    assert math.isclose(math.sin(w), math.sin(a), abs_tol=1e-9)


@given(angle, st.floats(0, 2 * math.pi), st.floats(0.1, 50))
def test_rotated_frame_keeps_motion_direction(rot, heading, step):
    """A step along the local heading lands where the geographic heading says it should."""
    frame = FrameConfig(REF, rot)
    h_local = heading_to_local(heading, frame)
    p1 = LocalPoint(step * math.sin(h_local), step * math.cos(h_local))
    east_north = rotate(p1, -rot)
    assert east_north == pytest.approx((step * math.sin(heading), step * math.cos(heading)), abs=1e-9)
