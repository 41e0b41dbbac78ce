import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from newtpot.domains import Domain2D
from newtpot.errors import DomainError

L_SHAPE = [(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)]


def test_areas():
    assert Domain2D.disc(2.0).area == pytest.approx(4 * math.pi)
    assert Domain2D.ellipse((2, 1)).area == pytest.approx(2 * math.pi)
    assert Domain2D.square(1.0).area == 1.0
    assert Domain2D.polygon(L_SHAPE).area == 3.0


def test_validation():
    with pytest.raises(DomainError):
        Domain2D.disc(0.0)
    with pytest.raises(DomainError):
        Domain2D.disc(float("nan"))
    with pytest.raises(DomainError):
        Domain2D.ellipse((1.0, -1.0))
    with pytest.raises(DomainError, match="3 vertices"):
        Domain2D.polygon([(0, 0), (1, 0)])
    with pytest.raises(DomainError, match="counterclockwise"):
        Domain2D.polygon([(0, 0), (0, 1), (1, 1), (1, 0)])
    with pytest.raises(DomainError, match="simple"):
        Domain2D.polygon([(0, 0), (1, 1), (1, 0), (0, 1)])
    with pytest.raises(DomainError):
        Domain2D.polygon([(0, 0), (1, 0), (1, 0), (0, 1)])
    with pytest.raises(DomainError):
        Domain2D("hexagon")


def test_convexity():
    assert Domain2D.square(1.0).is_convex
    assert not Domain2D.polygon(L_SHAPE).is_convex
    assert Domain2D.disc(1.0).is_convex


def test_inscribed_and_circumscribed_discs():
    sq = Domain2D.square(2.0)
    c, r = sq.inscribed_disc()
    assert r == pytest.approx(1.0, abs=1e-9)
    assert c == pytest.approx((0.0, 0.0), abs=1e-9)
    c, r = sq.circumscribed_disc()
    assert r == pytest.approx(math.sqrt(2), abs=1e-12)
    assert c == pytest.approx((0.0, 0.0), abs=1e-12)
    # obtuse triangle: enclosing disc is on the long edge
    tri = Domain2D.polygon([(0, 0), (4, 0), (2, 0.5)])
    c, r = tri.circumscribed_disc()
    assert r == pytest.approx(2.0) and c == pytest.approx((2.0, 0.0))
    # 3-4-5 right triangle: inradius (3 + 4 - 5) / 2 = 1
    assert Domain2D.polygon([(0, 0), (4, 0), (0, 3)]).inscribed_disc()[1] == pytest.approx(1.0, abs=1e-9)
    assert Domain2D.ellipse((2, 1)).inscribed_disc()[1] == 1.0
    assert Domain2D.ellipse((2, 1)).max_radius == 2.0
    with pytest.raises(DomainError):
        Domain2D.polygon(L_SHAPE).inscribed_disc()


@pytest.mark.parametrize(
    "dom",
    [Domain2D.square(1.0), Domain2D.ellipse((1.5, 0.5), (0.2, -0.1)), Domain2D.polygon([(0, 0), (3, 0), (1, 2)])],
)
def test_sandwich_holds(dom):
    (cx, cy), r1 = dom.inscribed_disc()
    (dx, dy), r2 = dom.circumscribed_disc()
    assert r1 <= r2
    t = np.linspace(0, 2 * np.pi, 200, endpoint=False)
    inner = np.column_stack([cx + r1 * np.cos(t), cy + r1 * np.sin(t)])
    assert np.all(dom.contains(inner, tol=1e-7))
    bnd = dom.boundary_samples(400)
    assert np.all(np.hypot(bnd[:, 0] - dx, bnd[:, 1] - dy) <= r2 * (1 + 1e-9))


def test_contains():
    sq = Domain2D.square(1.0)
    pts = [(0, 0), (0.5, 0.0), (0.5001, 0), (0.49, 0.49), (-0.6, 0)]
    assert sq.contains(pts).tolist() == [True, True, False, True, False]
    ell = Domain2D.ellipse((2, 1))
    assert ell.contains([(1.9, 0), (0, 1.01), (2, 0)]).tolist() == [True, False, True]
    ls = Domain2D.polygon(L_SHAPE)
    assert ls.contains([(0.5, 1.5), (1.5, 1.5), (1.5, 0.5)]).tolist() == [True, False, True]


def test_boundary_samples_lie_on_boundary():
    d = Domain2D.disc(0.7, (1.0, 2.0))
    b = d.boundary_samples(64)
    assert np.allclose(np.hypot(b[:, 0] - 1, b[:, 1] - 2), 0.7)
    assert len(Domain2D.square(1.0).boundary_samples(40)) == 40
    with pytest.raises(DomainError):
        d.boundary_samples(2)


def test_scaled():
    d = Domain2D.disc(1.0, (1.0, 0.0)).scaled(0.5)
    assert d.radius == 0.5 and d.center == (0.5, 0.0)
    sq = Domain2D.square(2.0).scaled(0.25)
    assert sq.area == pytest.approx(0.25)
    with pytest.raises(DomainError):
        sq.scaled(0.0)


@pytest.mark.parametrize(
    "dom",
    [Domain2D.disc(0.3, (1, -1)), Domain2D.ellipse((2, 1)), Domain2D.polygon(L_SHAPE)],
)
def test_json_round_trip(dom):
    assert Domain2D.from_json(dom.to_json()) == dom


def test_json_rejections():
    with pytest.raises(DomainError, match="unknown field"):
        Domain2D.from_dict({"shape": "disc", "radius": 1, "colour": "red"})
    with pytest.raises(DomainError, match="missing"):
        Domain2D.from_dict({"shape": "ellipse"})
    with pytest.raises(DomainError):
        Domain2D.from_json("{not json")
    with pytest.raises(DomainError):
        Domain2D.from_dict([1, 2])
    with pytest.raises(DomainError, match="center"):
        Domain2D.from_dict({"shape": "disc", "radius": 1, "center": [0, 0, 0]})
    with pytest.raises(DomainError):
        Domain2D.from_dict({"shape": "disc", "radius": "big"})


@given(st.floats(0.01, 100), st.floats(-5, 5), st.floats(-5, 5))
def test_disc_area_scales_quadratically(r, x, y):
    d = Domain2D.disc(r, (x, y))
    assert d.scaled(3.0).area == pytest.approx(9 * d.area, rel=1e-12)


@given(st.lists(st.tuples(st.floats(-1, 1), st.floats(-1, 1)), min_size=5, max_size=30))
def test_random_points_inside_square_iff_bounded(pts):
    sq = Domain2D.square(1.0)
    mask = sq.contains(pts, tol=0.0)
    for (x, y), m in zip(pts, mask):
        assert m == (abs(x) <= 0.5 and abs(y) <= 0.5)


def test_points_on_square_edges_are_inside_at_zero_tol():
    # projecting onto the edge rounds (-0.5 + 0.52 != 0.02); the boundary must still count
    sq = Domain2D.square(1.0)
    pts = [(0.5, 0.02), (-0.5, 0.3), (0.1, 0.5), (0.37, -0.5), (0.5, 0.5)]
    assert sq.contains(pts, tol=0.0).all()
    assert not sq.contains([(0.5 + 1e-15, 0.02)], tol=0.0).any()
