import numpy as np
import pytest

from analytic_pr import (
    CircleSystem,
    CoincidentCenters,
    DegenerateGeometry,
    NoCommonPoint,
    im_ratio,
    solve_three_circles,
)
from analytic_pr.circles import residual
from oracles import naive_circle_residual


def _planted(z, centers):
    """System whose circles all pass through ``z`` by construction."""
    radii = tuple(abs(z + v) for v in centers)
    return CircleSystem(centers=tuple(centers), radii=radii)


def test_known_point_origin():
    sys = _planted(0j, (0j, 1 + 0j, 1j))
    assert solve_three_circles(sys) == 0j


def test_known_point_one_plus_i():
    # radii written out by hand: |1+i|, |2+i|, |1+2i|
    sys = CircleSystem(
        centers=(0j, 1 + 0j, 1j),
        radii=(np.sqrt(2.0), np.sqrt(5.0), np.sqrt(5.0)),
    )
    z = solve_three_circles(sys)
    assert abs(z - (1 + 1j)) < 1e-12


def test_im_ratio_values():
    # (0 - 1) / (0 - 1j) = 1/1j = -1j
    assert im_ratio(0j, 1 + 0j, 1j) == -1.0
    assert im_ratio(0j, 1 + 0j, 2 + 0j) == 0.0
    with pytest.raises(CoincidentCenters):
        im_ratio(1 + 1j, 0j, 1 + 1j)
    with pytest.raises(CoincidentCenters):
        im_ratio(1 + 1j, 0j, 1 + 1j + 1e-16)


def test_planted_points_recovered():
    rng = np.random.default_rng(301)
    for _ in range(300):
        z = complex(*rng.standard_normal(2))
        centers = rng.standard_normal((3, 2)) @ np.array([1, 1j])
        if abs(im_ratio(*centers)) <= 1e-6:
            continue
        sys = _planted(z, centers)
        got = solve_three_circles(sys)
        assert abs(got - z) <= 1e-10 * max(1.0, abs(z))
        assert naive_circle_residual(got, sys.centers, sys.radii) <= 1e-10


def test_collinear_centers_rejected():
    rng = np.random.default_rng(302)
    for _ in range(100):
        base = complex(*rng.standard_normal(2))
        step = complex(*rng.standard_normal(2))
        t2, t3 = rng.standard_normal(2)
        centers = (base, base + t2 * step, base + t3 * step)
        if abs(centers[0] - centers[2]) < 1e-9:
            continue
        sys = _planted(1 + 2j, centers)
        with pytest.raises(DegenerateGeometry):
            solve_three_circles(sys)


def test_inconsistent_radii_rejected():
    sys = CircleSystem(centers=(0j, 1 + 0j, 1j), radii=(2.0, 1.0, 1.0))
    with pytest.raises(NoCommonPoint):
        solve_three_circles(sys)


def test_residual_matches_oracle():
    rng = np.random.default_rng(303)
    for _ in range(50):
        z = complex(*rng.standard_normal(2))
        centers = tuple(rng.standard_normal(3) + 1j * rng.standard_normal(3))
        radii = tuple(np.abs(rng.standard_normal(3)))
        sys = CircleSystem(centers=centers, radii=radii)
        assert residual(z, sys) == pytest.approx(
            naive_circle_residual(z, centers, radii), abs=1e-14
        )


def test_circle_system_validation():
    with pytest.raises(ValueError):
        CircleSystem(centers=(0j, 1j), radii=(1.0, 1.0))
    with pytest.raises(ValueError):
        CircleSystem(centers=(0j, 1j, 2j), radii=(1.0, -0.5, 1.0))
    sys = CircleSystem(centers=(3j, 1 + 0j, 0j), radii=(0.5, 4.0, 1.0))
    assert sys.scale == 4.0
