import math

import numpy as np
import pytest

from spikeloc import (
    IntervalSet,
    PointSet,
    contains,
    dist_point_to_points,
    max_dev_points_to_set,
    max_dev_set_to_points,
    wrap_point,
    wrapped_distance,
)


def brute_force_dev(eset, pset, n=1_000_000):
    """Grid-scan oracle for the set-to-points deviation."""
    pts = np.sort(np.array(pset.points))
    if eset.domain == "periodic":
        grid = -0.5 + np.arange(n) / n
        aug = np.concatenate([pts - 1.0, pts, pts + 1.0])
    else:
        lo = min(a for a, _ in eset.intervals) - 0.1
        hi = max(b for _, b in eset.intervals) + 0.1
        grid = np.linspace(lo, hi, n)
        aug = pts
    idx = np.searchsorted(aug, grid)
    left = aug[np.clip(idx - 1, 0, aug.size - 1)]
    right = aug[np.clip(idx, 0, aug.size - 1)]
    dist = np.minimum(np.abs(grid - left), np.abs(right - grid))
    mask = np.zeros(n, dtype=bool)
    for a, b in eset.intervals:
        if eset.domain == "periodic" and a > b:
            mask |= (grid >= a) | (grid <= b)
        else:
            mask |= (grid >= a) & (grid <= b)
    step = float(grid[1] - grid[0])
    if not mask.any():
        return 0.0, step
    return float(dist[mask].max()), step


def test_wrap_helpers():
    assert wrap_point(0.6) == pytest.approx(-0.4)
    assert wrap_point(-0.5) == -0.5
    assert wrap_point(0.5) == -0.5
    assert wrapped_distance(0.4, -0.45) == pytest.approx(0.15)
    assert wrapped_distance(0.1, 0.1) == 0.0


def test_dist_point_to_points_examples():
    P = PointSet.make([-0.45], domain="periodic")
    assert dist_point_to_points(0.4, P) == pytest.approx(0.15)
    assert dist_point_to_points(-0.45, P) == 0.0
    P2 = PointSet.make([0.1, 0.45], domain="real")
    assert dist_point_to_points(0.3, P2) == pytest.approx(0.15)


def test_pointset_wraps_sorts_dedups():
    P = PointSet.make([0.7, -0.3, -0.3 + 1e-17], domain="periodic")
    assert len(P.points) == 1 and P.points[0] == pytest.approx(-0.3)
    P2 = PointSet.make([0.5, 0.2], domain="periodic")
    assert P2.points == (-0.5, 0.2)


def test_max_dev_set_to_points_endpoint_case():
    E = IntervalSet.make([(0.1, 0.2)], domain="real")
    P = PointSet.make([0.12], domain="real")
    assert max_dev_set_to_points(E, P) == pytest.approx(0.08)


def test_max_dev_set_to_points_voronoi_case():
    E = IntervalSet.make([(0.0, 0.4)], domain="real")
    P = PointSet.make([0.1, 0.3], domain="real")
    assert max_dev_set_to_points(E, P) == pytest.approx(0.1)


def test_max_dev_degenerate_interval():
    E = IntervalSet.make([(0.25, 0.25)], domain="real")
    P = PointSet.make([0.25], domain="real")
    assert max_dev_set_to_points(E, P) == 0.0


def test_max_dev_empty_set_is_zero():
    E = IntervalSet.make([], domain="periodic")
    assert E.is_empty
    assert max_dev_set_to_points(E, PointSet.make([0.1], domain="periodic")) == 0.0


def test_max_dev_points_to_set_examples():
    E = IntervalSet.make([(0.1, 0.2)], domain="real")
    assert max_dev_points_to_set(PointSet.make([0.15], domain="real"), E) == 0.0
    assert max_dev_points_to_set(PointSet.make([0.5], domain="real"), E) == pytest.approx(0.3)
    Ep = IntervalSet.make([(0.45, 0.48)], domain="periodic")
    Pp = PointSet.make([-0.49], domain="periodic")
    assert max_dev_points_to_set(Pp, Ep) == pytest.approx(0.03)


def test_contains_closed_endpoints():
    E = IntervalSet.make([(0.1, 0.2), (0.5, 0.7)], domain="real")
    assert contains(PointSet.make([0.1, 0.15, 0.7], domain="real"), E)
    assert not contains(PointSet.make([0.3], domain="real"), E)
    assert contains(PointSet.make([0.2], domain="real"), E)


def test_periodic_wrap_interval_membership():
    E = IntervalSet.make([(0.4, 0.55)], domain="periodic")  # crosses the seam
    assert E.has_wrap
    (lo, hi), = E.intervals
    assert lo == pytest.approx(0.4) and hi == pytest.approx(-0.45)
    for x in (0.45, 0.5, -0.48, 0.4):
        assert E.contains_point(x)
    assert not E.contains_point(0.0)


def test_periodic_canonical_merge_and_full_cover():
    E = IntervalSet.make([(0.3, 0.45), (0.4, 0.6), (-0.1, 0.0)], domain="periodic")
    assert len(E.intervals) == 2
    full = IntervalSet.make([(-0.5, 0.2), (0.1, 0.6)], domain="periodic")
    assert full.intervals == ((-0.5, 0.5),)
    assert full.contains_point(0.9)


def test_wrap_absorbs_multiple_arcs():
    E = IntervalSet.make([(-0.4, -0.35), (0.2, 0.25), (0.4, 1.3)], domain="periodic")
    (lo, hi), = E.intervals
    assert lo == pytest.approx(0.4) and hi == pytest.approx(0.3)
    assert lo > hi  # single wrapping interval
    assert E.contains_point(0.22) and E.contains_point(-0.38) and not E.contains_point(0.35)


def test_real_intervals_sorted_merged():
    E = IntervalSet.make([(0.5, 0.7), (0.0, 0.2), (0.15, 0.3)], domain="real")
    assert E.intervals == ((0.0, 0.3), (0.5, 0.7))
    with pytest.raises(ValueError):
        IntervalSet.make([(0.3, 0.1)], domain="real")


def test_json_round_trip():
    E = IntervalSet.make([(0.4, 0.55), (0.0, 0.1)], domain="periodic")
    E2 = IntervalSet.from_dict(E.to_dict())
    assert E2.intervals == E.intervals and E2.domain == E.domain
    assert E.to_dict()["wrap"] is True
    P = PointSet.make([0.3, -0.2], domain="periodic")
    assert PointSet.from_dict(P.to_dict()) == P


def random_pair(rng):
    domain = "periodic" if rng.random() < 0.5 else "real"
    n_iv = int(rng.integers(1, 4))
    ivs = []
    for _ in range(n_iv):
        if domain == "periodic":
            lo = rng.uniform(-0.5, 0.5)
            ln = rng.uniform(0.0, 0.45)
            ivs.append((lo, lo + ln))
        else:
            lo = rng.uniform(-1.0, 1.0)
            ivs.append((lo, lo + rng.uniform(0.0, 0.8)))
    rng_pts = rng.uniform(-0.5, 0.5, int(rng.integers(1, 5)))
    if domain == "real":
        rng_pts = rng.uniform(-1.2, 1.2, rng_pts.size)
    return (IntervalSet.make(ivs, domain=domain),
            PointSet.make(rng_pts, domain=domain))


def test_max_dev_matches_brute_force_scan():
    # exact candidate enumeration vs a 1e6-point grid scan, 1000 random pairs
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        E, P = random_pair(rng)
        exact = max_dev_set_to_points(E, P)
        scanned, step = brute_force_dev(E, P)
        assert exact >= scanned - 1e-12  # supremum dominates any grid point
        assert exact - scanned <= 2.0 * step  # and is attained up to grid resolution


def test_translation_invariance_periodic():
    rng = np.random.default_rng(77)
    for _ in range(50):
        E, P = random_pair(rng)
        if E.domain != "periodic":
            continue
        delta = rng.uniform(-1.0, 1.0)
        # translate wrap intervals through their unwrapped representation
        ivs = []
        for a, b in E.intervals:
            if a <= b:
                ivs.append((a + delta, b + delta))
            else:
                ivs.append((a + delta, b + 1.0 + delta))
        E2 = IntervalSet.make(ivs, domain="periodic")
        P2 = PointSet.make([p + delta for p in P.points], domain="periodic")
        d1 = max_dev_set_to_points(E, P)
        d2 = max_dev_set_to_points(E2, P2)
        assert d1 == pytest.approx(d2, abs=1e-12)
        assert max_dev_points_to_set(P, E) == pytest.approx(
            max_dev_points_to_set(P2, E2), abs=1e-12
        )


def test_points_to_empty_set_is_infinite():
    E = IntervalSet.make([], domain="real")
    assert max_dev_points_to_set(PointSet.make([0.0], domain="real"), E) == math.inf
