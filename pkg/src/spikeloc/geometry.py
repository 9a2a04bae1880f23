"""Exact geometry on interval sets and point sets, wrap-aware.

Supports the two one-sided deviations the guarantees bound: the largest
distance from the estimated set to the true support, and from the true
support to the estimated set.  Suprema are computed from finitely many
candidates (interval endpoints and Voronoi midpoints), never by sampling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .params import PERIODIC, REAL_LINE

DEDUP_TOL = 1e-15


def wrap_point(x: float) -> float:
    """Reduce a coordinate to [-1/2, 1/2)."""
    w = x - round(x)
    return w - 1.0 if w >= 0.5 else w


def wrapped_distance(a: float, b: float) -> float:
    """Shorter arc length between two circle points in [-1/2, 1/2)."""
    d = abs(a - b)
    d = d % 1.0
    return min(d, 1.0 - d)


@dataclass(frozen=True)
class PointSet:
    """Sorted, deduplicated point collection on the line or the circle."""

    points: tuple[float, ...]
    domain: str = PERIODIC

    @staticmethod
    def make(points, domain: str = PERIODIC) -> "PointSet":
        pts = [float(p) for p in points]
        if domain == PERIODIC:
            pts = [wrap_point(p) for p in pts]
        pts.sort()
        dedup: list[float] = []
        for p in pts:
            if not dedup or p - dedup[-1] > DEDUP_TOL:
                dedup.append(p)
        return PointSet(points=tuple(dedup), domain=domain)

    def to_dict(self) -> dict:
        return {"domain": self.domain, "points": list(self.points)}

    @staticmethod
    def from_dict(d: dict) -> "PointSet":
        return PointSet.make(d["points"], domain=d["domain"])


@dataclass(frozen=True)
class IntervalSet:
    """Disjoint sorted closed intervals; may be empty.

    On the circle an interval (lo, hi) with lo > hi wraps through +-1/2,
    i.e. it is [lo, 1/2) followed by [-1/2, hi].  Canonical form keeps at
    most one wrapping interval and lists it last.
    """

    intervals: tuple[tuple[float, float], ...]
    domain: str = REAL_LINE

    @staticmethod
    def make(intervals, domain: str = REAL_LINE) -> "IntervalSet":
        ivs = [(float(a), float(b)) for a, b in intervals]
        if domain == PERIODIC:
            return IntervalSet(_canonical_periodic(ivs), domain=PERIODIC)
        if any(b < a for a, b in ivs):
            raise ValueError("real-line intervals need lo <= hi")
        ivs.sort()
        merged: list[tuple[float, float]] = []
        for a, b in ivs:
            if merged and a <= merged[-1][1]:
                merged[-1] = (merged[-1][0], max(merged[-1][1], b))
            else:
                merged.append((a, b))
        return IntervalSet(tuple(merged), domain=REAL_LINE)

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    @property
    def has_wrap(self) -> bool:
        return any(a > b for a, b in self.intervals)

    def contains_point(self, x: float) -> bool:
        if self.domain == PERIODIC:
            x = wrap_point(x)
        for a, b in self.intervals:
            if a <= b:
                if a <= x <= b:
                    return True
            elif x >= a or x <= b:  # wrapping interval
                return True
        return False

    def endpoints(self) -> list[float]:
        out: list[float] = []
        for a, b in self.intervals:
            out.extend((a, b))
        return out

    def to_dict(self) -> dict:
        return {
            "domain": self.domain,
            "intervals": [list(iv) for iv in self.intervals],
            "wrap": self.has_wrap,
        }

    @staticmethod
    def from_dict(d: dict) -> "IntervalSet":
        return IntervalSet.make(d["intervals"], domain=d["domain"])


def _canonical_periodic(ivs: list[tuple[float, float]]) -> tuple[tuple[float, float], ...]:
    # represent each interval as (start in [-1/2,1/2), arc length), merge on
    # the circle, then convert back; a full cover becomes [-1/2, 1/2]
    arcs: list[tuple[float, float]] = []
    for a, b in ivs:
        length = (b - a) if b >= a else (b + 1.0 - a)
        if length < 0.0:
            raise ValueError(f"periodic interval ({a}, {b}) spans a negative arc")
        if length >= 1.0:
            return ((-0.5, 0.5),)
        arcs.append((wrap_point(a), length))
    if not arcs:
        return ()
    arcs.sort()
    merged: list[tuple[float, float]] = [arcs[0]]
    for s, ln in arcs[1:]:
        ps, pl = merged[-1]
        if s <= ps + pl:
            merged[-1] = (ps, max(pl, s + ln - ps))
            if merged[-1][1] >= 1.0:
                return ((-0.5, 0.5),)
        else:
            merged.append((s, ln))
    # the last arc may spill past +1/2 and absorb leading arcs
    while len(merged) > 1:
        s, ln = merged[-1]
        fs, fl = merged[0]
        if s + ln - 1.0 < fs:
            break
        end = max(s + ln, fs + 1.0 + fl)
        if end - s >= 1.0:
            return ((-0.5, 0.5),)
        merged[-1] = (s, end - s)
        merged.pop(0)
    out: list[tuple[float, float]] = []
    for s, ln in merged:
        e = s + ln
        if e <= 0.5:
            out.append((s, e))
        else:
            out.append((s, e - 1.0))  # wrap form lo > hi
    plain = sorted(iv for iv in out if iv[0] <= iv[1])
    wrapping = [iv for iv in out if iv[0] > iv[1]]
    return tuple(plain + wrapping)


def dist_point_to_points(x: float, pset: PointSet) -> float:
    """min over p of |x - p| (wrapped on the circle)."""
    if not pset.points:
        return math.inf
    if pset.domain == PERIODIC:
        xw = wrap_point(x)
        return min(wrapped_distance(xw, p) for p in pset.points)
    return min(abs(x - p) for p in pset.points)


def _dist_point_to_interval(x: float, iv: tuple[float, float], domain: str) -> float:
    a, b = iv
    if domain == PERIODIC:
        xw = wrap_point(x)
        inside = (a <= xw <= b) if a <= b else (xw >= a or xw <= b)
        if inside:
            return 0.0
        return min(wrapped_distance(xw, a), wrapped_distance(xw, b))
    if a <= x <= b:
        return 0.0
    return min(abs(x - a), abs(x - b))


def max_dev_points_to_set(pset: PointSet, eset: IntervalSet) -> float:
    """max over p of the distance to the nearest interval (0 if inside)."""
    if eset.is_empty:
        return math.inf if pset.points else 0.0
    if not pset.points:
        return 0.0
    return max(
        min(_dist_point_to_interval(p, iv, eset.domain) for iv in eset.intervals)
        for p in pset.points
    )


def _voronoi_midpoints(pset: PointSet) -> list[float]:
    pts = pset.points
    if len(pts) < 2:
        if pset.domain == PERIODIC and len(pts) == 1:
            return [wrap_point(pts[0] + 0.5)]  # antipode
        return []
    mids = [(pts[i] + pts[i + 1]) / 2.0 for i in range(len(pts) - 1)]
    if pset.domain == PERIODIC:
        mids.append(wrap_point((pts[-1] + pts[0] + 1.0) / 2.0))
    return mids


def max_dev_set_to_points(eset: IntervalSet, pset: PointSet) -> float:
    """Exact sup over x in the interval set of dist(x, points).

    The supremum of the piecewise-linear distance function is attained at an
    interval endpoint or at a Voronoi midpoint of adjacent points lying
    inside the set, so only those candidates are evaluated.  An empty set
    yields 0 (vacuous supremum; callers should flag it).
    """
    if eset.is_empty:
        return 0.0
    candidates = eset.endpoints()
    candidates.extend(m for m in _voronoi_midpoints(pset) if eset.contains_point(m))
    return max(dist_point_to_points(c, pset) for c in candidates)


def contains(pset: PointSet, eset: IntervalSet) -> bool:
    """True iff every point lies inside some closed interval."""
    return all(eset.contains_point(p) for p in pset.points)
