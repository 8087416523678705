"""Planar convex hulls and polygon utilities for point sets in the ROC square."""

from __future__ import annotations

import numpy as np

DEDUP_TOL = 1e-12


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def dedup_points(points, tol: float = DEDUP_TOL) -> np.ndarray:
    """Sort points lexicographically and drop near-duplicates."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        return pts
    key = np.round(pts / tol) if tol > 0 else pts
    _, idx = np.unique(key, axis=0, return_index=True)
    pts = pts[np.sort(idx)]
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    return pts[order]


def _chain(pts) -> list:
    out: list = []
    for p in pts:
        while len(out) >= 2 and _cross(out[-2], out[-1], p) <= 0:
            out.pop()
        out.append(p)
    return out


def convex_hull(points, tol: float = DEDUP_TOL) -> np.ndarray:
    """Monotone-chain convex hull.

    Returns the hull vertices counterclockwise, starting from the
    lexicographically smallest point, without collinear vertices. Degenerate
    inputs give one or two vertices.
    """
    pts = dedup_points(points, tol)
    if len(pts) <= 2:
        return pts
    pts = [tuple(p) for p in pts]
    lower = _chain(pts)
    upper = _chain(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 2:
        hull = [pts[0], pts[-1]]
    return np.array(hull, dtype=float)


def upper_hull(points, tol: float = DEDUP_TOL) -> np.ndarray:
    """Upper chain of the hull, ordered from the leftmost to the rightmost point.

    For point sets containing (0, 0) and (1, 1) in the unit square this is the
    concave ROC curve running from (0, 0) to (1, 1).
    """
    pts = dedup_points(points, tol)
    if len(pts) <= 2:
        return pts
    upper = _chain(reversed([tuple(p) for p in pts]))
    return np.array(upper[::-1], dtype=float)


def is_convex_ccw(poly, tol: float = 1e-12) -> bool:
    poly = np.asarray(poly, dtype=float)
    n = len(poly)
    if n < 3:
        return True
    return all(_cross(poly[i], poly[(i + 1) % n], poly[(i + 2) % n]) >= -tol for i in range(n))


def polygon_contains(poly, point, tol: float = 1e-12) -> bool:
    """Point-in-convex-polygon test for a counterclockwise polygon.

    Degenerate polygons (segments, single points) are handled by a distance
    test against the segment.
    """
    poly = np.asarray(poly, dtype=float)
    p = np.asarray(point, dtype=float)
    if len(poly) < 3:
        if len(poly) == 1:
            return bool(np.linalg.norm(p - poly[0]) <= tol)
        return segment_distance(poly[0], poly[1], p) <= tol
    n = len(poly)
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        edge = b - a
        length = np.hypot(*edge)
        if length == 0:
            continue
        if _cross(a, b, p) / length < -tol:
            return False
    return True


def segment_distance(a, b, p) -> float:
    a, b, p = (np.asarray(x, dtype=float) for x in (a, b, p))
    ab = b - a
    denom = ab @ ab
    t = 0.0 if denom == 0 else float(np.clip((p - a) @ ab / denom, 0.0, 1.0))
    return float(np.linalg.norm(a + t * ab - p))


def polyline_distance(polyline, p) -> float:
    """Distance from ``p`` to the nearest point of an open polyline."""
    poly = np.asarray(polyline, dtype=float)
    if len(poly) == 1:
        return float(np.linalg.norm(poly[0] - np.asarray(p)))
    return min(segment_distance(poly[i], poly[i + 1], p) for i in range(len(poly) - 1))


def interp_curve(curve, x) -> np.ndarray:
    """Evaluate a monotone ROC polyline as a function ``tp(fp)``.

    Vertical segments are resolved upward: at an ``fp`` shared by several
    vertices the largest ``tp`` is returned.
    """
    c = np.asarray(curve, dtype=float)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty_like(x)
    for i, xi in enumerate(x):
        j = np.searchsorted(c[:, 0], xi, side="right")
        if j == 0:
            out[i] = c[0, 1]
        elif j >= len(c):
            out[i] = c[-1, 1]
        else:
            x0, y0 = c[j - 1]
            x1, y1 = c[j]
            out[i] = y0 if x1 == x0 else y0 + (y1 - y0) * (xi - x0) / (x1 - x0)
    return out
