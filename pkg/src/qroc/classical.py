"""ROC analysis for two finite probability distributions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, NamedTuple

import numpy as np

from .errors import DegenerateDistribution, DimensionMismatch, ValidationError

CURVE_TOL = 1e-12


class RocPoint(NamedTuple):
    fp: float
    tp: float


@dataclass(frozen=True)
class Distribution:
    probs: np.ndarray

    def __init__(self, probs, tol: float = 1e-12):
        p = np.asarray(probs, dtype=float).ravel()
        if p.size < 2:
            raise ValidationError("a distribution needs at least two outcomes")
        if not np.all(np.isfinite(p)) or np.any(p < 0):
            raise ValidationError("probabilities must be finite and non-negative")
        if abs(p.sum() - 1.0) > tol:
            raise ValidationError(f"probabilities sum to {p.sum()!r}, expected 1")
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    def __len__(self) -> int:
        return self.probs.size


def _as_dist(d) -> np.ndarray:
    return d.probs if isinstance(d, Distribution) else Distribution(d).probs


@dataclass(frozen=True)
class BinaryClassifier:
    """Randomised rule: accept outcome 0 as positive with ``pa_p``, outcome 1 as negative with ``pa_n``."""

    pa_p: float
    pa_n: float

    def __post_init__(self):
        for name in ("pa_p", "pa_n"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValidationError(f"{name}={v} outside [0, 1]")


@dataclass(frozen=True)
class RocCurve:
    """Monotone polyline from (0, 0) to (1, 1) stored as an ``(n, 2)`` array of ``(fp, tp)``."""

    points: np.ndarray

    def __init__(self, points, tol: float = CURVE_TOL):
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        if len(pts) < 2:
            raise ValidationError("a ROC curve needs at least two points")
        if np.any(np.abs(pts[0]) > tol) or np.any(np.abs(pts[-1] - 1.0) > tol):
            raise ValidationError("a ROC curve must run from (0, 0) to (1, 1)")
        if np.any(np.diff(pts, axis=0) < -tol):
            raise ValidationError("ROC curve coordinates must be non-decreasing")
        pts = np.clip(pts, 0.0, 1.0)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def fp(self) -> np.ndarray:
        return self.points[:, 0]

    @property
    def tp(self) -> np.ndarray:
        return self.points[:, 1]

    def __len__(self) -> int:
        return len(self.points)

    def is_concave(self, tol: float = 1e-9) -> bool:
        """Slopes of consecutive segments are non-increasing (checked by cross products)."""
        d = np.diff(self.points, axis=0)
        cross = d[:-1, 0] * d[1:, 1] - d[:-1, 1] * d[1:, 0]
        return bool(np.all(cross <= tol))


def classifier_point(p: float, q: float, c: BinaryClassifier,
                     convention: Literal["direct", "swapped"] = "direct") -> RocPoint:
    """ROC point of a randomised classifier for the binary distributions ``(p, 1-p)`` vs ``(q, 1-q)``.

    With ``convention="direct"``, ``pa_p`` is the probability of concluding
    positive on outcome 0 and ``pa_n`` that of concluding negative on outcome 1.
    ``"swapped"`` exchanges the roles of the two outcomes, so that
    ``pa_p = pa_n = 0`` lands on ``(q, p)`` instead of ``(1-q, 1-p)``.
    """
    for name, v in (("p", p), ("q", q)):
        if not 0.0 <= v <= 1.0:
            raise ValidationError(f"{name}={v} outside [0, 1]")
    if convention == "swapped":
        p, q = 1.0 - p, 1.0 - q
    elif convention != "direct":
        raise ValueError(f"unknown convention {convention!r}")
    tp = c.pa_p * p + (1.0 - c.pa_n) * (1.0 - p)
    fp = c.pa_p * q + (1.0 - c.pa_n) * (1.0 - q)
    return RocPoint(fp, tp)


def feasible_region_binary(p: float, q: float) -> np.ndarray:
    """Vertices of the parallelogram reachable by all binary classifiers.

    The result is a ``(4, 2)`` array in counterclockwise order starting at
    (0, 0). For ``p == q`` the parallelogram collapses onto the diagonal but
    the four vertices are still returned.
    """
    if p in (0.0, 1.0) or q in (0.0, 1.0) or not (0 < p < 1 and 0 < q < 1):
        raise DegenerateDistribution(f"p={p}, q={q} must lie strictly inside (0, 1)")
    above = (q, p)
    below = (1.0 - q, 1.0 - p)
    if p < q:
        above, below = below, above
    return np.array([(0.0, 0.0), below, (1.0, 1.0), above])


def _ratio_groups(p: np.ndarray, q: np.ndarray) -> list[list[int]]:
    keep = [i for i in range(len(p)) if p[i] > 0 or q[i] > 0]
    ratio = np.array([np.inf if q[i] == 0 else p[i] / q[i] for i in keep])
    order = [keep[i] for i in np.argsort(-ratio, kind="stable")]
    groups: list[list[int]] = []
    for i in order:
        if groups:
            j = groups[-1][0]
            # equal likelihood ratio, compared without division
            if abs(p[i] * q[j] - p[j] * q[i]) <= 1e-15 * max(p[i] * q[j], p[j] * q[i], 1e-300) + 1e-300:
                groups[-1].append(i)
                continue
        groups.append([i])
    return groups


def optimal_roc(P, Q) -> RocCurve:
    """Optimal ROC curve of ``P`` (positive) against ``Q`` (negative).

    Outcomes are ordered by decreasing likelihood ratio ``p_i / q_i``
    (``q_i = 0`` first, outcomes with ``p_i = q_i = 0`` dropped); outcomes with
    equal ratio are merged into one segment. The curve runs through the
    cumulative sums ``(sum q, sum p)``.
    """
    p, q = _as_dist(P), _as_dist(Q)
    if p.size != q.size:
        raise DimensionMismatch(f"distributions have {p.size} and {q.size} outcomes")
    pts = [(0.0, 0.0)]
    fp = tp = 0.0
    for g in _ratio_groups(p, q):
        fp += q[g].sum()
        tp += p[g].sum()
        pts.append((fp, tp))
    return RocCurve(pts)


def bhattacharyya(P, Q) -> float:
    p, q = _as_dist(P), _as_dist(Q)
    if p.size != q.size:
        raise DimensionMismatch(f"distributions have {p.size} and {q.size} outcomes")
    return float(np.sum(np.sqrt(p * q)))


def minkowski_length(curve) -> float:
    """Length of a monotone polyline in the metric ``dl^2 = dTP * dFP``.

    Segments parallel to either axis have zero length; the diagonal has
    length one.
    """
    pts = curve.points if isinstance(curve, RocCurve) else np.asarray(curve, dtype=float)
    d = np.diff(pts, axis=0)
    return float(np.sum(np.sqrt(np.clip(d[:, 0] * d[:, 1], 0.0, None))))


def iso_failure_line(lam: float, p_fail: float) -> tuple[float, float]:
    """Intercept and slope of the line of constant failure probability in (FP, TP) coordinates."""
    if not 0.0 < lam < 1.0:
        raise ValidationError(f"prior {lam} must lie strictly inside (0, 1)")
    return (lam - p_fail) / lam, (1.0 - lam) / lam


def failure_probability(pt, lam: float) -> float:
    fp, tp = pt
    return (1.0 - lam) * fp + lam * (1.0 - tp)

