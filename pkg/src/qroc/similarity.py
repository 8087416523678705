"""Quantum Bhattacharyya coefficient and related fidelity constructions.

The coefficient is the length of the optimal ROC curve in the metric
``dl^2 = dTP * dFP``. For general states it is computed from a refined
polyline of Helstrom points; for two pure qubits it also has an integral
representation and a closed form in incomplete elliptic integrals.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np

from . import geometry
from .classical import RocCurve, bhattacharyya, minkowski_length, optimal_roc
from .elliptic import elliptic_e, elliptic_f
from .errors import DomainError, NoConvergence, SingularState
from .linalg import EIG_TOL, KrausChannel, _same_dim, apply_channel, as_density, hermitize
from .quantum import helstrom_points

DEFAULT_TOL = 1e-6
MAX_LEVELS = 20
BASE_GRID = 17


@dataclass(frozen=True)
class BhattacharyyaReport:
    value: float
    refinement_levels: int
    last_delta: float
    lengths: tuple = field(repr=False)
    curve: RocCurve = field(repr=False)


def _optimal_polyline(points: np.ndarray) -> np.ndarray:
    pts = np.vstack([[0.0, 0.0], points, [1.0, 1.0]])
    return geometry.upper_hull(pts)


def quantum_bhattacharyya(rho_p, rho_n, tol: float = DEFAULT_TOL, *,
                          max_levels: int = MAX_LEVELS, min_levels: int = 2) -> BhattacharyyaReport:
    """Minkowski length of the optimal ROC curve of two states.

    The curve is approximated by the upper hull of Helstrom points on nested
    uniform grids of priors (``16 * 2**level + 1`` points at each level). Each
    prior contributes both one-sided limits of the measurement, so jumps where
    an eigenvalue changes sign are bridged by the correct flat segment. Because
    the grids are nested, every polyline lies on or above the previous one and
    the lengths can only decrease.

    Raises
    ------
    NoConvergence
        If successive lengths still differ by ``tol`` or more after
        ``max_levels`` refinements.
    """
    rho_p, rho_n = as_density(rho_p), as_density(rho_n)
    _same_dim(rho_p, rho_n)
    collected: list[np.ndarray] = []
    lengths: list[float] = []
    delta = math.inf
    for level in range(max_levels + 1):
        n = (BASE_GRID - 1) * 2**level + 1
        grid = np.linspace(0.0, 1.0, n)
        new = grid if level == 0 else grid[1::2]
        for zero_pos in (False, True):
            pts, _, _ = helstrom_points(rho_p, rho_n, new, zero_to_positive=zero_pos)
            collected.append(pts)
        poly = _optimal_polyline(np.vstack(collected))
        # keep only hull vertices; interior points can never come back
        collected = [poly]
        lengths.append(minkowski_length(poly))
        if level:
            delta = lengths[-2] - lengths[-1]
            if level >= min_levels and abs(delta) < tol:
                return BhattacharyyaReport(lengths[-1], level, delta, tuple(lengths), RocCurve(poly))
    raise NoConvergence(f"Bhattacharyya refinement stalled at delta={delta:.3g} after {max_levels} levels")


# -- pure qubit pair ---------------------------------------------------------

# Gauss-Kronrod 7/15 nodes and weights on [-1, 1]
_XGK = np.array([0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                 0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                 0.207784955007898467600689403773245, 0.0])
_WGK = np.array([0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                 0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                 0.204432940075298892414161999234649, 0.209482141084727828012999174891714])
_WG = np.array([0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                0.381830050505118944950369775488975, 0.417959183673469387755102040816327])
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KWEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GWEIGHTS = np.zeros(15)
_GWEIGHTS[1:14:2] = np.concatenate([_WG[:-1], _WG[::-1]])


def _gk15(f, a: float, b: float) -> tuple[float, float]:
    c, h = 0.5 * (a + b), 0.5 * (b - a)
    y = f(c + h * _NODES)
    k = h * (_KWEIGHTS @ y)
    g = h * (_GWEIGHTS @ y)
    return float(k), float(abs(k - g))


def adaptive_quad(f, a: float, b: float, tol: float = 1e-12, max_intervals: int = 5000) -> float:
    """Globally adaptive Gauss-Kronrod quadrature of a vectorised integrand.

    The interval with the largest error estimate is bisected until the total
    estimate drops below ``tol``. Endpoint square-root singularities are
    absorbed by repeated bisection towards the endpoint.
    """
    if a == b:
        return 0.0
    val, err = _gk15(f, a, b)
    heap = [(-err, a, b, val)]
    total_val, total_err = val, err
    while total_err > tol:
        if len(heap) >= max_intervals:
            raise NoConvergence(f"quadrature error {total_err:.3g} above {tol:.3g}")
        neg_err, lo, hi, v = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        v1, e1 = _gk15(f, lo, mid)
        v2, e2 = _gk15(f, mid, hi)
        total_val += v1 + v2 - v
        total_err += e1 + e2 + neg_err
        heapq.heappush(heap, (-e1, lo, mid, v1))
        heapq.heappush(heap, (-e2, mid, hi, v2))
    # re-sum to shed accumulated round-off from the running updates
    return float(sum(item[3] for item in heap))


def _angle_gap(theta_p: float, theta_q: float) -> float:
    d = math.remainder(theta_q - theta_p, 2 * math.pi)
    return abs(d)


def pure_b_quadrature(theta_p: float, theta_q: float, tol: float = 1e-12) -> float:
    """Bhattacharyya coefficient of two real pure qubits by direct integration.

    Along the upper arc of the ellipse ``dTP * dFP = sin(a - theta_p) sin(a - theta_q) da^2 / 4``.
    Only the angle between the states matters, so the integral is taken in
    the frame ``theta_p = 0`` over ``a`` from ``gap + pi`` to ``2 pi``.
    """
    gap = _angle_gap(theta_p, theta_q)

    def integrand(a):
        return 0.5 * np.sqrt(np.clip(np.sin(a) * np.sin(a - gap), 0.0, None))

    return adaptive_quad(integrand, gap + math.pi, 2 * math.pi, tol)


def _bracket(theta: float, alpha: float, k: float) -> float:
    t = math.cos(theta / 2 - alpha) / k
    # the angle carries ~1e-15 absolute rounding, amplified by 1/k
    if abs(abs(t) - 1.0) < 1e-12 + 1e-14 / k:
        t = math.copysign(1.0, t)
    if abs(t) > 1.0:
        raise DomainError(f"elliptic argument {t} outside [-1, 1]")
    orient = math.copysign(1.0, math.sin(theta / 2 - alpha))
    return orient * (2 * elliptic_e(t, k) - (1 - math.cos(theta)) * elliptic_f(t, k))


def pure_b_closed_form(theta_q: float) -> float:
    """Closed form of the pure-qubit coefficient for ``theta_p = 0``.

    ``B = [2 E(t|k) - (1 - cos th) F(t|k)] / 4`` evaluated between
    ``a = th + pi`` and ``a = 2 pi``, with modulus ``k = cos(th/2)`` and
    amplitude sine ``t = cos(th/2 - a) / k``.
    """
    if not 0.0 <= theta_q <= math.pi:
        raise DomainError(f"theta_q={theta_q} outside [0, pi]")
    # equals sqrt(2)/2 * sqrt(1 + cos th) on [0, pi] without the cancellation near pi
    k = math.cos(theta_q / 2)
    if k == 1.0:
        # theta below ~2e-8: B = 1 to double precision, and F(1|1) would diverge
        return 1.0
    if k < 1e-8:
        return 0.0
    upper = _bracket(theta_q, 2 * math.pi, k)
    lower = _bracket(theta_q, theta_q + math.pi, k)
    return 0.25 * (upper - lower)


# -- fidelity-measuring observable ------------------------------------------

def fidelity_observable(rho_p, rho_n, *, strict: bool = False, tol: float = EIG_TOL) -> np.ndarray:
    """``rho_n^(-1/2) sqrt(rho_n^(1/2) rho_p rho_n^(1/2)) rho_n^(-1/2)``.

    Inverse square roots are taken on the support of ``rho_n``; the
    observable vanishes on its kernel. With ``strict=True`` a kernel that
    carries weight of ``rho_p`` raises :class:`SingularState` instead.
    """
    rho_p, rho_n = as_density(rho_p), as_density(rho_n)
    _same_dim(rho_p, rho_n)
    keep = rho_n.eigenvalues > tol
    s = rho_n.eigenvectors[:, keep]
    if strict and not keep.all():
        kern = rho_n.eigenvectors[:, ~keep]
        if np.trace(kern.conj().T @ rho_p.matrix @ kern).real > tol:
            raise SingularState("rho_n is singular on the support of rho_p")
    root = np.sqrt(rho_n.eigenvalues[keep])
    p_s = s.conj().T @ rho_p.matrix @ s
    inner = hermitize(root[:, None] * p_s * root[None, :])
    w, v = np.linalg.eigh(inner)
    sq = hermitize((v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T)
    m_s = sq / root[:, None] / root[None, :]
    return hermitize(s @ m_s @ s.conj().T)


def fidelity_measurement(rho_p, rho_n, *, strict: bool = False,
                         tol: float = EIG_TOL) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Outcome distributions of both states in the eigenbasis of the fidelity observable.

    Returns ``(p, q, basis)`` with the basis vectors as columns. On the
    kernel of ``rho_n`` the basis diagonalises the compression of ``rho_p``.
    """
    rho_p, rho_n = as_density(rho_p), as_density(rho_n)
    m = fidelity_observable(rho_p, rho_n, strict=strict, tol=tol)
    keep = rho_n.eigenvalues > tol
    s = rho_n.eigenvectors[:, keep]
    _, u = np.linalg.eigh(hermitize(s.conj().T @ m @ s))
    vecs = [s @ u]
    if not keep.all():
        kern = rho_n.eigenvectors[:, ~keep]
        _, uk = np.linalg.eigh(hermitize(kern.conj().T @ rho_p.matrix @ kern))
        vecs.append(kern @ uk)
    basis = np.hstack(vecs)
    p = np.clip(np.einsum("ji,jk,ki->i", basis.conj(), rho_p.matrix, basis).real, 0.0, None)
    q = np.clip(np.einsum("ji,jk,ki->i", basis.conj(), rho_n.matrix, basis).real, 0.0, None)
    return p / p.sum(), q / q.sum(), basis


def fidelity_polyline(rho_p, rho_n, *, strict: bool = False) -> RocCurve:
    """ROC polyline of the fidelity-measuring eigenbasis, outcomes ordered by likelihood ratio.

    Its Minkowski length equals the square root fidelity. The vertices are
    achievable ROC points; nothing is claimed about them lying on the
    optimal curve.
    """
    p, q, _ = fidelity_measurement(rho_p, rho_n, strict=strict)
    return optimal_roc(p, q)


def measured_bhattacharyya(rho_p, rho_n) -> float:
    p, q, _ = fidelity_measurement(rho_p, rho_n)
    return bhattacharyya(p, q)


@dataclass(frozen=True)
class MonotonicityCheck:
    b_before: float
    b_after: float
    passed: bool


def check_cp_monotonicity(rho_p, rho_n, ch: KrausChannel, tol: float = 1e-4,
                          b_tol: float = DEFAULT_TOL) -> MonotonicityCheck:
    """Compare the coefficient before and after applying ``ch`` to both states."""
    before = quantum_bhattacharyya(rho_p, rho_n, b_tol).value
    after = quantum_bhattacharyya(apply_channel(ch, rho_p), apply_channel(ch, rho_n), b_tol).value
    return MonotonicityCheck(before, after, after >= before - tol)
