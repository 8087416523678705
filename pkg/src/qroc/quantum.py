"""ROC geometry of two quantum states.

Points in ROC space are ``(fp, tp) = (tr(M rho_n), tr(M rho_p))`` for the
effect ``M`` that triggers the "positive" conclusion. Point sets are plain
``(n, 2)`` float arrays in that column order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import geometry
from .classical import RocCurve, RocPoint
from .errors import BlochVectorTooLong, DimensionMismatch, TangentUndefined, ValidationError
from .linalg import (
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    DensityOperator,
    Projector,
    _same_dim,
    as_density,
    haar_projector_batch,
    hermitize,
    pure_density,
    trace_norm,
    validate_density,
)

#: Eigenvalues of the Helstrom operator with |w| <= this are treated as zero.
LAMBDA_TOL = 1e-12
SWEEP_GAP = 1e-3
SWEEP_MIN_INTERVAL = 1e-9
DEFAULT_GRID = 101
DEFAULT_SAMPLES_PER_RANK = 2000


@dataclass(frozen=True)
class TwoOutcomeMeasurement:
    """Effects ``m_pos`` (conclude positive) and ``m_neg = I - m_pos``."""

    m_pos: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.m_pos, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValidationError(f"effect must be square, got shape {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > 1e-9:
            raise ValidationError("effect is not Hermitian")
        w = np.linalg.eigvalsh(hermitize(m))
        if w[0] < -1e-9 or w[-1] > 1 + 1e-9:
            raise ValidationError("effect eigenvalues must lie in [0, 1]")
        object.__setattr__(self, "m_pos", hermitize(m))

    @property
    def m_neg(self) -> np.ndarray:
        return np.eye(self.m_pos.shape[0]) - self.m_pos

    def complement(self) -> "TwoOutcomeMeasurement":
        return TwoOutcomeMeasurement(self.m_neg)


@dataclass(frozen=True)
class HelstromResult:
    measurement: TwoOutcomeMeasurement
    p_err_min: float
    rank_pos: int
    lam: float


def helstrom_operator(rho_p, rho_n, lam: float) -> np.ndarray:
    rho_p, rho_n = as_density(rho_p), as_density(rho_n)
    _same_dim(rho_p, rho_n)
    return lam * rho_p.matrix - (1.0 - lam) * rho_n.matrix


def helstrom(rho_p, rho_n, lam: float, *, zero_to_positive: bool = False,
             tol: float = LAMBDA_TOL) -> HelstromResult:
    """Minimum-error measurement for prior ``lam`` on the positive state.

    The positive effect projects onto the eigenvectors of
    ``lam*rho_p - (1-lam)*rho_n`` with positive eigenvalue. The null space goes
    to the negative effect unless ``zero_to_positive`` is set; both choices
    are optimal, and they are the two one-sided limits of the measurement
    where an eigenvalue changes sign.
    """
    if not 0.0 <= lam <= 1.0:
        raise ValidationError(f"prior {lam} outside [0, 1]")
    lam_op = helstrom_operator(rho_p, rho_n, lam)
    w, v = np.linalg.eigh(hermitize(lam_op))
    mask = w >= -tol if zero_to_positive else w > tol
    cols = v[:, mask]
    m_pos = cols @ cols.conj().T
    p_err = 0.5 * (1.0 - np.sum(np.abs(w)))
    return HelstromResult(TwoOutcomeMeasurement(m_pos), float(p_err), int(mask.sum()), lam)


def min_error_probability(rho_p, rho_n, lam: float) -> float:
    """Helstrom bound ``(1 - ||lam*rho_p - (1-lam)*rho_n||_1) / 2``."""
    return 0.5 * (1.0 - trace_norm(helstrom_operator(rho_p, rho_n, lam)))


def _expectations(v: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """``<v_i| rho |v_i>`` for every column of every matrix in a stack."""
    return np.einsum("nji,jk,nki->ni", v.conj(), rho, v).real


def helstrom_points(rho_p, rho_n, lams, *, zero_to_positive: bool = False,
                    tol: float = LAMBDA_TOL) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorised Helstrom ROC points.

    Returns ``(points, complements, ranks)``: the ROC points of the positive
    effects, those of the complementary effects, and the effect ranks.
    """
    rho_p, rho_n = as_density(rho_p), as_density(rho_n)
    _same_dim(rho_p, rho_n)
    lams = np.asarray(lams, dtype=float).ravel()
    ops = lams[:, None, None] * rho_p.matrix - (1.0 - lams)[:, None, None] * rho_n.matrix
    w, v = np.linalg.eigh(ops)
    mask = w >= -tol if zero_to_positive else w > tol
    ep = _expectations(v, rho_p.matrix)
    en = _expectations(v, rho_n.matrix)
    pts = np.column_stack([(en * mask).sum(1), (ep * mask).sum(1)])
    comp = np.column_stack([(en * ~mask).sum(1), (ep * ~mask).sum(1)])
    return np.clip(pts, 0.0, 1.0), np.clip(comp, 0.0, 1.0), mask.sum(1)


def roc_point(rho_p, rho_n, m) -> RocPoint:
    """``(tr(M rho_n), tr(M rho_p))`` for the positive effect ``M``."""
    rho_p, rho_n = as_density(rho_p), as_density(rho_n)
    m_pos = m.m_pos if isinstance(m, TwoOutcomeMeasurement) else np.asarray(
        m.matrix if isinstance(m, Projector) else m, dtype=complex)
    _same_dim(rho_p, rho_n, m_pos)
    fp = np.trace(m_pos @ rho_n.matrix)
    tp = np.trace(m_pos @ rho_p.matrix)
    return RocPoint(float(np.clip(fp.real, 0.0, 1.0)), float(np.clip(tp.real, 0.0, 1.0)))


def effect_points(rho_p, rho_n, effects: np.ndarray) -> np.ndarray:
    """ROC points for a stack of effects with shape ``(n, d, d)``."""
    rho_p, rho_n = as_density(rho_p), as_density(rho_n)
    fp = np.einsum("nij,ji->n", effects, rho_n.matrix).real
    tp = np.einsum("nij,ji->n", effects, rho_p.matrix).real
    return np.clip(np.column_stack([fp, tp]), 0.0, 1.0)


# -- pure qubits -------------------------------------------------------------

def pure_state(theta: float) -> DensityOperator:
    """Real qubit ``(cos(theta/2), sin(theta/2))`` in the x-z plane of the Bloch sphere."""
    return pure_density([np.cos(theta / 2), np.sin(theta / 2)])


def pure_ellipse(theta_p: float, theta_q: float, n_alpha: int | None = None,
                 alphas=None) -> np.ndarray:
    """ROC points of the projective measurements ``|Phi(alpha)>``.

    ``alpha`` runs over ``n_alpha`` uniform values in ``[0, 2*pi)`` unless an
    explicit array ``alphas`` is given.
    """
    if alphas is None:
        if n_alpha is None or n_alpha < 4:
            raise ValidationError("n_alpha must be at least 4")
        alphas = np.linspace(0.0, 2 * np.pi, n_alpha, endpoint=False)
    a = np.asarray(alphas, dtype=float)
    tp = 0.5 * (1.0 + np.cos(a - theta_p))
    fp = 0.5 * (1.0 + np.cos(a - theta_q))
    return np.column_stack([fp, tp])


def tangent_prior(theta_p: float, theta_q: float, alpha: float) -> float:
    """Prior for which the measurement at ``alpha`` is Helstrom-optimal.

    The ellipse slope ``r = sin(theta_p - alpha) / sin(theta_q - alpha)`` must
    match the slope ``(1 - lam)/lam`` of the constant-failure lines, so
    ``lam = 1 / (1 + r)``.

    Raises
    ------
    TangentUndefined
        Where the tangent is vertical (FP extremal) or has negative slope.
    """
    den = np.sin(theta_q - alpha)
    if abs(den) < 1e-12:
        raise TangentUndefined(f"vertical tangent at alpha={alpha}")
    r = np.sin(theta_p - alpha) / den
    if r < -1e-12:
        raise TangentUndefined(f"negative tangent slope {r:.3g} at alpha={alpha}")
    return float(1.0 / (1.0 + max(r, 0.0)))


# -- Helstrom sweep ----------------------------------------------------------

@dataclass(frozen=True)
class HelstromSweep:
    lambdas: np.ndarray
    points: np.ndarray
    ranks: np.ndarray
    complements: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.lambdas)

    def __iter__(self):
        for lam, pt, r in zip(self.lambdas, self.points, self.ranks):
            yield float(lam), RocPoint(*map(float, pt)), int(r)

    def rank_changes(self) -> np.ndarray:
        """Indices ``i`` such that the rank differs between entries ``i`` and ``i+1``."""
        return np.flatnonzero(np.diff(self.ranks) != 0)


def helstrom_sweep(rho_p, rho_n, lambda_grid=None, *, max_gap: float = SWEEP_GAP,
                   min_interval: float = SWEEP_MIN_INTERVAL,
                   tol: float = LAMBDA_TOL) -> HelstromSweep:
    """Helstrom ROC points over a grid of priors, refined where the curve jumps.

    An interval between consecutive priors is bisected while its two ROC
    points are at least ``max_gap`` apart or the effect rank changes across
    it, until the interval is shorter than ``min_interval``.
    """
    lams = np.unique(np.clip(np.asarray(
        np.linspace(0, 1, DEFAULT_GRID) if lambda_grid is None else lambda_grid, dtype=float), 0, 1))
    pts, comp, ranks = helstrom_points(rho_p, rho_n, lams, tol=tol)
    while True:
        gap = np.hypot(*np.diff(pts, axis=0).T)
        need = ((gap >= max_gap) | (np.diff(ranks) != 0)) & (np.diff(lams) >= min_interval)
        if not need.any():
            break
        idx = np.flatnonzero(need)
        mids = 0.5 * (lams[idx] + lams[idx + 1])
        mp, mc, mr = helstrom_points(rho_p, rho_n, mids, tol=tol)
        lams = np.insert(lams, idx + 1, mids)
        pts = np.insert(pts, idx + 1, mp, axis=0)
        comp = np.insert(comp, idx + 1, mc, axis=0)
        ranks = np.insert(ranks, idx + 1, mr)
    return HelstromSweep(lams, pts, ranks, comp)


def prior_mixture_points(rho_p, rho_n, lambda_grid) -> np.ndarray:
    """ROC points of the rank-one spectral projectors of ``lam*rho_p + (1-lam)*rho_n``.

    Returns an array of shape ``(len(lambda_grid), d, 2)``; the second axis
    follows ascending eigenvalue.
    """
    rho_p, rho_n = as_density(rho_p), as_density(rho_n)
    _same_dim(rho_p, rho_n)
    lams = np.asarray(lambda_grid, dtype=float).ravel()
    mix = lams[:, None, None] * rho_p.matrix + (1.0 - lams)[:, None, None] * rho_n.matrix
    _, v = np.linalg.eigh(mix)
    fp = _expectations(v, rho_n.matrix)
    tp = _expectations(v, rho_p.matrix)
    return np.clip(np.stack([fp, tp], axis=-1), 0.0, 1.0)


def trace_distance_readout(curve) -> float:
    """Largest ``tp - fp`` along a curve: the TP-axis intercept of its 45 degree tangent."""
    if isinstance(curve, RocCurve):
        pts = curve.points
    elif isinstance(curve, HelstromSweep):
        pts = curve.points
    else:
        pts = np.asarray(curve, dtype=float).reshape(-1, 2)
    return float(max(0.0, np.max(pts[:, 1] - pts[:, 0])))


# -- feasible region ---------------------------------------------------------

@dataclass(frozen=True)
class FeasibleRegion:
    """Sampled ROC region of two states.

    ``rank_clouds[r]`` holds the points of rank-``r`` projectors; points
    produced by complementing an effect sit at the same index in
    ``rank_clouds[d - r]`` (or in the second half of the cloud when
    ``2r = d``). ``helstrom`` holds Helstrom points followed by their
    complements.
    """

    rank_clouds: dict
    helstrom: np.ndarray
    hull: np.ndarray
    upper_curve: RocCurve

    @property
    def dim(self) -> int:
        return max(self.rank_clouds)

    def all_points(self) -> np.ndarray:
        return np.vstack([*self.rank_clouds.values(), self.helstrom])

    def contains(self, point, tol: float = 1e-12) -> bool:
        return geometry.polygon_contains(self.hull, point, tol)


def feasible_region(rho_p, rho_n, samples_per_rank: int = DEFAULT_SAMPLES_PER_RANK, seed=0,
                    lambda_grid=None) -> FeasibleRegion:
    """Sample the ROC region with Haar-random projectors of every rank.

    Each sampled projector contributes its complement as well, which makes the
    point set symmetric about (1/2, 1/2). Helstrom sweep points (with both
    assignments of the null space at the grid ends) pin the upper boundary.
    """
    rho_p, rho_n = as_density(rho_p), as_density(rho_n)
    d = _same_dim(rho_p, rho_n)
    if samples_per_rank < 1:
        raise ValidationError("samples_per_rank must be positive")
    clouds: dict[int, list] = {r: [] for r in range(d + 1)}
    clouds[0].append(np.zeros((1, 2)))
    clouds[d].append(np.ones((1, 2)))
    eye = np.eye(d)
    streams = np.random.SeedSequence(seed).spawn(d // 2 + 1)
    for r in range(1, d // 2 + 1):
        rng = np.random.default_rng(streams[r])
        n = samples_per_rank if 2 * r != d else -(-samples_per_rank // 2)
        projs = haar_projector_batch(d, r, n, rng)
        clouds[r].append(effect_points(rho_p, rho_n, projs))
        clouds[d - r].append(effect_points(rho_p, rho_n, eye - projs))
    rank_clouds = {r: np.vstack(c) for r, c in clouds.items()}

    sweep = helstrom_sweep(rho_p, rho_n, lambda_grid)
    ends, ends_c, _ = helstrom_points(rho_p, rho_n, [0.0, 1.0], zero_to_positive=True)
    helstrom_pts = np.vstack([sweep.points, ends, sweep.complements, ends_c])

    allpts = np.vstack([*rank_clouds.values(), helstrom_pts])
    hull = geometry.convex_hull(allpts)
    upper = geometry.upper_hull(allpts)
    return FeasibleRegion(rank_clouds, helstrom_pts, hull, RocCurve(upper))


def support_function(rho_p, rho_n, directions) -> np.ndarray:
    """``max_M (u_fp * tr(M rho_n) + u_tp * tr(M rho_p))`` over all effects, per direction ``u``.

    The maximum is the sum of the positive eigenvalues of
    ``u_fp * rho_n + u_tp * rho_p``.
    """
    rho_p, rho_n = as_density(rho_p), as_density(rho_n)
    u = np.asarray(directions, dtype=float).reshape(-1, 2)
    ops = u[:, 0, None, None] * rho_n.matrix + u[:, 1, None, None] * rho_p.matrix
    w = np.linalg.eigvalsh(ops)
    return np.clip(w, 0.0, None).sum(1)


def in_feasible_region(point, rho_p, rho_n, n_directions: int = 720, tol: float = 1e-10) -> bool:
    """Check a point against the supporting half-planes of the exact ROC region."""
    ang = np.linspace(0, 2 * np.pi, n_directions, endpoint=False)
    u = np.column_stack([np.cos(ang), np.sin(ang)])
    h = support_function(rho_p, rho_n, u)
    return bool(np.all(u @ np.asarray(point, dtype=float) <= h + tol))


# -- qubits ------------------------------------------------------------------

def qubit_from_bloch(r) -> DensityOperator:
    r = np.asarray(r, dtype=float)
    if r.shape != (3,):
        raise ValidationError("Bloch vector must have three components")
    if np.linalg.norm(r) > 1 + 1e-12:
        raise BlochVectorTooLong(f"|r| = {np.linalg.norm(r)} exceeds 1")
    return validate_density(0.5 * (np.eye(2) + r[0] * PAULI_X + r[1] * PAULI_Y + r[2] * PAULI_Z))


def bloch_vector(rho) -> np.ndarray:
    rho = as_density(rho)
    if rho.dim != 2:
        raise DimensionMismatch("Bloch vectors exist for qubits only")
    m = rho.matrix
    return np.array([np.trace(m @ s).real for s in (PAULI_X, PAULI_Y, PAULI_Z)])


def _measurement_plane(rp: np.ndarray, rn: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    ez, ex = np.array([0.0, 0.0, 1.0]), np.array([1.0, 0.0, 0.0])
    if abs(rp[1]) < 1e-12 and abs(rn[1]) < 1e-12:
        # x-z plane, parametrised like pure_ellipse
        return ez, ex
    a = rp if np.linalg.norm(rp) >= np.linalg.norm(rn) else rn
    e1 = a / np.linalg.norm(a)
    other = rn if a is rp else rp
    b = other - (other @ e1) * e1
    if np.linalg.norm(b) < 1e-12:
        b = ez - (ez @ e1) * e1
        if np.linalg.norm(b) < 1e-12:
            b = ex - (ex @ e1) * e1
    return e1, b / np.linalg.norm(b)


def qubit_roc_ellipse(rho_p, rho_n, n_alpha: int = 720) -> np.ndarray:
    """ROC points of projective qubit measurements along a great circle.

    The circle lies in the plane spanned by the two Bloch vectors (completed by
    the z or x axis when they are collinear). For states in the x-z plane the
    parametrisation agrees with :func:`pure_ellipse`.
    """
    rho_p, rho_n = as_density(rho_p), as_density(rho_n)
    if rho_p.dim != 2 or rho_n.dim != 2:
        raise DimensionMismatch("qubit_roc_ellipse needs two qubit states")
    rp, rn = bloch_vector(rho_p), bloch_vector(rho_n)
    e1, e2 = _measurement_plane(rp, rn)
    a = np.linspace(0.0, 2 * np.pi, n_alpha, endpoint=False)
    n = np.cos(a)[:, None] * e1 + np.sin(a)[:, None] * e2
    return np.clip(np.column_stack([0.5 * (1 + n @ rn), 0.5 * (1 + n @ rp)]), 0.0, 1.0)
