"""Unambiguous discrimination of two states built from kernel projectors.

The positive effect is a multiple of the projector onto the kernel of
``rho_n`` (it never fires on the negative state) and symmetrically for the
negative effect. The construction is feasible, not optimal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EffectSumExceedsIdentity, InfeasiblePair, ValidationError
from .linalg import EIG_TOL, _same_dim, as_density, hermitize, kernel_projector

EFFECT_TOL = 1e-10


@dataclass(frozen=True)
class FeasibilityReport:
    """Which state can be identified with certainty.

    ``kernel_rank_p`` is the rank of the kernel of ``rho_n``, the subspace
    used to detect the positive state; ``kernel_rank_n`` likewise for the
    kernel of ``rho_p``.
    """

    can_detect_p: bool
    can_detect_n: bool
    kernel_rank_p: int
    kernel_rank_n: int
    weight_p: float
    weight_n: float

    @property
    def feasible(self) -> bool:
        return self.can_detect_p and self.can_detect_n


@dataclass(frozen=True)
class UnambiguousPovm:
    m_p: np.ndarray
    m_n: np.ndarray
    m_inconclusive: np.ndarray
    lambda1: float
    lambda2: float

    def effects(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.m_p, self.m_n, self.m_inconclusive


def feasibility(rho_p, rho_n, tol: float = EIG_TOL) -> FeasibilityReport:
    """Weight each state puts on the other's kernel, and whether it exceeds ``tol``."""
    rho_p, rho_n = as_density(rho_p), as_density(rho_n)
    _same_dim(rho_p, rho_n)
    k_n = kernel_projector(rho_n, tol)
    k_p = kernel_projector(rho_p, tol)
    w_p = float(np.trace(k_n.matrix @ rho_p.matrix).real)
    w_n = float(np.trace(k_p.matrix @ rho_n.matrix).real)
    return FeasibilityReport(w_p > tol, w_n > tol, k_n.rank, k_p.rank, w_p, w_n)


def _slack(k_n: np.ndarray, k_p: np.ndarray, lambda1: float, lambda2: float) -> float:
    rest = np.eye(k_n.shape[0]) - lambda1 * k_n - lambda2 * k_p
    return float(np.linalg.eigvalsh(hermitize(rest))[0])


def build_povm(rho_p, rho_n, lambda1: float = 0.5, lambda2: float = 0.5,
               tol: float = EIG_TOL) -> UnambiguousPovm:
    """Three-outcome POVM ``(lambda1*K_n, lambda2*K_p, rest)`` with ``K_x`` the kernel projector of ``rho_x``.

    Raises
    ------
    InfeasiblePair
        If a nonzero weight is requested for a state that has no support on
        the other state's kernel.
    EffectSumExceedsIdentity
        If the inconclusive effect would not be positive.
    """
    for name, v in (("lambda1", lambda1), ("lambda2", lambda2)):
        if not 0.0 <= v <= 1.0:
            raise ValidationError(f"{name}={v} outside [0, 1]")
    rho_p, rho_n = as_density(rho_p), as_density(rho_n)
    rep = feasibility(rho_p, rho_n, tol)
    if (lambda1 > 0 and not rep.can_detect_p) or (lambda2 > 0 and not rep.can_detect_n):
        raise InfeasiblePair(
            f"cannot detect {'positive' if lambda1 > 0 and not rep.can_detect_p else 'negative'} "
            "state unambiguously: it has no weight on the other state's kernel")
    k_n = kernel_projector(rho_n, tol).matrix
    k_p = kernel_projector(rho_p, tol).matrix
    slack = _slack(k_n, k_p, lambda1, lambda2)
    if slack < -EFFECT_TOL:
        raise EffectSumExceedsIdentity(
            f"lambda1={lambda1}, lambda2={lambda2}: smallest eigenvalue of the inconclusive effect is {slack:.3g}")
    m_p = lambda1 * k_n
    m_n = lambda2 * k_p
    m_q = hermitize(np.eye(rho_p.dim) - m_p - m_n)
    return UnambiguousPovm(m_p, m_n, m_q, lambda1, lambda2)


def max_lambda1(rho_p, rho_n, lambda2: float, tol: float = EIG_TOL, iters: int = 60) -> float:
    """Largest ``lambda1`` in [0, 1] keeping the inconclusive effect positive, by bisection."""
    rho_p, rho_n = as_density(rho_p), as_density(rho_n)
    k_n = kernel_projector(rho_n, tol).matrix
    k_p = kernel_projector(rho_p, tol).matrix
    if _slack(k_n, k_p, 0.0, lambda2) < -EFFECT_TOL:
        raise EffectSumExceedsIdentity(f"lambda2={lambda2} alone exceeds the identity")
    if _slack(k_n, k_p, 1.0, lambda2) >= -EFFECT_TOL:
        return 1.0
    lo, hi = 0.0, 1.0
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if _slack(k_n, k_p, mid, lambda2) >= -EFFECT_TOL:
            lo = mid
        else:
            hi = mid
    return lo


@dataclass(frozen=True)
class SuccessRates:
    succ_p: float
    succ_n: float
    inconclusive_p: float
    inconclusive_n: float
    error_p: float
    error_n: float


def success_rates(povm: UnambiguousPovm, rho_p, rho_n) -> SuccessRates:
    """Outcome probabilities of the POVM on each state.

    ``error_p`` is the probability that the positive state triggers the
    negative outcome (and vice versa); both vanish up to round-off.
    """
    rho_p, rho_n = as_density(rho_p), as_density(rho_n)
    _same_dim(rho_p, rho_n, povm.m_p)

    def tr(a, b):
        return float(np.trace(a @ b.matrix).real)

    return SuccessRates(
        succ_p=tr(povm.m_p, rho_p),
        succ_n=tr(povm.m_n, rho_n),
        inconclusive_p=tr(povm.m_inconclusive, rho_p),
        inconclusive_n=tr(povm.m_inconclusive, rho_n),
        error_p=tr(povm.m_n, rho_p),
        error_n=tr(povm.m_p, rho_n),
    )
