"""Hermitian linear algebra on small dense complex matrices.

Density operators, spectral projectors, distance measures, Haar sampling and
Kraus channels. Everything here works on plain ``numpy`` arrays; the
:class:`DensityOperator` and :class:`Projector` wrappers only add validation
and a cached eigendecomposition.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    BadTrace,
    CompletenessError,
    DimensionMismatch,
    NoConvergence,
    NonHermitian,
    NotPositive,
    RankOutOfRange,
    ValidationError,
)

#: Eigenvalues with magnitude below this count as zero for support/kernel decisions.
EIG_TOL = 1e-9
HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-9
PROJECTOR_TOL = 1e-9

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def _as_square(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ValidationError(f"expected a non-empty square matrix, got shape {a.shape}")
    return a


def _check_hermitian(a: np.ndarray, tol: float = HERMITIAN_TOL) -> None:
    err = np.max(np.abs(a - a.conj().T))
    if err > tol:
        raise NonHermitian(f"matrix is not Hermitian (max |A - A^H| = {err:.3g})")


def hermitize(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.conj().T)


def eig_hermitian(m) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns ``(w, V)`` with ``w`` ascending and the eigenvectors as the
    columns of the unitary ``V``, so that ``m = V @ diag(w) @ V^H``.

    Raises
    ------
    NonHermitian
        If ``m`` deviates from its adjoint by more than 1e-12 in any entry.
    NoConvergence
        If LAPACK fails to converge.
    """
    a = _as_square(m)
    _check_hermitian(a)
    try:
        w, v = np.linalg.eigh(hermitize(a))
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NoConvergence(str(exc)) from exc
    return w, v


@dataclass(frozen=True)
class Projector:
    """Orthogonal projector together with its rank."""

    matrix: np.ndarray
    rank: int

    def __post_init__(self):
        a = _as_square(self.matrix)
        _check_hermitian(a, PROJECTOR_TOL)
        if np.max(np.abs(a @ a - a)) > PROJECTOR_TOL:
            raise ValidationError("matrix is not idempotent")
        tr = np.trace(a).real
        if abs(tr - self.rank) > PROJECTOR_TOL:
            raise ValidationError(f"trace {tr} does not match rank {self.rank}")
        object.__setattr__(self, "matrix", a)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def complement(self) -> "Projector":
        return Projector(np.eye(self.dim) - self.matrix, self.dim - self.rank)


def _projector_from_columns(vecs: np.ndarray, dim: int) -> Projector:
    m = vecs @ vecs.conj().T if vecs.shape[1] else np.zeros((dim, dim), dtype=complex)
    return Projector(m, vecs.shape[1])


@dataclass(frozen=True)
class DensityOperator:
    """A validated density matrix with its cached spectrum.

    Build instances with :func:`validate_density` (or :func:`as_density`),
    which enforces Hermiticity, unit trace and positivity.
    """

    matrix: np.ndarray
    eigenvalues: np.ndarray = field(repr=False)
    eigenvectors: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def support(self, tol: float = EIG_TOL) -> Projector:
        return support_projector(self, tol)

    def kernel(self, tol: float = EIG_TOL) -> Projector:
        return support_projector(self, tol).complement()

    def sqrt(self) -> np.ndarray:
        return (self.eigenvectors * np.sqrt(_drop_roundoff(self.eigenvalues))) @ self.eigenvectors.conj().T


def _drop_roundoff(w: np.ndarray) -> np.ndarray:
    """Zero eigenvalues at round-off level; a square root would blow 1e-17 up to 3e-9."""
    floor = 8 * len(w) * np.finfo(float).eps * max(1.0, float(np.max(np.abs(w))))
    return np.where(w > floor, w, 0.0)


def validate_density(m) -> DensityOperator:
    """Check that ``m`` is a density matrix and wrap it.

    Eigenvalues in ``[-1e-9, 0)`` are treated as round-off: they are set to
    zero and the spectrum is renormalised. Anything more negative raises
    :class:`NotPositive`.
    """
    a = _as_square(m)
    _check_hermitian(a)
    a = hermitize(a)
    tr = np.trace(a).real
    if abs(tr - 1.0) > TRACE_TOL:
        raise BadTrace(f"trace is {tr!r}, expected 1")
    w, v = np.linalg.eigh(a)
    if w[0] < -EIG_TOL:
        raise NotPositive(f"negative eigenvalue {w[0]:.3g}")
    if w[0] < 0:
        w = np.clip(w, 0.0, None)
        w = w / w.sum()
        a = hermitize((v * w) @ v.conj().T)
    a.setflags(write=False)
    w.setflags(write=False)
    v.setflags(write=False)
    return DensityOperator(a, w, v)


def as_density(rho) -> DensityOperator:
    if isinstance(rho, DensityOperator):
        return rho
    return validate_density(rho)


def _same_dim(*ops) -> int:
    dims = {o.shape[0] if isinstance(o, np.ndarray) else o.dim for o in ops}
    if len(dims) != 1:
        raise DimensionMismatch(f"dimension mismatch: {sorted(dims)}")
    return dims.pop()


def spectral_split(m, tol: float = EIG_TOL) -> tuple[Projector, Projector, Projector]:
    """Projectors onto the eigenspaces with eigenvalue > tol, < -tol and within tol of 0."""
    w, v = eig_hermitian(m)
    dim = len(w)
    pos = _projector_from_columns(v[:, w > tol], dim)
    neg = _projector_from_columns(v[:, w < -tol], dim)
    zero = _projector_from_columns(v[:, np.abs(w) <= tol], dim)
    return pos, neg, zero


def support_projector(rho, tol: float = EIG_TOL) -> Projector:
    rho = as_density(rho)
    return _projector_from_columns(rho.eigenvectors[:, rho.eigenvalues > tol], rho.dim)


def kernel_projector(rho, tol: float = EIG_TOL) -> Projector:
    return support_projector(rho, tol).complement()


def trace_norm(m) -> float:
    return float(np.sum(np.abs(np.linalg.eigvalsh(hermitize(_as_square(m))))))


def trace_distance(a, b) -> float:
    """Half the trace norm of ``a - b``."""
    a, b = as_density(a), as_density(b)
    _same_dim(a, b)
    # eigvalsh(-m) is not bitwise -eigvalsh(m); averaging makes the result symmetric
    t = 0.25 * (trace_norm(a.matrix - b.matrix) + trace_norm(b.matrix - a.matrix))
    return min(1.0, t)


def matrix_sqrt_psd(m) -> np.ndarray:
    """Principal square root of a positive semidefinite matrix."""
    w, v = eig_hermitian(m)
    if w[0] < -EIG_TOL:
        raise NotPositive(f"negative eigenvalue {w[0]:.3g}")
    return hermitize((v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T)


def fidelity(a, b) -> float:
    """Uhlmann fidelity ``(tr sqrt(sqrt(a) b sqrt(a)))**2``.

    For pure states this is the squared overlap.
    """
    a, b = as_density(a), as_density(b)
    _same_dim(a, b)
    sa = a.sqrt()
    w = np.linalg.eigvalsh(hermitize(sa @ b.matrix @ sa))
    root_f = np.sum(np.sqrt(_drop_roundoff(w)))
    return float(min(1.0, root_f**2))


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary from the QR decomposition of a Ginibre matrix."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def haar_random_projector(dim: int, rank: int, seed) -> Projector:
    """Projector onto the span of the first ``rank`` columns of a Haar unitary.

    ``seed`` may be an int or a ``numpy.random.Generator``; the same int
    always yields the same projector.
    """
    if not 0 <= rank <= dim:
        raise RankOutOfRange(f"rank {rank} outside [0, {dim}]")
    rng = np.random.default_rng(seed)
    u = random_unitary(dim, rng)
    return _projector_from_columns(u[:, :rank], dim)


def haar_projector_batch(dim: int, rank: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` Haar-random rank-``rank`` projectors stacked as an ``(n, dim, dim)`` array."""
    if not 0 <= rank <= dim:
        raise RankOutOfRange(f"rank {rank} outside [0, {dim}]")
    z = (rng.standard_normal((n, dim, dim)) + 1j * rng.standard_normal((n, dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=1, axis2=2)
    q = q * (d / np.abs(d))[:, None, :]
    cols = q[:, :, :rank]
    return cols @ np.conj(np.swapaxes(cols, 1, 2))


def random_density(dim: int, rng: np.random.Generator, rank: int | None = None) -> DensityOperator:
    """Random state ``G G^H / tr`` from a ``dim x rank`` Ginibre matrix (Hilbert-Schmidt measure for full rank)."""
    rank = dim if rank is None else rank
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    m = g @ g.conj().T
    return validate_density(m / np.trace(m).real)


def pure_density(psi) -> DensityOperator:
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return validate_density(np.outer(psi, psi.conj()))


@dataclass(frozen=True)
class KrausChannel:
    """Trace-preserving completely positive map given by Kraus operators."""

    operators: tuple[np.ndarray, ...]

    def __init__(self, operators: Sequence, tol: float = 1e-9):
        ops = tuple(np.asarray(k, dtype=complex) for k in operators)
        if not ops:
            raise ValidationError("a channel needs at least one Kraus operator")
        shapes = {k.shape for k in ops}
        if len(shapes) != 1 or ops[0].ndim != 2:
            raise DimensionMismatch(f"inconsistent Kraus operator shapes {sorted(shapes)}")
        d_in = ops[0].shape[1]
        total = sum(k.conj().T @ k for k in ops)
        err = np.max(np.abs(total - np.eye(d_in)))
        if err > tol:
            raise CompletenessError(f"sum K^H K deviates from identity by {err:.3g}")
        object.__setattr__(self, "operators", ops)

    @property
    def dim_in(self) -> int:
        return self.operators[0].shape[1]

    @property
    def dim_out(self) -> int:
        return self.operators[0].shape[0]

    @classmethod
    def identity(cls, dim: int) -> "KrausChannel":
        return cls([np.eye(dim)])

    @classmethod
    def depolarizing(cls, dim: int, p: float = 1.0) -> "KrausChannel":
        """``rho -> (1 - p) rho + p I/dim``; ``p = 1`` replaces every state by I/dim."""
        ops = [np.sqrt(1 - p) * np.eye(dim)] if p < 1 else []
        for i in range(dim):
            for j in range(dim):
                k = np.zeros((dim, dim), dtype=complex)
                k[i, j] = np.sqrt(p / dim)
                ops.append(k)
        return cls(ops)

    @classmethod
    def random(cls, dim: int, n_kraus: int, seed) -> "KrausChannel":
        """Random channel: a Haar-like isometry ``C^dim -> C^(n_kraus*dim)`` cut into blocks."""
        rng = np.random.default_rng(seed)
        z = rng.standard_normal((n_kraus * dim, dim)) + 1j * rng.standard_normal((n_kraus * dim, dim))
        q, r = np.linalg.qr(z)
        q = q * (np.diagonal(r) / np.abs(np.diagonal(r)))
        return cls([q[i * dim:(i + 1) * dim] for i in range(n_kraus)])


def apply_channel(ch: KrausChannel, rho) -> DensityOperator:
    rho = as_density(rho)
    if ch.dim_in != rho.dim:
        raise DimensionMismatch(f"channel expects dim {ch.dim_in}, state has dim {rho.dim}")
    out = sum(k @ rho.matrix @ k.conj().T for k in ch.operators)
    return validate_density(hermitize(out))
