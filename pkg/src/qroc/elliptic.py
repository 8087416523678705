"""Incomplete elliptic integrals through Carlson's symmetric forms.

Convention: ``x`` is the sine of the amplitude and ``k`` the modulus, so

    F(x | k) = int_0^x dt / sqrt((1 - t^2) (1 - k^2 t^2))
    E(x | k) = int_0^x sqrt(1 - k^2 t^2) / sqrt(1 - t^2) dt

and ``F(x | 0) = E(x | 0) = arcsin(x)``.
"""

from __future__ import annotations

import math
from typing import NamedTuple

from .errors import DomainError, NoConvergence

_EPS = 2.0**-52
_MAX_ITER = 100


class EllipticArgs(NamedTuple):
    x: float
    k: float


def carlson_rf(x: float, y: float, z: float) -> float:
    """Carlson's ``R_F(x, y, z)`` by the duplication theorem; at most one argument may be zero."""
    if min(x, y, z) < 0 or (x == 0) + (y == 0) + (z == 0) > 1:
        raise DomainError(f"R_F({x}, {y}, {z}) undefined")
    x0, y0 = x, y
    a0 = a = (x + y + z) / 3.0
    q = (3.0 * _EPS) ** (-1.0 / 6.0) * max(abs(a0 - x), abs(a0 - y), abs(a0 - z))
    f = 1.0
    for _ in range(_MAX_ITER):
        if q * f < abs(a):
            break
        sx, sy, sz = math.sqrt(x), math.sqrt(y), math.sqrt(z)
        lam = sx * sy + sx * sz + sy * sz
        x, y, z, a = (x + lam) / 4, (y + lam) / 4, (z + lam) / 4, (a + lam) / 4
        f /= 4
    else:  # pragma: no cover - converges in ~20 steps
        raise NoConvergence("R_F duplication did not converge")
    X = (a0 - x0) * f / a
    Y = (a0 - y0) * f / a
    Z = -(X + Y)
    e2 = X * Y - Z * Z
    e3 = X * Y * Z
    return (1 - e2 / 10 + e3 / 14 + e2 * e2 / 24 - 3 * e2 * e3 / 44) / math.sqrt(a)


def carlson_rd(x: float, y: float, z: float) -> float:
    """Carlson's ``R_D(x, y, z)``; ``x`` and ``y`` may not both vanish and ``z > 0``."""
    if min(x, y) < 0 or z <= 0 or x + y == 0:
        raise DomainError(f"R_D({x}, {y}, {z}) undefined")
    x0, y0 = x, y
    a0 = a = (x + y + 3.0 * z) / 5.0
    q = (_EPS / 4.0) ** (-1.0 / 6.0) * max(abs(a0 - x), abs(a0 - y), abs(a0 - z))
    f = 1.0
    total = 0.0
    for _ in range(_MAX_ITER):
        if q * f < abs(a):
            break
        sx, sy, sz = math.sqrt(x), math.sqrt(y), math.sqrt(z)
        lam = sx * sy + sx * sz + sy * sz
        total += f / (sz * (z + lam))
        x, y, z, a = (x + lam) / 4, (y + lam) / 4, (z + lam) / 4, (a + lam) / 4
        f /= 4
    else:  # pragma: no cover
        raise NoConvergence("R_D duplication did not converge")
    X = (a0 - x0) * f / a
    Y = (a0 - y0) * f / a
    Z = -(X + Y) / 3
    e2 = X * Y - 6 * Z * Z
    e3 = (3 * X * Y - 8 * Z * Z) * Z
    e4 = 3 * (X * Y - Z * Z) * Z * Z
    e5 = X * Y * Z * Z * Z
    series = (1 - 3 * e2 / 14 + e3 / 6 + 9 * e2 * e2 / 88 - 3 * e4 / 22
              - 9 * e2 * e3 / 52 + 3 * e5 / 26)
    return f * series / (a * math.sqrt(a)) + 3 * total


def _check(x: float, k: float) -> None:
    if not 0.0 <= k <= 1.0:
        raise DomainError(f"modulus k={k} outside [0, 1]")
    if abs(x) > 1.0:
        raise DomainError(f"|x|={abs(x)} exceeds 1")


def elliptic_f(x: float, k: float) -> float:
    """Incomplete integral of the first kind ``F(x | k)``."""
    _check(x, k)
    if k == 1.0 and abs(x) == 1.0:
        raise DomainError("F(1 | 1) diverges")
    if x == 0:
        return 0.0
    x2 = x * x
    return x * carlson_rf(1 - x2, 1 - k * k * x2, 1.0)


def elliptic_e(x: float, k: float) -> float:
    """Incomplete integral of the second kind ``E(x | k)``."""
    _check(x, k)
    if x == 0:
        return 0.0
    if k == 1.0:
        return x
    x2 = x * x
    k2 = k * k
    y = 1 - k2 * x2
    return x * carlson_rf(1 - x2, y, 1.0) - k2 * x * x2 * carlson_rd(1 - x2, y, 1.0) / 3


def complete_k_agm(k: float) -> float:
    """Complete integral ``K(k) = pi / (2 agm(1, sqrt(1 - k^2)))``."""
    if not 0.0 <= k < 1.0:
        raise DomainError(f"K(k) needs 0 <= k < 1, got {k}")
    a, b = 1.0, math.sqrt(1.0 - k * k)
    for _ in range(_MAX_ITER):
        if abs(a - b) <= 1e-16 * a:
            break
        a, b = (a + b) / 2, math.sqrt(a * b)
    return math.pi / (2 * a)
