"""The twelve acceptance criteria, each at its stated tolerance.

Every test prints one ``C<n> PASS`` or ``C<n> FAIL`` line (also repeated in
the terminal summary) before asserting.
"""

import itertools
import math
import time

import numpy as np
import pytest
from scipy.spatial import cKDTree

from qroc import geometry
from qroc.classical import bhattacharyya, feasible_region_binary, optimal_roc
from qroc.errors import InfeasiblePair
from qroc.linalg import (
    KrausChannel,
    fidelity,
    haar_projector_batch,
    pure_density,
    random_density,
    trace_distance,
)
from qroc.quantum import (
    feasible_region,
    helstrom,
    helstrom_sweep,
    in_feasible_region,
    min_error_probability,
    pure_ellipse,
    pure_state,
    qubit_from_bloch,
    roc_point,
    trace_distance_readout,
)
from qroc.similarity import (
    check_cp_monotonicity,
    fidelity_measurement,
    fidelity_polyline,
    pure_b_closed_form,
    pure_b_quadrature,
    quantum_bhattacharyya,
)
from qroc.unambiguous import build_povm, feasibility, success_rates

from .conftest import ACCEPTANCE


@pytest.fixture
def verdict(request):
    def record(label, ok, detail=""):
        ok = bool(ok)
        request.config.stash[ACCEPTANCE].append((label, ok, detail))
        print(f"{label} {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, f"{label}: {detail}"
    return record


def random_unit_vector(rng, d=3):
    v = rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_pure(rng, d):
    return pure_density(rng.standard_normal(d) + 1j * rng.standard_normal(d))


def test_c01_classical_region(verdict):
    t0 = time.perf_counter()
    region = feasible_region_binary(0.7, 0.4)
    curve = optimal_roc([0.7, 0.3], [0.4, 0.6])
    elapsed = time.perf_counter() - t0
    want = np.array([(0, 0), (0.6, 0.3), (1, 1), (0.4, 0.7)], dtype=float)
    # every expected vertex matched by exactly one returned vertex
    dist = np.abs(region[:, None, :] - want[None, :, :]).max(-1)
    region_err = dist.min(0).max()
    curve_err = np.abs(curve.points - [(0, 0), (0.4, 0.7), (1, 1)]).max() if len(curve.points) == 3 else math.inf
    ok = len(region) == 4 and region_err <= 1e-12 and curve_err <= 1e-12 and elapsed < 1.0
    verdict("C1", ok, f"vertices err={region_err:.1e} curve err={curve_err:.1e} t={elapsed * 1e3:.1f}ms")


def test_c02_pure_ellipse(verdict):
    theta_p, theta_q = 2 * math.acos(math.sqrt(0.7)), 2 * math.acos(math.sqrt(0.4))
    F = fidelity(pure_state(theta_p), pure_state(theta_q))
    # 10^4 parameters: a uniform grid plus the two tangency parameters
    alphas = np.sort(np.concatenate([np.linspace(0, 2 * np.pi, 9998, endpoint=False),
                                     [theta_p, (theta_q + np.pi) % (2 * np.pi)]]))
    ell = pure_ellipse(theta_p, theta_q, alphas=alphas)
    assert len(ell) == 10_000
    through = max(np.hypot(*(ell - pt).T).min() for pt in [(0.4, 0.7), (0.6, 0.3)])
    top = np.argmax(ell[:, 1])
    left = np.argmin(ell[:, 0])
    errs = [
        abs(ell[top, 1] - 1), abs(ell[top, 0] - F),
        abs(ell[left, 0]), abs(ell[left, 1] - (1 - F)),
    ]
    # a touch, not a crossing: the ellipse never leaves the unit square
    inside = ell[:, 1].max() <= 1 + 1e-12 and ell[:, 0].min() >= -1e-12
    ok = through <= 1e-9 and max(errs) <= 1e-9 and inside
    verdict("C2", ok, f"through err={through:.1e} touch err={max(errs):.1e} F={F:.6f}")


def test_c03_helstrom_consistency(verdict):
    rng = np.random.default_rng(3)
    worst_formula, worst_margin = 0.0, math.inf
    for i in range(100):
        d = 2 + i % 3
        rp, rn = random_density(d, rng), random_density(d, rng)
        lam = float(rng.uniform())
        res = helstrom(rp, rn, lam)
        fp, tp = roc_point(rp, rn, res.measurement)
        p_fail = lam * (1 - tp) + (1 - lam) * fp
        worst_formula = max(worst_formula, abs(p_fail - min_error_probability(rp, rn, lam)))
        ranks = rng.integers(0, d + 1, 1000)
        eye = np.eye(d)
        comp = []
        for r in range(d + 1):
            n = int((ranks == r).sum())
            if n == 0:
                continue
            projs = np.zeros((n, d, d)) if r == 0 else eye if r == d else haar_projector_batch(d, r, n, rng)
            projs = np.broadcast_to(projs, (n, d, d))
            f = np.einsum("nij,ji->n", projs, rn.matrix).real
            t = np.einsum("nij,ji->n", projs, rp.matrix).real
            comp.append(lam * (1 - t) + (1 - lam) * f)
        worst_margin = min(worst_margin, np.concatenate(comp).min() - p_fail)
    # ties at rounding level happen when the optimum is the trivial effect 0 or I and a
    # competitor drew the same rank
    ok = worst_formula <= 1e-10 and worst_margin >= -1e-12
    verdict("C3", ok, f"max |p_fail - Helstrom bound|={worst_formula:.1e} min competitor margin={worst_margin:.1e}")


def test_c04_trace_distance_readout(verdict):
    rng = np.random.default_rng(4)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(50):
        rp, rn = random_density(4, rng), random_density(4, rng)
        sweep = helstrom_sweep(rp, rn)
        worst = max(worst, abs(trace_distance_readout(sweep.points) - trace_distance(rp, rn)))
    elapsed = time.perf_counter() - t0
    verdict("C4", worst <= 1e-3 and elapsed < 60, f"max err={worst:.1e} t={elapsed:.2f}s")


def test_c05_pure_scan(verdict):
    theta = np.linspace(0, np.pi, 50)
    b = np.array([pure_b_quadrature(0.0, t) for t in theta])
    bc = np.array([pure_b_closed_form(t) for t in theta])
    sf = np.array([math.sqrt(fidelity(pure_state(0.0), pure_state(t))) for t in theta])
    mono = bool(np.all(np.diff(b) < 0) and np.all(np.diff(sf) < 0))
    below = float((b - sf).max())
    ends = max(abs(b[0] - 1), abs(b[-1]))
    agree = float(np.abs(b - bc).max())
    ok = mono and below <= 1e-6 and ends <= 1e-8 and agree <= 1e-6
    verdict("C5", ok, f"monotone={mono} max(B-sqrtF)={below:.1e} endpoints={ends:.1e} closed-form gap={agree:.1e}")


def test_c06_equality_iff_commuting(verdict):
    rng = np.random.default_rng(6)
    worst_eq = 0.0
    for i in range(50):
        d = 2 + i % 3
        p, q = rng.dirichlet(np.ones(d)), rng.dirichlet(np.ones(d))
        rp, rn = np.diag(p).astype(complex), np.diag(q).astype(complex)
        b = quantum_bhattacharyya(rp, rn).value
        worst_eq = max(worst_eq, abs(b - math.sqrt(fidelity(rp, rn))))
    gaps, n = [], 0
    while n < 50:
        rp = qubit_from_bloch(random_unit_vector(rng))
        rn = qubit_from_bloch(random_unit_vector(rng))
        F = fidelity(rp, rn)
        if not 0.1 <= F <= 0.9:
            continue
        gaps.append(math.sqrt(F) - quantum_bhattacharyya(rp, rn).value)
        n += 1
    ok = worst_eq <= 1e-6 and min(gaps) > 1e-4
    verdict("C6", ok, f"commuting max |B-sqrtF|={worst_eq:.1e} pure min(sqrtF-B)={min(gaps):.1e}")


def test_c07_cp_monotonicity(verdict):
    rng = np.random.default_rng(7)
    worst = math.inf
    for i in range(100):
        rp, rn = random_density(2, rng), random_density(2, rng)
        ch = KrausChannel.random(2, 1 + i % 4, seed=1000 + i)
        r = check_cp_monotonicity(rp, rn, ch)
        worst = min(worst, r.b_after - r.b_before)
    verdict("C7", worst >= -1e-4, f"min(B_after - B_before)={worst:.1e}")


def test_c08_fidelity_observable(verdict):
    rng = np.random.default_rng(8)
    worst, outside = 0.0, 0
    for i in range(50):
        d = 2 + i % 3
        rp, rn = random_density(d, rng), random_density(d, rng)
        p, q, _ = fidelity_measurement(rp, rn, strict=True)
        worst = max(worst, abs(bhattacharyya(p, q) - math.sqrt(fidelity(rp, rn))))
        # the region is convex, so checking the vertices covers the whole polyline
        outside += sum(not in_feasible_region(pt, rp, rn) for pt in fidelity_polyline(rp, rn, strict=True).points)
    ok = worst <= 1e-8 and outside == 0
    verdict("C8", ok, f"max |B_M - sqrtF|={worst:.1e} vertices outside region={outside}")


def test_c09_classical_brute_force(verdict):
    rng = np.random.default_rng(9)
    worst = 0.0
    for i in range(100):
        n = 2 + i % 5
        p, q = rng.dirichlet(np.ones(n)), rng.dirichlet(np.ones(n))
        pts = np.array([(q[list(s)].sum(), p[list(s)].sum())
                        for k in range(n + 1) for s in itertools.combinations(range(n), k)])
        hull = geometry.upper_hull(pts)
        curve = optimal_roc(p, q).points
        err = max(max(geometry.polyline_distance(hull, v) for v in curve),
                  max(geometry.polyline_distance(curve, v) for v in hull))
        worst = max(worst, err)
    verdict("C9", worst <= 1e-12, f"max polyline distance={worst:.1e}")


def test_c10_region_symmetry(verdict):
    rng = np.random.default_rng(10)
    worst = 0.0
    for i in range(20):
        d = 2 + i % 3
        rp, rn = random_density(d, rng), random_density(d, rng)
        pts = feasible_region(rp, rn, samples_per_rank=500, seed=i).all_points()
        dist, _ = cKDTree(pts).query(1.0 - pts, p=np.inf)
        worst = max(worst, float(dist.max()))
    verdict("C10", worst <= 1e-12, f"max distance to reflected partner={worst:.1e}")


def test_c11_unambiguous(verdict):
    rng = np.random.default_rng(11)
    worst_err, worst_sum = 0.0, 0.0
    for _ in range(20):
        # rank-2 states in dimension 3: each has a one-dimensional kernel
        g = [rng.standard_normal((3, 2)) + 1j * rng.standard_normal((3, 2)) for _ in range(2)]
        rp, rn = [x @ x.conj().T / np.trace(x @ x.conj().T).real for x in g]
        povm = build_povm(rp, rn)
        rates = success_rates(povm, rp, rn)
        worst_err = max(worst_err, rates.error_p, rates.error_n)
        worst_sum = max(worst_sum, np.abs(sum(povm.effects()) - np.eye(3)).max())
        worst_sum = max(worst_sum, -min(np.linalg.eigvalsh(m).min() for m in povm.effects()))
    worst_pure = 0.0
    for i in range(20):
        d = 2 + i % 2
        rp, rn = random_pure(rng, d), random_pure(rng, d)
        rates = success_rates(build_povm(rp, rn, 0.5, 0.5), rp, rn)
        worst_pure = max(worst_pure, abs(rates.succ_p - (1 - fidelity(rp, rn)) / 2))
    flagged = 0
    for i in range(20):
        rp, rn = random_density(3, rng), random_density(3, rng)
        try:
            build_povm(rp, rn)
        except InfeasiblePair:
            flagged += not feasibility(rp, rn).feasible
    ok = worst_err <= 1e-10 and worst_sum <= 1e-10 and worst_pure <= 1e-10 and flagged == 20
    verdict("C11", ok, f"false conclusives={worst_err:.1e} POVM defect={worst_sum:.1e} "
                       f"pure succ_p err={worst_pure:.1e} full-rank infeasible={flagged}/20")


def test_c12_refinement_monotone(verdict):
    rng = np.random.default_rng(12)
    bad, levels = 0, []
    for i in range(20):
        d = 2 + i % 3
        rp, rn = random_density(d, rng), random_density(d, rng)
        rep = quantum_bhattacharyya(rp, rn, min_levels=5)
        levels.append(rep.refinement_levels)
        bad += any(b > a for a, b in zip(rep.lengths, rep.lengths[1:]))
    ok = bad == 0 and min(levels) >= 5
    verdict("C12", ok, f"pairs with an increase={bad} refinement levels {min(levels)}..{max(levels)}")
