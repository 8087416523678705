import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qroc.errors import DimensionMismatch, EffectSumExceedsIdentity, InfeasiblePair, ValidationError
from qroc.linalg import fidelity, pure_density, random_density
from qroc.quantum import feasible_region, pure_state, roc_point
from qroc.unambiguous import build_povm, feasibility, max_lambda1, success_rates

from .conftest import diag_state, random_pair

seeds = st.integers(0, 2**32 - 1)


def engineered_pair(rng, d=3, rank_p=2, rank_n=2):
    """Two states of reduced rank in random positions, so each kernel is nontrivial."""
    def state(rank):
        g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
        m = g @ g.conj().T
        return m / np.trace(m).real
    return state(rank_p), state(rank_n)


def check_povm(povm, rho_p, rho_n):
    d = povm.m_p.shape[0]
    for m in povm.effects():
        assert np.max(np.abs(m - m.conj().T)) <= 1e-9
        assert np.linalg.eigvalsh(m).min() >= -1e-9
    assert np.max(np.abs(sum(povm.effects()) - np.eye(d))) <= 1e-10
    rates = success_rates(povm, rho_p, rho_n)
    assert rates.error_p <= 1e-10 and rates.error_n <= 1e-10
    assert rates.succ_p + rates.inconclusive_p + rates.error_p == pytest.approx(1, abs=1e-10)
    assert rates.succ_n + rates.inconclusive_n + rates.error_n == pytest.approx(1, abs=1e-10)
    return rates


class TestFeasibility:
    def test_distinct_pure_states(self):
        rep = feasibility(pure_state(0.2), pure_state(1.3))
        assert rep.can_detect_p and rep.can_detect_n
        assert rep.kernel_rank_p == rep.kernel_rank_n == 1

    def test_full_rank(self, rng):
        rep = feasibility(*random_pair(rng, 3))
        assert not rep.can_detect_p and not rep.can_detect_n
        assert not rep.feasible

    def test_one_sided(self):
        # rho_p lives inside the support of rho_n; rho_n has weight outside rho_p's support
        rho_p = pure_density([1, 1, 0])
        rho_n = diag_state(0.5, 0.3, 0.2)
        rho_n[0, 1] = rho_n[1, 0] = 0.1
        rep = feasibility(rho_p, rho_n)
        assert not rep.can_detect_p
        assert rep.can_detect_n
        assert rep.kernel_rank_p == 0 and rep.kernel_rank_n == 2

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            feasibility(np.eye(2) / 2, np.eye(3) / 3)


class TestBuildPovm:
    def test_default_is_valid(self):
        rp, rn = pure_state(0.3), pure_state(1.5)
        povm = build_povm(rp, rn)
        check_povm(povm, rp, rn)

    def test_one_sided_weights(self):
        rp, rn = pure_state(0.3), pure_state(1.5)
        povm = build_povm(rp, rn, 1.0, 0.0)
        np.testing.assert_allclose(povm.m_n, 0)
        # "positive" never fires on the negative state: the point sits on the TP axis
        assert roc_point(rp, rn, povm.m_p).fp <= 1e-10

    def test_orthogonal_perfect(self):
        rp, rn = diag_state(1, 0), diag_state(0, 1)
        povm = build_povm(rp, rn, 1.0, 1.0)
        np.testing.assert_allclose(povm.m_inconclusive, 0, atol=1e-15)
        rates = success_rates(povm, rp, rn)
        assert rates.succ_p == pytest.approx(1) and rates.succ_n == pytest.approx(1)

    @given(seeds, st.floats(0.05, 3.1))
    def test_pure_success_rate(self, seed, gap):
        theta = np.random.default_rng(seed).uniform(0, 2 * np.pi)
        rp, rn = pure_state(theta), pure_state(theta + gap)
        rates = check_povm(build_povm(rp, rn), rp, rn)
        F = fidelity(rp, rn)
        assert rates.succ_p == pytest.approx((1 - F) / 2, abs=1e-10)
        assert rates.succ_n == pytest.approx((1 - F) / 2, abs=1e-10)

    def test_identical_states_infeasible(self):
        with pytest.raises(InfeasiblePair):
            build_povm(pure_state(0.4), pure_state(0.4))

    def test_one_direction_only(self):
        rho_p = pure_density([1, 1, 0])
        rho_n = diag_state(0.5, 0.3, 0.2)
        rho_n[0, 1] = rho_n[1, 0] = 0.1
        with pytest.raises(InfeasiblePair):
            build_povm(rho_p, rho_n)
        povm = build_povm(rho_p, rho_n, 0.0, 1.0)
        check_povm(povm, rho_p, rho_n)

    def test_too_aggressive(self):
        # kernels overlap in angle: K_n + K_p exceeds the identity
        rp, rn = pure_state(0.0), pure_state(0.4)
        with pytest.raises(EffectSumExceedsIdentity):
            build_povm(rp, rn, 1.0, 1.0)

    def test_lambda_range(self):
        with pytest.raises(ValidationError):
            build_povm(pure_state(0), pure_state(1), 1.5, 0.5)

    @pytest.mark.parametrize("seed", range(10))
    def test_engineered_three_dim(self, seed):
        rng = np.random.default_rng(seed)
        rp, rn = engineered_pair(rng)
        assert feasibility(rp, rn).feasible
        check_povm(build_povm(rp, rn), rp, rn)

    def test_dimension_mismatch(self):
        povm = build_povm(pure_state(0), pure_state(1))
        with pytest.raises(DimensionMismatch):
            success_rates(povm, np.eye(3) / 3, np.eye(3) / 3)


class TestTuning:
    def test_success_is_linear_in_weight(self):
        rp, rn = pure_state(0.0), pure_state(1.2)
        s = [success_rates(build_povm(rp, rn, l1, 0.3), rp, rn).succ_p for l1 in (0.1, 0.2, 0.4)]
        assert s[1] - s[0] == pytest.approx((s[2] - s[1]) / 2, abs=1e-12)
        assert s[0] < s[1] < s[2]

    def test_max_lambda1_is_boundary(self):
        rp, rn = pure_state(0.0), pure_state(1.2)
        lam1 = max_lambda1(rp, rn, 0.5)
        build_povm(rp, rn, lam1, 0.5)
        with pytest.raises(EffectSumExceedsIdentity):
            build_povm(rp, rn, min(1.0, lam1 + 1e-6), 0.5)

    def test_max_lambda1_orthogonal(self):
        assert max_lambda1(diag_state(1, 0), diag_state(0, 1), 1.0) == 1.0

    @pytest.mark.parametrize("lam2", [0.0, 0.3, 0.5, 0.9, 1.0])
    def test_pure_closed_form(self, lam2):
        # rank-one kernels with overlap F: I - l1 K_n - l2 K_p >= 0 iff (1 - l1)(1 - l2) >= l1 l2 F
        rp, rn = pure_state(0.0), pure_state(math.pi / 2)
        F = fidelity(rp, rn)
        expected = (1 - lam2) / (1 - lam2 + lam2 * F)
        assert max_lambda1(rp, rn, lam2) == pytest.approx(expected, abs=1e-9)


class TestRegionContact:
    @pytest.mark.parametrize("seed", range(4))
    def test_flags_match_region_contact(self, seed):
        rng = np.random.default_rng(seed)
        d = 3 + seed % 2
        if seed % 2:
            rp, rn = engineered_pair(rng, d, 2, 2)
        else:
            rp = engineered_pair(rng, d, 2, 2)[0]
            rn = random_density(d, rng)
        rep = feasibility(rp, rn)
        reg = feasible_region(rp, rn, 400, seed=seed)
        pts = reg.all_points()
        # contact with the TP axis above the origin, and with the top edge left of (1, 1)
        touches_tp_axis = np.any((pts[:, 0] <= 1e-6) & (pts[:, 1] > 1e-6))
        touches_top = np.any((pts[:, 1] >= 1 - 1e-6) & (pts[:, 0] < 1 - 1e-6))
        assert touches_tp_axis == rep.can_detect_p
        assert touches_top == rep.can_detect_n
