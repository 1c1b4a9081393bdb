import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from driftlink import analysis as A

gains = st.floats(1e-3, 1e3)
relay_counts = st.integers(1, 64)


class TestEnvelopes:
    def test_min_cut_examples(self):
        assert A.min_cut_metric(2, 1, 1) == pytest.approx(math.sqrt(2), abs=1e-6)
        assert A.min_cut_metric(4, 1, 0.1) == pytest.approx(0.4)
        assert A.min_cut_metric(4, 0.1, 10) == pytest.approx(0.4)

    def test_sync_upper_bound_examples(self):
        assert A.sync_upper_bound(2, 1, 1) == pytest.approx(4.0806, abs=2e-4)
        assert A.sync_upper_bound(2, 1, 1) == pytest.approx(
            (2.0 / math.log(2)) * math.sqrt(2), rel=1e-12
        )
        assert A.sync_upper_bound(1, 1, 1) == pytest.approx(2.0 / math.log(2))

    @given(relay_counts, gains, gains, st.floats(1e-2, 1e2))
    def test_homogeneity(self, K, g, h, c):
        assert A.sync_upper_bound(K, c * g, c * h) == pytest.approx(
            c * A.sync_upper_bound(K, g, h), rel=1e-9
        )
        assert A.unsync_lower_bound(K, c * g, c * h, 1.0) == pytest.approx(
            c * A.unsync_lower_bound(K, g, h, 1.0), rel=1e-9
        )

    def test_unsync_lower_bound_examples(self):
        assert A.unsync_lower_bound(2, 1, 1, 1) == pytest.approx(0.14142, abs=1e-5)
        assert A.unsync_lower_bound(2, 1, 1, 0.999) == pytest.approx(
            0.999 * A.unsync_lower_bound(2, 1, 1, 1), rel=1e-12
        )

    @given(relay_counts, gains, gains)
    def test_envelope_ratio_identity(self, K, g, h):
        ratio = A.sync_upper_bound(K, g, h) / A.unsync_lower_bound(K, g, h, 1.0)
        assert ratio == pytest.approx(20.0 / math.log(2), abs=1e-9)
        assert ratio <= 29.0

    @given(relay_counts, gains, gains)
    def test_regime_partition(self, K, g, h):
        preds = [h < g / K, g / K <= h < K * g, h >= K * g]
        assert sum(preds) == 1
        labels = [A.REGIME_MAC, A.REGIME_INTERMEDIATE, A.REGIME_BC]
        assert A.regime(K, g, h) == labels[preds.index(True)]


class TestCapacityUpperBound:
    def test_low_snr_balanced(self):
        assert A.capacity_upper_bound(0.1, 0.1, 2, 1, 1) == pytest.approx(
            0.5 * math.log2(1.2), abs=1e-6
        )

    def test_high_snr(self):
        assert A.capacity_upper_bound(2, 1, 2, 1, 1) == pytest.approx(
            0.5 * math.log2(5), abs=1e-6
        )

    def test_relay_power_starved(self):
        assert A.capacity_upper_bound(0.05, 0.01, 2, 1, 1) == pytest.approx(
            0.5 * math.log2(1.04), abs=1e-6
        )

    def test_middle_cases(self):
        # fourth case: max < 1, P1g between P2h and K^2 P2h, K sqrt(...) < 1
        val = A.capacity_upper_bound(0.02, 0.01, 2, 1, 1)
        assert val == pytest.approx(math.log2(1 + 2 * 2 * math.sqrt(0.02 * 0.01)), abs=1e-9)
        # third case (K sqrt(P1 P2 g h) >= 1) carries the extra half bit
        val = A.capacity_upper_bound(0.9, 0.45, 2, 1, 1)
        assert val == pytest.approx(0.5 * math.log2(1 + 2 * 4 * 0.405) + 0.5, abs=1e-9)

    def test_single_relay_refused(self):
        with pytest.raises(ValueError, match="K >= 2"):
            A.capacity_upper_bound(1, 1, 1, 1, 1)


class TestSnrFloor:
    def test_mac_regime_value(self):
        P1, P2, reg = A.select_powers(2, 1, 0.1, 1.0)
        assert reg == A.REGIME_MAC
        assert (P1, P2) == (1.0, 2.5)
        assert A.snr_lb(P1, P2, 2, 1, 0.1, 1.0) == pytest.approx(0.4, rel=1e-12)

    def test_intermediate_value(self):
        P1, P2, reg = A.select_powers(2, 1, 1, 1.0)
        assert reg == A.REGIME_INTERMEDIATE
        assert P1 == pytest.approx(1 / math.sqrt(2))
        assert P2 == pytest.approx(1 / math.sqrt(8))
        assert A.snr_lb(P1, P2, 2, 1, 1, 1.0) == pytest.approx(0.41421, abs=1e-5)

    @given(relay_counts, gains, gains)
    def test_selected_powers_floor_and_exactness(self, K, g, h):
        P1, P2, reg = A.select_powers(K, g, h, 1.0)
        s = A.snr_lb(P1, P2, K, g, h, 1.0)
        assert s >= 1.0 / 3.0 - 1e-12
        if reg != A.REGIME_INTERMEDIATE:
            assert s == pytest.approx(1.0 / (2.0 + 1.0 / K), rel=1e-12)
        else:
            # intermediate-regime ceiling is 1/(1 + 2/sqrt(K)), reached at g = h
            assert s <= 1.0 / (1.0 + 2.0 / math.sqrt(K)) + 1e-12

    def test_interval_claim_breaks_above_four_relays(self):
        # documents the known behavior: at K > 4 with g = h the selected
        # powers push the floor above 1/2
        P1, P2, _ = A.select_powers(9, 1, 1, 1.0)
        assert A.snr_lb(P1, P2, 9, 1, 1, 1.0) == pytest.approx(0.6, rel=1e-12)
        for K in (2, 3, 4):
            P1, P2, _ = A.select_powers(K, 1, 1, 1.0)
            assert A.snr_lb(P1, P2, K, 1, 1, 1.0) <= 0.5 + 1e-12

    def test_boundary_conventions(self):
        assert A.select_powers(2, 1.0, 0.5, 1.0)[2] == A.REGIME_INTERMEDIATE
        assert A.select_powers(2, 1.0, 2.0, 1.0)[2] == A.REGIME_BC


def _snr_unequal_reference(P1, P2k, mu1k, mu2k, g, h):
    # independently structured evaluation: accumulate per-relay terms scalar-wise
    amplitude = 0.0
    forwarded = 0.0
    for p2, m1, m2 in zip(P2k, mu1k, mu2k):
        alpha_sq = p2 / (1.0 + m1 * g * P1)
        amplitude += math.sqrt(alpha_sq * m1 * m2 * g * h)
        forwarded += m2 * alpha_sq
    return amplitude * amplitude * P1 / (1.0 + h * forwarded)


class TestUnequalDrifts:
    @given(st.integers(1, 8), gains, gains, st.integers(0, 100))
    def test_reduces_to_symmetric(self, K, g, h, seed):
        mu = 0.9 + 0.2 * (seed / 100.0)
        P1, P2, _ = A.select_powers(K, g, h, mu)
        sym = A.snr_lb(P1, P2, K, g, h, mu)
        uneq = A.snr_lb_unequal(P1, (P2,) * K, (mu,) * K, (mu,) * K, g, h)
        assert uneq == pytest.approx(sym, abs=1e-12 * max(1.0, sym))

    def test_single_relay_matches(self):
        assert A.snr_lb_unequal(0.5, [0.25], [1.0], [1.0], 1.0, 2.0) == pytest.approx(
            A.snr_lb(0.5, 0.25, 1, 1.0, 2.0, 1.0), rel=1e-14
        )

    def test_against_reference_implementation(self):
        mu1, mu2 = (1.0, 1.0), (1.0, 0.5)
        P1, P2k, _ = A.select_powers_unequal(2, 1.0, 1.0, mu1, mu2)
        ours = A.snr_lb_unequal(P1, P2k, mu1, mu2, 1.0, 1.0)
        ref = _snr_unequal_reference(P1, P2k, mu1, mu2, 1.0, 1.0)
        assert ours == pytest.approx(ref, abs=1e-12)

    def test_select_powers_unequal_reduces(self):
        P1s, P2s, regs = A.select_powers(3, 2.0, 0.4, 1.0)
        P1u, P2u, regu = A.select_powers_unequal(3, 2.0, 0.4, (1.0,) * 3, (1.0,) * 3)
        assert regs == regu
        assert P1u == pytest.approx(P1s, rel=1e-14)
        assert P2u == pytest.approx([P2s] * 3, rel=1e-14)

    def test_min_drift_in_first_hop_power(self):
        P1, P2k, reg = A.select_powers_unequal(2, 0.1, 10.0, (1.0, 2.0), (1.0, 1.0))
        assert reg == A.REGIME_BC
        assert P1 == pytest.approx(1.0 / (1.0 * 2 * 0.1), rel=1e-14)
        assert P2k == pytest.approx([1.0 / (2 * 10.0)] * 2, rel=1e-14)

    def test_mu_tilde_examples(self):
        assert A.mu_tilde((1.0, 1.0), (1.0, 1.0)) == pytest.approx(1.0, rel=1e-14)
        assert A.mu_tilde((2.0, 1.0), (1.0, 1.0)) == pytest.approx(1.0, rel=1e-14)
        assert A.mu_tilde((0.9,), (1.1,)) == pytest.approx(
            2.0 / (1 / 0.9 + 1 / 1.1), rel=1e-14
        )

    @given(st.integers(1, 8), st.integers(0, 99))
    def test_mu_tilde_equal_drift_identity(self, K, seed):
        mu = 0.5 + (seed / 99.0)
        assert A.mu_tilde((mu,) * K, (mu,) * K) == pytest.approx(mu, rel=1e-14)


class TestCapacityFormulas:
    def test_awgn_values(self):
        assert A.awgn_capacity(0.0) == 0.0
        assert A.awgn_capacity(0.5) == pytest.approx(0.29248, abs=1e-5)
        assert A.awgn_capacity(1.0) == 0.5

    def test_binary_input_values(self):
        assert A.bpsk_awgn_capacity(0.0) == 0.0
        assert A.bpsk_awgn_capacity(0.5) == pytest.approx(0.29048, abs=5e-4)
        assert A.bpsk_awgn_capacity(100.0) == pytest.approx(1.0, abs=1e-3)

    def test_binary_input_monotone_and_dominated(self):
        grid = np.linspace(0.0, 4.0, 41)
        values = [A.bpsk_awgn_capacity(float(s)) for s in grid]
        assert all(b <= a + 1e-9 for a, b in zip(values[1:], values))
        for s, v in zip(grid, values):
            assert v <= min(1.0, A.awgn_capacity(float(s))) + 1e-9

    def test_quadrature_tolerance_failure_is_loud(self):
        with pytest.raises(A.QuadratureError):
            A.bpsk_awgn_capacity(0.5, tol=1e-15)

    def test_gamma_constant(self):
        gamma = A.gamma_constant()
        assert gamma == pytest.approx(0.29048 / 0.29248, abs=2e-3)
        assert gamma >= 0.99
        # the minimizer over [1/3, 1/2] sits at the right endpoint
        r_third = A.bpsk_awgn_capacity(1 / 3) / A.awgn_capacity(1 / 3)
        r_half = A.bpsk_awgn_capacity(0.5) / A.awgn_capacity(0.5)
        assert r_third >= r_half
        assert gamma == pytest.approx(r_half, abs=1e-9)
        assert gamma * math.log2(4.0 / 3.0) / 4.0 >= 0.1

    def test_achievable_rpue(self):
        value = A.achievable_rpue(2, 1, 1, 1)
        assert value == pytest.approx(0.14574, abs=2e-4)
        assert value >= A.unsync_lower_bound(2, 1, 1, 1)
        assert A.achievable_rpue(2, 1, 1, 2.0) == pytest.approx(2 * value, rel=1e-9)

    @given(relay_counts, gains, gains)
    def test_achievable_dominates_envelope_floor(self, K, g, h):
        assert A.achievable_rpue(K, g, h, 1.0) >= A.unsync_lower_bound(K, g, h, 1.0)


class TestAlignmentBounds:
    def test_union_bound_values(self):
        assert A.e_idc_probability_bound(2, 16, 0.1) == pytest.approx(0.05)
        assert A.e_idc_probability_bound(2, 16, 0.0) == 0.0
        assert A.e_idc_probability_bound(64, 4, 1.0) == 1.0

    def test_chebyshev_matches_union_bound_at_wide_margins(self):
        for N in (4, 8, 16):
            nu, beta = A.paper_margins(N)
            assert A.e_idc_chebyshev_bound(2, N, N**4, 0.1, nu, beta) == pytest.approx(
                A.e_idc_probability_bound(2, N, 0.1), rel=1e-12
            )

    def test_delta_values(self):
        assert A.delta_n(16, 1.0) == pytest.approx(0.3125)
        assert A.delta_n(16, 1.0, nu=0.0, beta=0.0) == 0.0
        deltas = [A.delta_n(N, 1.0) for N in range(2, 40)]
        assert all(b < a for a, b in zip(deltas, deltas[1:]))

    def test_desk_margins_floor(self):
        assert A.desk_margins(64, 256, 0.0) == (1.0, 1.0)
        nu, beta = A.desk_margins(256, 4096, 0.1)
        assert nu == pytest.approx(4 * math.sqrt(256 * 4096 * 0.1))
        assert beta == pytest.approx(4 * math.sqrt(4096 * 0.1))


class TestMeanInequality:
    def test_equality_case(self):
        assert A.amgm_check(1, 1, 1)

    def test_examples(self):
        assert A.amgm_check(4, 2, 0.5)
        assert A.amgm_check(64, 1e-3, 1e3)

    def test_grid(self):
        rng = np.random.default_rng(4)
        for _ in range(100_000):
            K = int(rng.integers(1, 65))
            g = 10.0 ** rng.uniform(-3, 3)
            h = 10.0 ** rng.uniform(-3, 3)
            assert A.amgm_check(K, g, h)


class TestBoundsReport:
    def test_symmetric_report(self):
        rep = A.bounds_report(2, 1, 1, 1)
        d = rep.to_dict()
        assert d["regime"] == A.REGIME_INTERMEDIATE
        assert d["ratio"] == pytest.approx(28.8539, abs=1e-4)
        assert d["P2"] == pytest.approx(1 / math.sqrt(8))
        assert rep.unsync_lb <= rep.sync_ub

    def test_ordering_holds_up_to_the_crossover_drift(self):
        # the envelopes cross at mu = 20/ln 2, not at 29
        crossover = 20.0 / math.log(2.0)
        assert A.bounds_report(3, 1, 2, crossover * 0.999).unsync_lb < A.sync_upper_bound(3, 1, 2)
        assert A.unsync_lower_bound(3, 1, 2, crossover * 1.001) > A.sync_upper_bound(3, 1, 2)

    def test_unequal_report(self):
        rep = A.bounds_report_unequal(2, 1, 1, (1.0, 1.1), (0.9, 1.0))
        d = rep.to_dict()
        assert d["mu_tilde"] == pytest.approx(A.mu_tilde((1.0, 1.1), (0.9, 1.0)))
        assert len(d["P2k"]) == 2
        assert d["ratio"] == pytest.approx(20.0 / (d["mu_tilde"] * math.log(2)), rel=1e-12)


class TestSyncEnvelopeConsistency:
    def test_capacity_per_energy_never_beats_envelope(self):
        rng = np.random.default_rng(11)
        factors = np.logspace(math.log10(0.25), math.log10(4.0), 7)
        for _ in range(60):
            K = int(rng.integers(2, 65))
            g = 10.0 ** rng.uniform(-3, 3)
            h = 10.0 ** rng.uniform(-3, 3)
            P1, P2, _ = A.select_powers(K, g, h, 1.0)
            envelope = A.sync_upper_bound(K, g, h)
            for f1 in factors:
                for f2 in factors:
                    per_energy = A.capacity_upper_bound(P1 * f1, P2 * f2, K, g, h) / (
                        P1 * f1 + K * P2 * f2
                    )
                    assert per_energy <= envelope + 1e-9
