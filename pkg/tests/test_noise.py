import numpy as np
import pytest

from kslab.noise import (
    ConvolutionState,
    DegeneratePathError,
    NoiseSpec,
    advance_convolution,
    holder_exponent_estimate,
    initial_state,
    make_stream,
    sample_wa_matrix,
    sample_wa_path,
)
from kslab.spectral import DomainSpec

DOM = DomainSpec(half_length=np.pi / 2, shift=0.5, modes=4)


def ou_variance(q: float, lam: float, t: float) -> float:
    """Ito isometry: Var w_k(t) = q (1 - e^{2 lam t}) / (2 |lam|)."""
    return q * (1.0 - np.exp(2.0 * lam * t)) / (2.0 * abs(lam))


class TestNoiseSpec:
    def test_profile(self):
        spec = NoiseSpec(sigma=0.2, decay_rate=3.0)
        q = spec.covariance(4)
        assert q == pytest.approx(0.04 * np.arange(1, 5.0) ** -3.0)

    def test_explicit_q(self):
        spec = NoiseSpec(q=np.array([1.0, 0.0, 2.0, 0.5]))
        assert spec.covariance(4) == pytest.approx([1.0, 0.0, 2.0, 0.5])
        with pytest.raises(ValueError):
            spec.covariance(3)

    def test_validation(self):
        with pytest.raises(ValueError):
            NoiseSpec(sigma=-0.1)
        with pytest.raises(ValueError):
            NoiseSpec(decay_rate=1.0)
        with pytest.raises(ValueError):
            NoiseSpec(q=np.array([-1.0]))


class TestAdvanceConvolution:
    def test_zero_covariance_decays_deterministically(self, rng):
        state = ConvolutionState(time=0.0, wa_coeffs=np.array([1.0, 2.0, 3.0, 4.0]))
        spec = NoiseSpec(q=np.zeros(4))
        out = advance_convolution(state, 0.5, DOM, spec, rng)
        assert out.wa_coeffs == pytest.approx(np.exp(DOM.lam * 0.5) * state.wa_coeffs)
        assert out.time == pytest.approx(0.5)

    def test_rejects_bad_step(self, rng):
        with pytest.raises(ValueError):
            advance_convolution(initial_state(DOM), 0.0, DOM, NoiseSpec(), rng)

    def test_one_step_variance_within_four_se(self):
        n = 10_000
        h = 0.1
        rng = make_stream(42, 0)
        spec = NoiseSpec(sigma=0.5, decay_rate=2.0)
        samples = np.empty((n, DOM.modes))
        for i in range(n):
            samples[i] = advance_convolution(initial_state(DOM), h, DOM, spec, rng).wa_coeffs
        q = spec.covariance(DOM.modes)
        for k in range(DOM.modes):
            target = ou_variance(q[k], DOM.lam[k], h)
            observed = samples[:, k].var(ddof=1)
            se = target * np.sqrt(2.0 / (n - 1))
            assert abs(observed - target) <= 4 * se

    def test_stationary_variance_via_one_long_exact_step(self):
        # exact transition: a single step of length T reaches the
        # stationary law once e^{2 lam T} is negligible
        n = 10_000
        T = 60.0
        rng = make_stream(43, 0)
        spec = NoiseSpec(sigma=0.5, decay_rate=2.0)
        samples = np.empty((n, DOM.modes))
        for i in range(n):
            samples[i] = advance_convolution(initial_state(DOM), T, DOM, spec, rng).wa_coeffs
        q = spec.covariance(DOM.modes)
        for k in range(DOM.modes):
            target = q[k] / (2.0 * abs(DOM.lam[k]))
            observed = samples[:, k].var(ddof=1)
            se = target * np.sqrt(2.0 / (n - 1))
            assert abs(observed - target) <= 4 * se

    def test_joint_law_two_steps(self):
        n = 10_000
        h = 0.2
        k = 0
        rng = make_stream(44, 0)
        spec = NoiseSpec(sigma=0.3, decay_rate=2.0)
        first = np.empty(n)
        second = np.empty(n)
        for i in range(n):
            s1 = advance_convolution(initial_state(DOM), h, DOM, spec, rng)
            s2 = advance_convolution(s1, h, DOM, spec, rng)
            first[i], second[i] = s1.wa_coeffs[k], s2.wa_coeffs[k]
        q = spec.covariance(DOM.modes)[k]
        lam = DOM.lam[k]
        v1 = ou_variance(q, lam, h)
        v2 = ou_variance(q, lam, 2 * h)
        cov = np.exp(lam * h) * v1
        assert abs(first.mean()) <= 4 * np.sqrt(v1 / n)
        assert abs(second.mean()) <= 4 * np.sqrt(v2 / n)
        assert abs(first.var(ddof=1) - v1) <= 4 * v1 * np.sqrt(2 / (n - 1))
        assert abs(second.var(ddof=1) - v2) <= 4 * v2 * np.sqrt(2 / (n - 1))
        observed_cov = np.cov(first, second, ddof=1)[0, 1]
        se_cov = np.sqrt((v1 * v2 + cov**2) / (n - 1))
        assert abs(observed_cov - cov) <= 4 * se_cov

    def test_modes_uncorrelated(self):
        n = 10_000
        rng = make_stream(45, 0)
        samples = np.empty((n, DOM.modes))
        for i in range(n):
            samples[i] = advance_convolution(initial_state(DOM), 0.3, DOM, NoiseSpec(), rng).wa_coeffs
        corr = np.corrcoef(samples, rowvar=False)
        off_diag = corr[~np.eye(DOM.modes, dtype=bool)]
        assert np.max(np.abs(off_diag)) <= 4 / np.sqrt(n)


class TestSamplePath:
    def test_two_snapshots(self):
        states = sample_wa_path(0.1, 0.1, DOM, NoiseSpec(), make_stream(0, 0))
        assert len(states) == 2
        assert np.all(states[0].wa_coeffs == 0)
        assert states[1].time == pytest.approx(0.1)

    def test_zero_noise_zero_path(self):
        states = sample_wa_path(1.0, 0.1, DOM, NoiseSpec(sigma=0.0), make_stream(0, 0))
        assert all(np.all(s.wa_coeffs == 0) for s in states)

    def test_rejects_bad_grid(self):
        with pytest.raises(ValueError):
            sample_wa_path(0.05, 0.1, DOM, NoiseSpec(), make_stream(0, 0))

    def test_reproducible_given_seed_and_stream(self):
        a = sample_wa_path(0.5, 0.05, DOM, NoiseSpec(), make_stream(9, 3), stream_id=3)
        b = sample_wa_path(0.5, 0.05, DOM, NoiseSpec(), make_stream(9, 3), stream_id=3)
        for sa, sb in zip(a, b):
            assert np.array_equal(sa.wa_coeffs, sb.wa_coeffs)

    def test_distinct_streams_differ(self):
        a = sample_wa_path(0.5, 0.05, DOM, NoiseSpec(), make_stream(9, 0))
        b = sample_wa_path(0.5, 0.05, DOM, NoiseSpec(), make_stream(9, 1))
        assert not np.allclose(a[-1].wa_coeffs, b[-1].wa_coeffs)

    def test_matrix_variant_matches_states(self):
        states = sample_wa_path(0.5, 0.05, DOM, NoiseSpec(), make_stream(9, 0))
        times, wa = sample_wa_matrix(0.5, 0.05, DOM, NoiseSpec(), make_stream(9, 0))
        assert times == pytest.approx([s.time for s in states])
        assert np.array_equal(wa, np.stack([s.wa_coeffs for s in states]))

    def test_ensemble_mean_zero(self):
        n = 10_000
        h = 0.25
        last = np.empty((n, DOM.modes))
        for i in range(n):
            states = sample_wa_path(2 * h, h, DOM, NoiseSpec(sigma=0.5, decay_rate=2.0), make_stream(77, i))
            last[i] = states[-1].wa_coeffs
        q = NoiseSpec(sigma=0.5, decay_rate=2.0).covariance(DOM.modes)
        for k in range(DOM.modes):
            se = np.sqrt(ou_variance(q[k], DOM.lam[k], 2 * h) / n)
            assert abs(last[:, k].mean()) <= 4 * se


class TestHolderEstimate:
    def test_linear_path_exponent_one(self):
        times = np.linspace(0.0, 1.0, 33)
        phi1 = np.zeros(DOM.modes)
        phi1[0] = 1.0
        states = [ConvolutionState(time=t, wa_coeffs=t * phi1) for t in times]
        assert holder_exponent_estimate(states, DOM) == pytest.approx(1.0, abs=0.05)

    def test_needs_enough_snapshots(self):
        states = sample_wa_path(0.5, 0.05, DOM, NoiseSpec(), make_stream(0, 0))
        with pytest.raises(ValueError):
            holder_exponent_estimate(states[:8], DOM)

    def test_degenerate_path_rejected(self):
        states = sample_wa_path(1.0, 1 / 32, DOM, NoiseSpec(sigma=0.0), make_stream(0, 0))
        with pytest.raises(DegeneratePathError):
            holder_exponent_estimate(states, DOM)

    def test_default_spec_estimate_positive_below_half(self):
        dom = DomainSpec(half_length=16.0, shift=0.5, modes=64)
        estimates = []
        for i in range(100):
            states = sample_wa_path(0.5, 0.5 / 128, dom, NoiseSpec(), make_stream(2024, i))
            estimates.append(holder_exponent_estimate(states, dom))
        median = float(np.median(estimates))
        print(f"holder exponent estimate, default noise, median of 100 paths: {median:.4f}")
        assert 0.0 < median < 0.5
