import numpy as np
import pytest
import scipy.linalg

from nilcurv.errors import DegenerateInputError, NotNilpotentError, ZeroMatrixError
from nilcurv.nilpotent import (
    adjoint,
    commutator,
    extremal_graded_nilpotent,
    k_value,
    moment,
    random_conjugator,
    random_graded_nilpotent,
    rigidity_residual,
    standard_nilpotent,
)
from nilcurv.orbit import (
    MinimizeOptions,
    dominated_partitions,
    k_gradient,
    minimize_k_over_orbit,
    orbit_directional_derivative,
    sample_generator,
    verify_inequality,
)
from nilcurv.partitions import Composition, Partition, c_constant, conjugate_composition


def fd_derivative(a, eta, h=1e-5):
    ap = scipy.linalg.expm(h * eta) @ a @ scipy.linalg.expm(-h * eta)
    am = scipy.linalg.expm(-h * eta) @ a @ scipy.linalg.expm(h * eta)
    return (k_value(ap) - k_value(am)) / (2.0 * h)


def random_traceless(n, rng):
    eta = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return eta - np.trace(eta) / n * np.eye(n)


class TestDirectionalDerivative:
    def test_matches_finite_differences(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            n = int(rng.integers(2, 7))
            a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            a /= np.linalg.norm(a)
            eta = random_traceless(n, rng)
            eta /= np.linalg.norm(eta)
            analytic = orbit_directional_derivative(a, eta)
            fd = fd_derivative(a, eta)
            assert analytic == pytest.approx(fd, rel=1e-6, abs=1e-8)

    def test_zero_at_critical_point_skew_directions(self):
        rng = np.random.default_rng(1)
        for parts in [(3,), (3, 1), (2, 2), (4, 2)]:
            a = standard_nilpotent(Partition(parts))
            for _ in range(5):
                g = rng.standard_normal((a.shape[0],) * 2) + 1j * rng.standard_normal((a.shape[0],) * 2)
                skew = (g - adjoint(g)) / 2.0
                skew -= np.trace(skew) / a.shape[0] * np.eye(a.shape[0])
                assert abs(orbit_directional_derivative(a, skew)) < 1e-9

    def test_moment_commutator_is_never_ascent(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            n = int(rng.integers(2, 6))
            a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            a /= np.linalg.norm(a)
            eta = commutator(moment(a), a)
            assert orbit_directional_derivative(a, eta) <= 1e-10

    def test_gradient_representer_consistency(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            n = int(rng.integers(2, 6))
            a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            eta = random_traceless(n, rng)
            g = k_gradient(a)
            assert orbit_directional_derivative(a, eta) == pytest.approx(
                float(np.vdot(g, eta).real), rel=1e-10, abs=1e-12
            )

    def test_negative_gradient_descends(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            n = int(rng.integers(2, 6))
            a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            g = k_gradient(a)
            if np.linalg.norm(g) < 1e-8:
                continue
            assert orbit_directional_derivative(a, -g) < 0

    def test_gradient_traceless(self):
        rng = np.random.default_rng(5)
        a = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
        assert abs(np.trace(k_gradient(a))) < 1e-12

    def test_requires_traceless_direction(self):
        a = standard_nilpotent(Partition((2,)))
        with pytest.raises(ValueError):
            orbit_directional_derivative(a, np.eye(2))

    def test_zero_matrix_rejected(self):
        with pytest.raises(ZeroMatrixError):
            orbit_directional_derivative(np.zeros((2, 2)), np.zeros((2, 2)))


class TestMinimize:
    def test_starts_at_critical_point(self):
        res = minimize_k_over_orbit(standard_nilpotent(Partition((3, 1))), MinimizeOptions(restarts=1))
        assert res.converged
        assert res.iterations == 0
        assert res.min_estimate == pytest.approx(0.5, abs=1e-12)

    def test_recovers_constant_from_random_conjugate(self):
        rng = sample_generator(17, 0)
        lam = Partition((3, 1))
        x = standard_nilpotent(lam)
        g = random_conjugator(4, rng)
        res = minimize_k_over_orbit(g @ x @ np.linalg.inv(g), MinimizeOptions(restarts=4, seed=17))
        assert res.converged
        assert res.min_estimate == pytest.approx(float(c_constant(lam)), abs=1e-6)
        a_est, residual = rigidity_residual(res.argmin)
        assert residual < 1e-6
        assert a_est < 0

    def test_graded_start_reaches_type_constant(self):
        a = random_graded_nilpotent(Composition((1, 2, 1)), 3)
        res = minimize_k_over_orbit(a, MinimizeOptions(restarts=4, seed=3))
        assert res.converged
        assert res.min_estimate == pytest.approx(float(c_constant(Partition((3, 1)))), abs=1e-6)

    def test_never_below_type_constant(self):
        rng = np.random.default_rng(8)
        for seed in range(6):
            lam = Partition((4, 2))
            x = standard_nilpotent(lam)
            g = random_conjugator(6, rng)
            res = minimize_k_over_orbit(g @ x @ np.linalg.inv(g), MinimizeOptions(restarts=2, seed=seed))
            assert res.min_estimate >= float(c_constant(lam)) - 1e-7

    def test_trace_monotone(self):
        rng = sample_generator(30, 0)
        x = standard_nilpotent(Partition((4, 1)))
        g = random_conjugator(5, rng)
        res = minimize_k_over_orbit(g @ x @ np.linalg.inv(g), MinimizeOptions(restarts=1, seed=30))
        assert all(res.trace[i + 1] <= res.trace[i] for i in range(len(res.trace) - 1))

    def test_symmetric_extremal_is_fixed_point(self):
        for entries in [(1, 4, 4, 1), (2, 3, 3, 2), (1, 5, 3, 5, 1)]:
            a = extremal_graded_nilpotent(Composition(entries))
            a = a / np.linalg.norm(a)
            assert float(np.linalg.norm(k_gradient(a))) < 1e-8
            res = minimize_k_over_orbit(a, MinimizeOptions(restarts=1))
            assert res.iterations == 0

    def test_rejects_non_nilpotent(self):
        with pytest.raises(NotNilpotentError):
            minimize_k_over_orbit(np.eye(3))

    def test_rejects_zero(self):
        with pytest.raises(ZeroMatrixError):
            minimize_k_over_orbit(np.zeros((3, 3)))

    def test_option_validation(self):
        with pytest.raises(ValueError):
            MinimizeOptions(backtrack_factor=1.5)
        with pytest.raises(ValueError):
            MinimizeOptions(restarts=0)


class TestDominatedPartitions:
    def test_drops_all_ones(self):
        mus = dominated_partitions(Partition((2, 1, 1)))
        assert Partition((1, 1, 1, 1)) not in mus
        assert Partition((2, 1, 1)) in mus

    def test_top_partition_dominates_everything(self):
        mus = dominated_partitions(Partition((5,)))
        assert len(mus) == 6  # p(5) = 7, minus the all-ones partition
        for mu in mus:
            assert mu.total == 5


class TestVerifyInequality:
    def test_partition_campaign_clean(self):
        report = verify_inequality(Partition((4,)), samples=400, seed=7)
        assert report.violations == 0
        assert report.min_observed >= float(report.bound) - 1e-9
        assert report.kind == "partition"
        assert report.samples == 400

    def test_two_by_two_is_constant(self):
        report = verify_inequality(Partition((2,)), samples=200, seed=1)
        assert report.violations == 0
        assert report.min_observed == pytest.approx(2.0, abs=1e-10)
        assert abs(report.worst_margin) < 1e-10

    def test_composition_campaign_clean(self):
        report = verify_inequality(Composition((1, 3, 3, 1)), samples=400, seed=9)
        assert report.violations == 0
        assert report.bound == c_constant(Partition((4, 2, 2)))

    def test_deterministic_given_seed(self):
        a = verify_inequality(Partition((3, 1)), samples=150, seed=42)
        b = verify_inequality(Partition((3, 1)), samples=150, seed=42)
        da, db = a.to_json_dict(), b.to_json_dict()
        da.pop("timing")
        db.pop("timing")
        assert da == db

    def test_different_seeds_differ(self):
        a = verify_inequality(Partition((3, 1)), samples=150, seed=1)
        b = verify_inequality(Partition((3, 1)), samples=150, seed=2)
        assert a.min_observed != b.min_observed

    def test_progress_callback(self):
        seen = []
        verify_inequality(Partition((3,)), samples=25, seed=0, progress=lambda i, n, m: seen.append((i, n)))
        assert seen[0] == (1, 25)
        assert seen[-1] == (25, 25)
        assert len(seen) == 25

    def test_degenerate_specs(self):
        with pytest.raises(DegenerateInputError):
            verify_inequality(Partition((1, 1)), samples=10)
        with pytest.raises(DegenerateInputError):
            verify_inequality(Composition((5,)), samples=10)

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            verify_inequality(Partition((3,)), samples=0)
        with pytest.raises(TypeError):
            verify_inequality((3, 1), samples=10)

    def test_report_json_shape(self):
        report = verify_inequality(Composition((1, 2, 1)), samples=20, seed=5)
        blob = report.to_json_dict()
        assert blob["bound"] == "1/2"
        assert set(blob) == {
            "kind",
            "value",
            "seed",
            "samples",
            "bound",
            "min_observed",
            "violations",
            "worst_margin",
            "tolerance",
            "timing",
        }
        assert set(blob["timing"]) == {"started_at", "elapsed_seconds"}


class TestSampleStreams:
    def test_streams_independent_of_order(self):
        first = sample_generator(9, 3).standard_normal(4)
        sample_generator(9, 2).standard_normal(4)  # interleaved draws must not matter
        again = sample_generator(9, 3).standard_normal(4)
        assert np.array_equal(first, again)

    def test_distinct_indices_distinct_streams(self):
        a = sample_generator(9, 0).standard_normal(4)
        b = sample_generator(9, 1).standard_normal(4)
        assert not np.array_equal(a, b)
