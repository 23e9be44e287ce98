"""Contains tests for the SGD / SGLD dynamics in ddtlab.dynamics."""
import unittest
import os
import csv
import shutil
import tempfile
import numpy as np
from scipy import stats

from ddtlab.dynamics import ValleyRegion
from ddtlab.dynamics import MinibatchSampler
from ddtlab.dynamics.sampler import INDEX_BLOCK
from ddtlab.dynamics import SgdConfig
from ddtlab.dynamics import SgldConfig
from ddtlab.dynamics import initial_state
from ddtlab.dynamics import sgd_step
from ddtlab.dynamics import sgld_step
from ddtlab.dynamics import diffusion_matrix
from ddtlab.dynamics import EscapeTrial
from ddtlab.dynamics import TrajectoryWriter
from ddtlab.dynamics import simulate_until_exit
from ddtlab.dynamics import simulate_trials
from ddtlab.dynamics.steppers import Stepper
from ddtlab.landscapes import DatasetSpec
from ddtlab.landscapes import st_landscape
from ddtlab.landscapes import shifted_st_landscape
from ddtlab.landscapes import quadratic_landscape
from ddtlab.landscapes import double_well_landscape
from ddtlab.utils.exceptions import DivergenceError
from ddtlab.utils.rng import make_rng


class TestValleyRegion(unittest.TestCase):
    """Tests for the ValleyRegion object."""

    def test_box(self):
        region = ValleyRegion.box([0., 1.], 0.5)
        self.assertEqual(region.dim, 2)
        self.assertTrue(region.contains(np.array([0., 1.])))
        # The boundary is inside.
        self.assertTrue(region.contains(np.array([0.5, 0.5])))
        self.assertFalse(region.contains(np.array([0.51, 1.])))
        self.assertDictEqual(region.to_dict(),
                             {"center": [0., 1.], "radius": 0.5})

    def test_half_space(self):
        region = ValleyRegion.half_space(upper=[0.2])
        self.assertTrue(region.contains(np.array([-1e5])))
        self.assertTrue(region.contains(np.array([0.2])))
        self.assertFalse(region.contains(np.array([0.3])))
        self.assertDictEqual(region.to_dict(),
                             {"lower": [None], "upper": [0.2]})

    def test_scaled(self):
        region = ValleyRegion.box([2.], 1.).scaled(0.5)
        np.testing.assert_almost_equal(region.lower, [0.5])
        np.testing.assert_almost_equal(region.upper, [1.5])
        self.assertEqual(region.radius, 0.5)

    def test_disjoint(self):
        r0 = ValleyRegion.box([-1.], 0.5)
        r1 = ValleyRegion.box([1.], 0.5)
        self.assertTrue(r0.is_disjoint(r1))
        self.assertFalse(r0.is_disjoint(ValleyRegion.box([0.], 0.6)))

    def test_invalid(self):
        self.assertRaises(ValueError, ValleyRegion, [1.], [0.])
        self.assertRaises(ValueError, ValleyRegion.box, [0.], 0.)
        self.assertRaises(ValueError, ValleyRegion.half_space)


class TestMinibatchSampler(unittest.TestCase):
    """Tests for the MinibatchSampler object."""

    def test_with_replacement(self):
        sampler = MinibatchSampler(10, 4, "with-replacement", make_rng(0))
        self.assertEqual(sampler.batch_size, 4)
        self.assertFalse(sampler.is_full_batch())
        for _ in range(20):
            idx = sampler.sample()
            self.assertEqual(idx.shape, (4,))
            np.testing.assert_array_equal(idx, np.sort(idx))
            self.assertTrue(np.all((idx >= 0) & (idx < 10)))

    def test_without_replacement(self):
        sampler = MinibatchSampler(10, 5, "without-replacement", make_rng(1))
        # Two batches form one epoch.
        epoch = np.concatenate([sampler.sample(), sampler.sample()])
        np.testing.assert_array_equal(np.sort(epoch), np.arange(10))

        # No index repeats within an epoch when batches straddle two epochs.
        sampler = MinibatchSampler(10, 4, "without-replacement", make_rng(1))
        first = np.concatenate([sampler.sample(), sampler.sample()])
        self.assertEqual(len(np.unique(first)), 8)

    def test_full_batch(self):
        sampler = MinibatchSampler(6, 6, "without-replacement", make_rng(0))
        self.assertTrue(sampler.is_full_batch())
        np.testing.assert_array_equal(sampler.sample(), np.arange(6))

    def test_blocked(self):
        sampler = MinibatchSampler(10, 3, "with-replacement", make_rng(4),
                                   blocked=True)
        rows = INDEX_BLOCK // 3
        batches = [sampler.sample() for _ in range(rows + 2)]
        for idx in batches:
            self.assertEqual(idx.shape, (3,))
            np.testing.assert_array_equal(idx, np.sort(idx))
            self.assertTrue(np.all((idx >= 0) & (idx < 10)))

        # A block is one draw of rows x B indices, sorted row by row.
        block = np.sort(make_rng(4).integers(0, 10, size=(rows, 3)), axis=1)
        np.testing.assert_array_equal(np.stack(batches[:rows]), block)

        # Every index is equally likely.
        counts = np.bincount(np.concatenate(batches), minlength=10)
        np.testing.assert_allclose(counts / float(counts.sum()), 0.1,
                                   atol=0.01)

        # Without replacement the blocked sampler is the plain one.
        plain = MinibatchSampler(10, 4, "without-replacement", make_rng(5))
        blocked = MinibatchSampler(10, 4, "without-replacement", make_rng(5),
                                   blocked=True)
        for _ in range(5):
            np.testing.assert_array_equal(plain.sample(), blocked.sample())

    def test_sample_distinct(self):
        sampler = MinibatchSampler(20, 8, "with-replacement", make_rng(2))
        for _ in range(10):
            self.assertEqual(len(np.unique(sampler.sample_distinct())), 8)

    def test_invalid(self):
        self.assertRaises(ValueError, MinibatchSampler, 10, 0,
                          "with-replacement", make_rng(0))
        self.assertRaises(ValueError, MinibatchSampler, 10, 11,
                          "with-replacement", make_rng(0))
        self.assertRaises(ValueError, MinibatchSampler, 10, 2, "woops",
                          make_rng(0))


class TestSgdStep(unittest.TestCase):
    """Tests for the sgd_step method."""

    def setUp(self):
        self.dataset = DatasetSpec(sample_count=50, input_dim=1, seed=0)
        self.landscape = quadratic_landscape(2., dataset=self.dataset)

    def test_full_batch_newton(self):
        # A full batch with η = 1/h jumps to the minimizer.
        config = SgdConfig(0.5, 50, "without-replacement")
        state = sgd_step(self.landscape, initial_state([3.]), config,
                         make_rng(0))
        np.testing.assert_allclose(
            state.theta, self.landscape.minimizer(), atol=1e-12)
        self.assertEqual(state.iteration, 1)
        self.assertAlmostEqual(state.dynamical_time, 0.5)

    def test_zero_learning_rate(self):
        config = SgdConfig(0., 1)
        state = initial_state([0.7])
        new = sgd_step(self.landscape, state, config, make_rng(0))
        np.testing.assert_array_equal(new.theta, state.theta)
        self.assertEqual(new.iteration, 1)
        self.assertEqual(new.dynamical_time, 0.)

    def test_unbiased(self):
        dataset = DatasetSpec(sample_count=1000, input_dim=1, seed=0)
        landscape = shifted_st_landscape(1, dataset)
        config = SgdConfig(0.1, 1)
        rng = make_rng(3)
        sampler = MinibatchSampler(1000, 1, "with-replacement", rng)
        state = initial_state([-2.5])

        steps = np.array([
            sgd_step(landscape, state, config, rng, sampler).theta[0] - -2.5
            for _ in range(20000)])
        g = -steps / 0.1
        se = np.std(g, ddof=1) / np.sqrt(g.shape[0])
        self.assertLess(abs(np.mean(g) - landscape.grad([-2.5])[0]), 4. * se)

    def test_requires_dataset(self):
        self.assertRaises(ValueError, sgd_step, st_landscape(1),
                          initial_state([0.]), SgdConfig(0.1, 1), make_rng(0))

    def test_invalid_config(self):
        self.assertRaises(ValueError, SgdConfig, -0.1, 1)
        self.assertRaises(ValueError, SgdConfig, 0.1, 0)
        self.assertRaises(ValueError, SgdConfig, 0.1, 1, "woops")
        self.assertDictEqual(
            SgdConfig(0.1, 4).replace(batch_size=8).to_dict(),
            {"stepper": "sgd", "eta": 0.1, "batch_size": 8,
             "sampling": "with-replacement"})


class TestSgldStep(unittest.TestCase):
    """Tests for the sgld_step method."""

    def test_noiseless_minimum(self):
        state = initial_state([0., 0.])
        new = sgld_step(quadratic_landscape(1., dim=2), state,
                        SgldConfig(0.1, 0.), make_rng(0))
        np.testing.assert_array_equal(new.theta, state.theta)

    def test_noise_variance(self):
        # A flat landscape leaves only the injected noise.
        landscape = quadratic_landscape(0.)
        config = SgldConfig(0.01, 0.5)
        rng = make_rng(4)
        state = initial_state([0.])
        steps = np.array([sgld_step(landscape, state, config, rng).theta[0]
                          for _ in range(20000)])
        self.assertAlmostEqual(config.noise_std ** 2, 0.01)
        self.assertLess(abs(np.var(steps, ddof=1) / 0.01 - 1.), 0.03)
        self.assertLess(abs(np.mean(steps)), 4. * 0.1 / np.sqrt(20000))

    def test_dynamical_time(self):
        state = initial_state([0.3])
        config = SgldConfig(0.01, 0.1)
        rng = make_rng(0)
        for _ in range(5):
            state = sgld_step(st_landscape(1), state, config, rng)
        self.assertEqual(state.iteration, 5)
        self.assertAlmostEqual(state.dynamical_time, 0.05)

    def test_divergence(self):
        # |1 - ηh| = 2 doubles the distance to the minimum every step.
        config = SgldConfig(3., 0.)
        state = initial_state([1.])
        with self.assertRaises(DivergenceError):
            for _ in range(25):
                state = sgld_step(quadratic_landscape(1.), state, config,
                                  make_rng(0))
        self.assertEqual(state.iteration, 19)

    def test_stationary_variance(self):
        # 200 independent coordinates of an isotropic well.
        landscape = quadratic_landscape(1., dim=200)
        runner = Stepper(landscape, SgldConfig(0.01, 0.5), make_rng(5))
        theta = np.zeros(200)
        for _ in range(1000):
            theta = runner.step(theta)
        snapshots = []
        for i in range(40000):
            theta = runner.step(theta)
            if i % 100 == 0:
                snapshots.append(theta)
        values = np.concatenate(snapshots)

        self.assertLess(abs(np.var(values) / 0.5 - 1.), 0.05)
        self.assertLess(abs(stats.kurtosis(values, fisher=True)), 0.1)

    def test_invalid_config(self):
        self.assertRaises(ValueError, SgldConfig, 0.1, -1.)
        self.assertRaises(ValueError, SgldConfig, -0.1, 1.)
        self.assertRaises(ValueError, Stepper, st_landscape(1), "sgd",
                          make_rng(0))


class TestDiffusionMatrix(unittest.TestCase):
    """Tests for the diffusion_matrix method."""

    def test_identity(self):
        np.testing.assert_almost_equal(
            diffusion_matrix(np.eye(3), 0.01, 128), 3.90625e-5 * np.eye(3))

    def test_negative_eigenvalues(self):
        np.testing.assert_almost_equal(
            diffusion_matrix(np.diag([2., -3.]), 0.1, 1),
            0.05 * np.diag([2., 3.]))

        # [H]⁺ keeps the eigenvectors.
        q = np.array([[1., 1.], [1., -1.]]) / np.sqrt(2.)
        h = q.dot(np.diag([2., -3.])).dot(q.T)
        np.testing.assert_almost_equal(
            diffusion_matrix(h, 0.1, 1), 0.05 * q.dot(np.diag([2., 3.])).dot(q.T))

    def test_zero(self):
        np.testing.assert_almost_equal(
            diffusion_matrix(np.zeros((2, 2)), 0.1, 4), np.zeros((2, 2)))

    def test_invalid(self):
        self.assertRaises(ValueError, diffusion_matrix,
                          np.array([[1., 2.], [0., 1.]]), 0.1, 1)


class TestSimulateUntilExit(unittest.TestCase):
    """Tests for the simulate_until_exit method."""

    def test_immediate_exit(self):
        # Starting on the boundary with the gradient pointing outwards.
        trial = simulate_until_exit(
            quadratic_landscape(1.), [1.], ValleyRegion.box([2.], 1.),
            SgldConfig(0.1, 0.))
        self.assertEqual(trial, EscapeTrial(1, True, True, 0.1))

    def test_censored(self):
        trial = simulate_until_exit(
            quadratic_landscape(1.), [0.], ValleyRegion.box([0.], 1.),
            SgldConfig(0.1, 0.), max_iters=100)
        self.assertEqual(trial.iterations, 100)
        self.assertFalse(trial.escaped)
        self.assertTrue(trial.valid)
        self.assertAlmostEqual(trial.dynamical_time, 10.)

    def test_diverged(self):
        trial = simulate_until_exit(
            quadratic_landscape(1.), [1.], ValleyRegion([-np.inf], [np.inf]),
            SgldConfig(3., 0.), max_iters=100)
        self.assertEqual(trial, EscapeTrial(20, False, False, 60.))

    def test_invalid(self):
        self.assertRaises(ValueError, simulate_until_exit,
                          st_landscape(1), [1.], ValleyRegion.box([0.], 0.5),
                          SgldConfig(0.1, 1.))
        self.assertRaises(ValueError, simulate_until_exit,
                          st_landscape(1), [0.], ValleyRegion.box([0.], 0.5),
                          SgldConfig(0.1, 1.), 0)

    def test_deterministic(self):
        landscape = st_landscape(1)
        region = landscape.default_region()
        config = SgldConfig(0.005, 30.)
        t1 = simulate_until_exit(landscape, landscape.default_start(), region,
                                 config, seed=(2, 7))
        t2 = simulate_until_exit(landscape, landscape.default_start(), region,
                                 config, seed=(2, 7))
        self.assertEqual(t1, t2)
        self.assertTrue(t1.escaped)

    def test_writer(self):
        out_dir = tempfile.mkdtemp()
        path = os.path.join(out_dir, "trajectory.csv")
        landscape = st_landscape(1)
        with TrajectoryWriter(path, landscape, stride=10) as writer:
            trial = simulate_until_exit(
                landscape, landscape.default_start(),
                landscape.default_region(), SgldConfig(0.005, 30.),
                seed=3, writer=writer)

        with open(path, "r") as f:
            rows = list(csv.DictReader(f))
        self.assertListEqual(list(rows[0].keys()),
                             ["iteration", "loss", "theta_0"])
        self.assertEqual(int(rows[0]["iteration"]), 0)
        self.assertEqual(int(rows[-1]["iteration"]), trial.iterations)
        for row in rows:
            self.assertEqual(float(row["loss"]),
                             landscape.loss([float(row["theta_0"])]))

        shutil.rmtree(out_dir)


class TestSimulateTrials(unittest.TestCase):
    """Tests for the simulate_trials method."""

    def test_matches_single_trials(self):
        landscape = st_landscape(1)
        start = landscape.default_start()
        region = landscape.default_region()
        config = SgldConfig(0.005, 30.)

        batched = simulate_trials(landscape, start, region, config, 100000,
                                  [make_rng(9, i) for i in range(10)])
        single = [simulate_until_exit(landscape, start, region, config,
                                      100000, (9, i)) for i in range(10)]
        self.assertListEqual(batched, single)

        # A trial does not depend on the trials it runs with.
        alone = simulate_trials(landscape, start, region, config, 100000,
                                [make_rng(9, 4)])
        self.assertEqual(alone[0], batched[4])

    def test_exit_time_decreases_with_noise(self):
        landscape = double_well_landscape(1.)
        means = []
        for d in (0.25, 0.5, 1.):
            trials = simulate_trials(
                landscape, landscape.default_start(),
                landscape.default_region(), SgldConfig(0.01, d), 10000000,
                [make_rng(1, i) for i in range(40)])
            self.assertTrue(all(t.escaped for t in trials))
            means.append(np.mean([t.dynamical_time for t in trials]))
        self.assertGreater(means[0], means[1])
        self.assertGreater(means[1], means[2])

    def test_minibatch_matches_single_trials(self):
        dataset = DatasetSpec(sample_count=100, input_dim=1, seed=0)
        landscape = quadratic_landscape(1., dataset=dataset)
        start = landscape.default_start()
        region = landscape.default_region()
        config = SgdConfig(0.5, 1)
        trials = simulate_trials(landscape, start, region, config, 10000,
                                 [make_rng(0, i) for i in range(3)])
        for i, trial in enumerate(trials):
            self.assertEqual(trial, simulate_until_exit(
                landscape, start, region, config, 10000, (0, i)))

        dataset = DatasetSpec(sample_count=200, input_dim=2, seed=3)
        landscape = shifted_st_landscape(2, dataset)
        start = landscape.default_start()
        region = landscape.default_region()
        for config in (SgdConfig(0.02, 2), SgldConfig(0.005, 20., 4)):
            batched = simulate_trials(landscape, start, region, config,
                                      200000, [make_rng(6, i)
                                               for i in range(8)])
            self.assertTrue(all(t.escaped for t in batched))
            single = [simulate_until_exit(landscape, start, region, config,
                                          200000, (6, i)) for i in range(8)]
            self.assertListEqual(batched, single)

            # A trial does not depend on the trials it runs with.
            alone = simulate_trials(landscape, start, region, config, 200000,
                                    [make_rng(6, 5)])
            self.assertEqual(alone[0], batched[5])

    def test_minibatch_without_dataset(self):
        landscape = st_landscape(1)
        self.assertRaises(ValueError, simulate_trials, landscape,
                          landscape.default_start(),
                          landscape.default_region(), SgdConfig(0.01, 1),
                          100, [make_rng(0)])
        self.assertListEqual(simulate_trials(
            landscape, landscape.default_start(), landscape.default_region(),
            SgldConfig(0.01, 1.), 100, []), [])


if __name__ == '__main__':
    unittest.main()
