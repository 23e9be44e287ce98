"""Contains tests for the configuration, output and plotting utilities."""
import io
import os
import csv
import json
import shutil
import tempfile
import contextlib
import unittest
import numpy as np

from ddtlab.dynamics import SgdConfig
from ddtlab.dynamics import SgldConfig
from ddtlab.escape_mc import FitResult
from ddtlab.landscapes import ScaledLandscape
from ddtlab.noise_lab import norm_histogram
from ddtlab.utils.exceptions import ConfigError
from ddtlab.utils.misc import ensure_dir
from ddtlab.utils.misc import write_csv
from ddtlab.utils.plot import padded_range
from ddtlab.utils.plot import render_fit_plot
from ddtlab.utils.plot import render_histogram_plot
from ddtlab.utils.plot import render_occupancy_plot
from ddtlab.utils.rng import make_rng
from ddtlab.utils.rng import as_generator
from ddtlab.utils.rng import value_key
from ddtlab.utils.train import parse_options
from ddtlab.utils.train import line_of
from ddtlab.utils.train import load_config
from ddtlab.utils.train import resolve_config
from ddtlab.utils.train import landscape_dim
from ddtlab.utils.train import build_landscape
from ddtlab.utils.train import build_stepper
from ddtlab.utils.train import build_region
from ddtlab.utils.train import build_protocol
from ddtlab.utils.train import build_sweep
from ddtlab.utils.train import DYNAMICS_PARAMS
from ddtlab.utils.train import THEORY_PARAMS

# a configuration with an error on a known line
NEGATIVE_ETA = """{
    "experiment": "theory-table",
    "dynamics": {
        "stepper": "sgld",
        "eta": -0.1
    }
}
"""

# a batch-size sweep beyond the size of its data set
LARGE_BATCH_GRID = """{
    "experiment": "escape-sweep",
    "landscape": {
        "kind": "logistic",
        "dataset": {"samples": 4}
    },
    "sweep": {
        "variable": "batch_size",
        "grid": [1, 2, 8]
    }
}
"""


class TestParseOptions(unittest.TestCase):
    """Tests for the parse_options method."""

    def test_parse_options(self):
        # Test the default case.
        args = parse_options("", "", args=["theory-table"])
        expected_args = {
            'experiment': 'theory-table',
            'config': None,
            'out': None,
            'seed': None,
            'workers': 1,
            'dry_run': False,
            'verbose': 1,
        }
        self.assertDictEqual(vars(args), expected_args)

        # Test the case when optional parameters are passed.
        args = parse_options("", "", args=[
            "escape-sweep",
            "--config", "sweep.json",
            "--out", "out",
            "--seed", "7",
            "--workers", "4",
            "--dry-run",
            "--verbose", "2",
        ])
        expected_args = {
            'experiment': 'escape-sweep',
            'config': 'sweep.json',
            'out': 'out',
            'seed': 7,
            'workers': 4,
            'dry_run': True,
            'verbose': 2,
        }
        self.assertDictEqual(vars(args), expected_args)

    def test_unknown_experiment(self):
        with contextlib.redirect_stderr(io.StringIO()):
            self.assertRaises(SystemExit, parse_options, "", "", ["mystery"])


class TestConfig(unittest.TestCase):
    """Tests for reading and resolving configuration files."""

    def setUp(self):
        self.tmp_dir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmp_dir)

    def test_defaults(self):
        config = resolve_config({}, "theory-table")
        self.assertEqual(config["experiment"], "theory-table")
        self.assertEqual(config["seed"], 0)
        self.assertEqual(config["landscape"]["kind"], "styblinski-tang")
        self.assertIsNone(config["landscape"]["dataset"])
        self.assertEqual(config["dynamics"]["eta"], DYNAMICS_PARAMS["eta"])
        # sgd defaults to single-sample minibatches
        self.assertEqual(config["dynamics"]["batch_size"], 1)
        self.assertListEqual(config["theory"]["diffusion_grid"],
                             THEORY_PARAMS["diffusion_grid"])
        self.assertNotIn("__name__", config["landscape"])

        # The defaults themselves are not modified.
        self.assertIsNone(DYNAMICS_PARAMS["batch_size"])

    def test_seed(self):
        config = resolve_config({"seed": 3}, "theory-table")
        self.assertEqual(config["seed"], 3)
        config = resolve_config({"seed": 3}, "theory-table", seed=11)
        self.assertEqual(config["seed"], 11)
        self.assertRaises(ConfigError, resolve_config, {"seed": -1},
                          "theory-table")
        self.assertRaises(ConfigError, resolve_config, {"seed": 1.5},
                          "theory-table")

    def test_unknown_key(self):
        text = '{\n    "experiment": "theory-table",\n    "dynamics": {\n' \
               '        "momentum": 0.9\n    }\n}\n'
        with self.assertRaises(ConfigError) as cm:
            resolve_config(json.loads(text), text=text)
        self.assertEqual(cm.exception.field, "dynamics.momentum")
        self.assertEqual(cm.exception.line, 4)

        self.assertRaises(ConfigError, resolve_config,
                          {"experiment": "theory-table", "extra": 1})

    def test_negative_eta(self):
        with self.assertRaises(ConfigError) as cm:
            resolve_config(json.loads(NEGATIVE_ETA), text=NEGATIVE_ETA)
        self.assertEqual(cm.exception.field, "dynamics.eta")
        self.assertEqual(cm.exception.line, 5)
        self.assertTrue(str(cm.exception).startswith("line 5: "))

    def test_experiment_mismatch(self):
        self.assertRaises(ConfigError, resolve_config,
                          {"experiment": "occupancy"}, "theory-table")
        self.assertRaises(ConfigError, resolve_config, {})

    def test_logistic_dataset(self):
        config = resolve_config(
            {"landscape": {"kind": "logistic"}}, "cov-fit")
        dataset = config["landscape"]["dataset"]
        self.assertEqual(dataset["input_dim"], 10)
        self.assertEqual(dataset["samples"], 5000)
        self.assertEqual(landscape_dim(config["landscape"]), 10)

        config = resolve_config(
            {"landscape": {"kind": "mlp", "width": 4, "depth": 3,
                           "dataset": {"input_dim": 3}}}, "noise-hist")
        self.assertEqual(landscape_dim(config["landscape"]), 41)

    def test_preconditions(self):
        # noise experiments need a data set
        self.assertRaises(ConfigError, resolve_config, {}, "noise-hist")
        # minibatches larger than the data set
        self.assertRaises(ConfigError, resolve_config, {
            "landscape": {"kind": "logistic", "dataset": {"samples": 4}},
            "dynamics": {"batch_size": 8}}, "escape-sweep")
        # sharpness sweeps on a rescaled landscape
        self.assertRaises(ConfigError, resolve_config, {
            "landscape": {"sharpness_k": 2.0},
            "dynamics": {"stepper": "sgld", "diffusion": 1.0}},
            "escape-sweep")
        # unsupported sweep variables
        self.assertRaises(ConfigError, resolve_config, {
            "dynamics": {"stepper": "sgld", "diffusion": 1.0},
            "sweep": {"variable": "batch_size", "grid": [1, 2]}},
            "escape-sweep")
        # non-monotone grids
        self.assertRaises(ConfigError, resolve_config, {
            "dynamics": {"stepper": "sgld", "diffusion": 1.0},
            "sweep": {"variable": "diffusion_D", "grid": [1, 3, 2]}},
            "escape-sweep")
        # too few trials per point
        self.assertRaises(ConfigError, resolve_config, {
            "sweep": {"trials_per_point": 5}}, "theory-table")
        # tilted double wells with a single valley
        self.assertRaises(ConfigError, resolve_config, {
            "landscape": {"kind": "double-well", "tilt": 2.0}},
            "theory-table")
        # mismatched start vectors
        self.assertRaises(ConfigError, resolve_config, {
            "landscape": {"dim": 2}, "protocol": {"start": [0.0]}},
            "theory-table")
        # s outside (0, 1)
        self.assertRaises(ConfigError, resolve_config, {
            "theory": {"s": 1.0}}, "theory-table")

    def test_batch_sweep_grid(self):
        with self.assertRaises(ConfigError) as cm:
            resolve_config(json.loads(LARGE_BATCH_GRID),
                           text=LARGE_BATCH_GRID)
        self.assertEqual(cm.exception.field, "sweep.grid")
        self.assertEqual(cm.exception.line, 9)
        self.assertIn("batch size 8 exceeds the 4 samples", str(cm.exception))

        config = resolve_config(
            json.loads(LARGE_BATCH_GRID.replace("8]", "4]")))
        self.assertListEqual(config["sweep"]["grid"], [1, 2, 4])

        # a batch-size sweep needs a data set
        self.assertRaises(ConfigError, resolve_config, {
            "sweep": {"variable": "batch_size", "grid": [1, 2]}},
            "escape-sweep")

    def test_resolved_draws(self):
        config = resolve_config({"landscape": {"kind": "logistic"}},
                                "noise-hist")
        self.assertEqual(config["noise"]["draws"], 1000)
        config = resolve_config({"landscape": {"kind": "logistic"},
                                 "noise": {"draws": 20}}, "noise-hist")
        self.assertEqual(config["noise"]["draws"], 20)

    def test_line_of(self):
        self.assertEqual(line_of(NEGATIVE_ETA, "dynamics.eta"), 5)
        self.assertEqual(line_of(NEGATIVE_ETA, "experiment"), 2)
        self.assertIsNone(line_of(NEGATIVE_ETA, "sweep.grid"))
        self.assertIsNone(line_of(None, "experiment"))

    def test_load_config(self):
        path = os.path.join(self.tmp_dir, "config.json")
        with open(path, "w") as f:
            f.write(NEGATIVE_ETA)
        raw, text = load_config(path)
        self.assertEqual(raw["dynamics"]["eta"], -0.1)
        self.assertEqual(text, NEGATIVE_ETA)

        with open(path, "w") as f:
            f.write('{\n    "seed": 1,\n    "seed" 2\n}\n')
        with self.assertRaises(ConfigError) as cm:
            load_config(path)
        self.assertEqual(cm.exception.line, 3)

        with open(path, "w") as f:
            f.write('[1, 2]')
        self.assertRaises(ConfigError, load_config, path)

        self.assertRaises(ConfigError, load_config,
                          os.path.join(self.tmp_dir, "missing.json"))

    def test_shipped_configs(self):
        config_dir = os.path.join(os.path.dirname(os.path.dirname(
            os.path.dirname(os.path.abspath(__file__)))), "experiments",
            "configs")
        names = sorted(n for n in os.listdir(config_dir)
                       if n.endswith(".json"))
        self.assertIn("sgd_st_batch_sweep.json", names)
        for name in names:
            raw, text = load_config(os.path.join(config_dir, name))
            config = resolve_config(raw, text=text)
            self.assertEqual(config["experiment"], raw["experiment"])


class TestBuilders(unittest.TestCase):
    """Tests for the methods assembling an experiment from its config."""

    def test_build_landscape(self):
        config = resolve_config({"landscape": {"dim": 3}}, "theory-table")
        landscape = build_landscape(config["landscape"])
        self.assertEqual(landscape.dim, 3)
        self.assertIsNone(landscape.dataset)

        config = resolve_config(
            {"landscape": {"sharpness_k": 2.0}}, "theory-table")
        self.assertIsInstance(build_landscape(config["landscape"]),
                              ScaledLandscape)
        self.assertNotIsInstance(
            build_landscape(config["landscape"], scaled=False),
            ScaledLandscape)

        config = resolve_config({"landscape": {
            "kind": "logistic", "dataset": {"samples": 50, "input_dim": 4}}},
            "cov-fit")
        landscape = build_landscape(config["landscape"])
        self.assertEqual(landscape.dim, 4)
        self.assertEqual(landscape.sample_count, 50)

    def test_build_stepper(self):
        config = resolve_config({}, "theory-table")
        stepper = build_stepper(config["dynamics"])
        self.assertIsInstance(stepper, SgdConfig)
        self.assertEqual(stepper.batch_size, 1)

        config = resolve_config({"dynamics": {
            "stepper": "sgld", "eta": 0.002, "diffusion": 8}}, "theory-table")
        stepper = build_stepper(config["dynamics"])
        self.assertIsInstance(stepper, SgldConfig)
        self.assertIsNone(stepper.batch_size)
        self.assertEqual(stepper.diffusion, 8.)

    def test_build_region(self):
        region = build_region({"center": [0., 1.], "radius": 0.5})
        np.testing.assert_array_equal(region.lower, [-0.5, 0.5])
        region = build_region({"lower": [None, 0.], "upper": [1., None]})
        np.testing.assert_array_equal(region.lower, [-np.inf, 0.])
        np.testing.assert_array_equal(region.upper, [1., np.inf])

    def test_build_sweep(self):
        config = resolve_config({
            "dynamics": {"stepper": "sgld", "eta": 0.002, "diffusion": 8},
            "protocol": {"max_iters": 1000},
            "sweep": {"variable": "diffusion_D", "grid": [8, 10, 12],
                      "trials_per_point": 20},
        }, "escape-sweep")
        landscape = build_landscape(config["landscape"])
        protocol = build_protocol(landscape, config)
        np.testing.assert_almost_equal(protocol.start,
                                       landscape.default_start())
        self.assertEqual(protocol.max_iters, 1000)

        spec = build_sweep(landscape, config)
        self.assertEqual(spec.variable, "diffusion_D")
        self.assertListEqual(spec.grid, [8., 10., 12.])
        self.assertEqual(spec.trials_per_point, 20)


class TestMisc(unittest.TestCase):
    """Tests for the output helpers, exceptions and random streams."""

    def setUp(self):
        self.tmp_dir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmp_dir)

    def test_write_csv(self):
        path = os.path.join(self.tmp_dir, "rows.csv")
        write_csv(path, [{"a": 0.1, "b": 2}, {"a": 1. / 3.}], ["a", "b"])
        with open(path, "r") as f:
            rows = list(csv.DictReader(f))
        self.assertEqual(rows[0], {"a": "0.1", "b": "2"})
        self.assertEqual(rows[1], {"a": repr(1. / 3.), "b": ""})

    def test_ensure_dir(self):
        path = os.path.join(self.tmp_dir, "a", "b")
        self.assertEqual(ensure_dir(path), path)
        self.assertTrue(os.path.isdir(path))
        # Calling it again is a no-op.
        ensure_dir(path)

    def test_config_error(self):
        e = ConfigError("dynamics.eta: must be > 0", "dynamics.eta", 3)
        self.assertEqual(str(e), "line 3: dynamics.eta: must be > 0")
        self.assertIsInstance(e, ValueError)
        self.assertEqual(str(ConfigError("bad")), "bad")

    def test_rng(self):
        np.testing.assert_array_equal(make_rng(1, 2, 3).random(5),
                                      make_rng(1, 2, 3).random(5))
        self.assertFalse(np.array_equal(make_rng(1, 2, 3).random(5),
                                        make_rng(1, 2, 4).random(5)))
        np.testing.assert_array_equal(as_generator((1, 2)).random(3),
                                      make_rng(1, 2).random(3))
        np.testing.assert_array_equal(as_generator(5).random(3),
                                      make_rng(5).random(3))
        rng = make_rng(0)
        self.assertIs(as_generator(rng), rng)

    def test_value_key(self):
        self.assertEqual(value_key(2.), value_key(2))
        self.assertNotEqual(value_key(2.), value_key(2. + 1e-15))


class TestPlot(unittest.TestCase):
    """Tests for the SVG figures."""

    def setUp(self):
        self.tmp_dir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmp_dir)

    def _read(self, name):
        with open(os.path.join(self.tmp_dir, name), "r") as f:
            return f.read()

    def test_padded_range(self):
        lo, hi = padded_range([1., 3.])
        self.assertAlmostEqual(lo, 0.8)
        self.assertAlmostEqual(hi, 3.2)
        np.testing.assert_almost_equal(padded_range([2., 2.]), [1.8, 2.2])
        np.testing.assert_almost_equal(padded_range([0., 0.]), [-0.1, 0.1])
        self.assertTupleEqual(padded_range([np.nan]), (-1., 1.))

    def test_fit_plot(self):
        x = [0.1, 0.2, 0.3]
        fit = FitResult(2., 1., 1., "reciprocal", "neg_log")
        path = os.path.join(self.tmp_dir, "fit.svg")
        render_fit_plot(x, [1.2, 1.4, 1.6], fit, path, y_low=[1.1, np.nan, 1.5],
                        y_high=[1.3, np.nan, 1.7])
        svg = self._read("fit.svg")
        self.assertIn("<svg", svg)
        self.assertIn("Pearson r = 1.0000", svg)

        # Two renders are identical.
        render_fit_plot(x, [1.2, 1.4, 1.6], fit,
                        os.path.join(self.tmp_dir, "fit2.svg"),
                        y_low=[1.1, np.nan, 1.5], y_high=[1.3, np.nan, 1.7])
        self.assertEqual(svg, self._read("fit2.svg"))

    def test_fit_plot_without_fit(self):
        render_fit_plot([1.], [2.], None,
                        os.path.join(self.tmp_dir, "nofit.svg"),
                        flagged_count=4)
        self.assertIn("warning: no fit (4 grid points flagged)",
                      self._read("nofit.svg"))

        fit = FitResult(2., 1., 1., "identity", "identity")
        self.assertRaises(ValueError, render_fit_plot, [1.], [2.], fit,
                          os.path.join(self.tmp_dir, "bad.svg"))
        self.assertRaises(ValueError, render_fit_plot, [1., 2.], [2.], None,
                          os.path.join(self.tmp_dir, "bad.svg"))

    def test_histogram_plot(self):
        vectors = make_rng(0).standard_normal((1000, 5))
        render_histogram_plot(
            [("noise", norm_histogram(vectors, 20)),
             ("baseline", norm_histogram(2. * vectors, 20))],
            os.path.join(self.tmp_dir, "hist.svg"), title="histograms")
        svg = self._read("hist.svg")
        self.assertIn("baseline", svg)
        self.assertIn("histograms", svg)

    def test_occupancy_plot(self):
        render_occupancy_plot(
            [("measured", [0.7, 0.3]), ("theory", [0.75, 0.25]),
             ("predicted", None)],
            os.path.join(self.tmp_dir, "occ.svg"))
        svg = self._read("occ.svg")
        self.assertIn("measured", svg)
        self.assertNotIn("predicted", svg)


if __name__ == '__main__':
    unittest.main()
