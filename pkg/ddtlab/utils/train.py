"""Utility methods when configuring and assembling experiments."""
import copy
import json
import argparse
import numbers
import numpy as np

from ddtlab.dynamics import SAMPLING_SCHEMES
from ddtlab.dynamics import SgdConfig
from ddtlab.dynamics import SgldConfig
from ddtlab.dynamics import ValleyRegion
from ddtlab.dynamics.simulate import DEFAULT_MAX_ITERS
from ddtlab.escape_mc import EscapeProtocol
from ddtlab.escape_mc import SweepSpec
from ddtlab.escape_mc import SWEEP_VARIABLES
from ddtlab.escape_mc import SWEEP_TRANSFORMS
from ddtlab.landscapes import DatasetSpec
from ddtlab.landscapes import rescale
from ddtlab.landscapes import st_landscape
from ddtlab.landscapes import shifted_st_landscape
from ddtlab.landscapes import quadratic_landscape
from ddtlab.landscapes import double_well_landscape
from ddtlab.landscapes import logistic_landscape
from ddtlab.landscapes import mlp_landscape
from ddtlab.landscapes.models import ACTIVATIONS
from ddtlab.noise_lab import default_draw_count
from ddtlab.utils.exceptions import ConfigError

# supported experiments (sub-commands of the runner)
EXPERIMENTS = ["noise-hist", "cov-fit", "escape-sweep", "theory-table",
               "occupancy"]

# supported loss surfaces
LANDSCAPE_KINDS = ["styblinski-tang", "quadratic", "double-well", "logistic",
                   "mlp"]

# supported dynamics
STEPPERS = ["sgd", "sgld"]

# the only setting that may come from the environment
OUTPUT_DIR_ENV = "DDTLAB_OUTPUT_DIR"

# largest accepted experiment seed
MAX_SEED = 2 ** 64 - 1


# =========================================================================== #
#                             Landscape parameters                            #
# =========================================================================== #

LANDSCAPE_PARAMS = dict(
    # the loss surface. One of LANDSCAPE_KINDS.
    kind="styblinski-tang",
    # number of parameters of the styblinski-tang function and of a quadratic
    # well with a scalar curvature
    dim=1,
    # the synthetic data set the loss is averaged over. None keeps the
    # deterministic function. logistic and mlp landscapes always use one.
    dataset=None,
    # curvature of the quadratic well (a scalar or a per-coordinate list)
    curvature=1.0,
    # barrier height of the double well
    height=1.0,
    # linear tilt of the double well
    tilt=0.0,
    # number of units of each hidden layer of the mlp
    width=10,
    # number of linear layers of the mlp
    depth=3,
    # hidden-layer activation of the mlp. One of ACTIVATIONS.
    activation="relu",
    # the sharpness factor k the landscape is rescaled by
    sharpness_k=1.0,
)

DATASET_PARAMS = dict(
    # number of samples
    samples=5000,
    # dimension of every sample. None uses the landscape dimension (or 10 for
    # logistic and mlp landscapes).
    input_dim=None,
    # seed of the data generator
    seed=0,
    # the label generator
    label_rule="random-binary",
)


# =========================================================================== #
#                              Dynamics parameters                            #
# =========================================================================== #

DYNAMICS_PARAMS = dict(
    # the update rule. One of STEPPERS.
    stepper="sgd",
    # the learning rate
    eta=0.01,
    # the minibatch size. None means 1 for sgd and the full gradient for sgld.
    batch_size=None,
    # the minibatch sampling scheme. One of SAMPLING_SCHEMES.
    sampling="with-replacement",
    # the isotropic diffusion coefficient D of the injected noise (sgld)
    diffusion=0.0,
)

PROTOCOL_PARAMS = dict(
    # the iteration cap of every escape trial
    max_iters=DEFAULT_MAX_ITERS,
    # the initial parameters. None uses the landscape default.
    start=None,
    # the valley, either {"center", "radius"} or {"lower", "upper"} (null
    # bounds are unbounded). None uses the landscape default.
    region=None,
)


# =========================================================================== #
#                             Experiment parameters                           #
# =========================================================================== #

SWEEP_PARAMS = dict(
    # the swept quantity. One of SWEEP_VARIABLES.
    variable="sharpness_k",
    # the grid values, strictly monotone and positive
    grid=[0.5, 1.0, 2.0, 4.0, 8.0],
    # number of escape trials per grid value
    trials_per_point=100,
)

NOISE_PARAMS = dict(
    # the measurement point. None uses the pretrained landscape default start.
    theta=None,
    # whether to run full-batch gradient descent to a critical point first
    pretrain=True,
    # gradient-norm target of the pretraining
    pretrain_tol=1e-4,
    # learning rate of the pretraining
    pretrain_eta=1.0,
    # iteration cap of the pretraining
    pretrain_max_iters=100000,
    # the minibatch size of the noise draws
    batch_size=32,
    # number of noise draws. None uses 10·dim², capped at 1e5.
    draws=None,
    # number of histogram bins
    bin_count=50,
    # stability index of the heavy-tailed baseline
    alpha=1.2,
    # scale of the heavy-tailed baseline. None matches the per-coordinate
    # noise variance as if alpha were 2.
    levy_scale=None,
    # the batch sizes of the 1/B trace fit
    batch_sizes=[1, 2, 4, 8],
    # range of Hessian elements kept by the covariance fit
    filter_range=[1e-4, 0.5],
)

THEORY_PARAMS = dict(
    # diffusion coefficients tabulated for sgld
    diffusion_grid=[5.0, 10.0, 20.0],
    # learning rates tabulated for sgd
    eta_grid=[0.01, 0.02, 0.05],
    # batch sizes tabulated for sgd
    batch_grid=[1, 2, 4, 8],
    # the path-position parameter s of the sgd formula
    s=0.5,
)

OCCUPANCY_PARAMS = dict(
    # length of the trajectory
    total_iters=2000000,
    # half-width of the default double-well valleys as a fraction of the
    # distance from each minimum to the saddle
    fraction=0.5,
    # the two valleys, as region objects. None uses the double-well default.
    regions=None,
    # the initial parameters. None uses the center of the first valley.
    start=None,
)

SECTIONS = dict(
    landscape=LANDSCAPE_PARAMS,
    dynamics=DYNAMICS_PARAMS,
    protocol=PROTOCOL_PARAMS,
    sweep=SWEEP_PARAMS,
    noise=NOISE_PARAMS,
    theory=THEORY_PARAMS,
    occupancy=OCCUPANCY_PARAMS,
)


# =========================================================================== #
#                              Command-line options                           #
# =========================================================================== #

def parse_options(description, example_usage, args):
    """Parse experiment options user can specify in command line.

    Parameters
    ----------
    description : str
        the description of the script using this parser
    example_usage : str
        an example of the runner script being used
    args : list of str
        command-line arguments

    Returns
    -------
    argparse.Namespace
        the output parser object
    """
    parser = argparse.ArgumentParser(
        description=description, epilog=example_usage)

    # required input parameters
    parser.add_argument(
        'experiment', type=str, choices=EXPERIMENTS,
        help='The experiment to run. Must be one of {}.'.format(
            ", ".join(EXPERIMENTS)))

    # optional input parameters
    parser.add_argument(
        '--config', type=str, default=None,
        help='path to the JSON configuration file. Missing sections and keys '
             'take their default values.')
    parser.add_argument(
        '--out', type=str, default=None,
        help='the output directory. Defaults to ${} or data/<experiment>.'
             ''.format(OUTPUT_DIR_ENV))
    parser.add_argument(
        '--seed', type=int, default=None,
        help='the experiment seed. Overrides the seed of the configuration '
             'file.')
    parser.add_argument(
        '--workers', type=int, default=1,
        help='number of parallel trial workers. Results do not depend on it.')
    parser.add_argument(
        '--dry-run', action='store_true',
        help='validate and print the resolved configuration without running '
             'the experiment')
    parser.add_argument(
        '--verbose', type=int, default=1,
        help='the verbosity level: 0 errors only, 1 warnings and progress '
             'tables, 2 debug information')

    flags, _ = parser.parse_known_args(args)

    return flags


# =========================================================================== #
#                          Configuration file handling                        #
# =========================================================================== #

def line_of(text, field):
    """Return the line number of a dotted field path within a JSON text.

    Each component of the path is searched for as a quoted key after the
    previous one. None if the text or the field cannot be located.
    """
    if text is None or field is None:
        return None
    pos = 0
    for part in field.split("."):
        idx = text.find('"{}"'.format(part), pos)
        if idx < 0:
            return None
        pos = idx + 1
    return text.count("\n", 0, pos) + 1


def load_config(path):
    """Read a JSON configuration file.

    Returns
    -------
    dict
        the parsed configuration
    str
        the raw text, used to locate fields in diagnostics

    Raises
    ------
    ConfigError
        if the file cannot be read or is not a JSON object
    """
    try:
        with open(path, "r") as f:
            text = f.read()
    except (IOError, OSError) as e:
        raise ConfigError("cannot read {}: {}".format(path, e))
    try:
        raw = json.loads(text)
    except ValueError as e:
        raise ConfigError("invalid JSON: {}".format(e),
                          line=getattr(e, "lineno", None))
    if not isinstance(raw, dict):
        raise ConfigError("the configuration must be a JSON object", line=1)
    return raw, text


def _is_number(v):
    return isinstance(v, numbers.Real) and not isinstance(v, bool)


def _is_int(v):
    return _is_number(v) and float(v).is_integer()


class _Validator(object):
    """Raises line-numbered ConfigErrors for one configuration text."""

    def __init__(self, text):
        self.text = text

    def fail(self, field, message):
        raise ConfigError("{}: {}".format(field, message), field=field,
                          line=line_of(self.text, field))

    def choice(self, section, key, choices):
        if section[key] not in choices:
            self.fail(key_path(section, key), "must be one of {}, got "
                      "{!r}".format(choices, section[key]))

    def number(self, section, key, low=None, strict=True, integer=False,
               optional=False):
        v = section[key]
        field = key_path(section, key)
        if v is None and optional:
            return
        if not (_is_int(v) if integer else _is_number(v)) or \
                not np.isfinite(v):
            self.fail(field, "must be {}, got {!r}".format(
                "an integer" if integer else "a number", v))
        if low is not None and (v <= low if strict else v < low):
            self.fail(field, "must be {} {}, got {!r}".format(
                ">" if strict else "≥", low, v))
        if integer:
            section[key] = int(v)
        else:
            section[key] = float(v)

    def grid(self, section, key, integer=False, min_len=1, monotone=True):
        v = section[key]
        field = key_path(section, key)
        if not isinstance(v, list) or len(v) < min_len:
            self.fail(field, "must be a list of at least {} values".format(
                min_len))
        for x in v:
            if not (_is_int(x) if integer else _is_number(x)) or \
                    not np.isfinite(x) or x <= 0:
                self.fail(field, "must hold positive {}, got {!r}".format(
                    "integers" if integer else "numbers", x))
        diffs = np.diff(v)
        if monotone and not (np.all(diffs > 0) or np.all(diffs < 0)):
            self.fail(field, "must be strictly monotone")
        section[key] = [int(x) if integer else float(x) for x in v]

    def vector(self, section, key, dim):
        v = section[key]
        if v is None:
            return
        field = key_path(section, key)
        if not isinstance(v, list) or len(v) != dim or \
                not all(_is_number(x) for x in v):
            self.fail(field, "must be a list of {} numbers".format(dim))
        section[key] = [float(x) for x in v]

    def region(self, v, field, dim):
        if not isinstance(v, dict):
            self.fail(field, "must be an object")
        keys = set(v)
        if keys == {"center", "radius"}:
            c = v["center"]
            if not isinstance(c, list) or len(c) != dim or \
                    not all(_is_number(x) for x in c):
                self.fail(field + ".center",
                          "must be a list of {} numbers".format(dim))
            if not _is_number(v["radius"]) or not v["radius"] > 0:
                self.fail(field + ".radius", "must be a positive number")
        elif keys == {"lower", "upper"}:
            for side in ("lower", "upper"):
                b = v[side]
                if not isinstance(b, list) or len(b) != dim or \
                        not all(x is None or _is_number(x) for x in b):
                    self.fail(field + "." + side, "must be a list of {} "
                              "numbers or nulls".format(dim))
            for lo, hi in zip(v["lower"], v["upper"]):
                if lo is not None and hi is not None and lo > hi:
                    self.fail(field, "lower bounds must not exceed upper "
                              "bounds")
        else:
            self.fail(field, "must have the keys center/radius or "
                      "lower/upper, got {}".format(sorted(keys)))


def key_path(section, key):
    """Return the dotted path of a key of a resolved section."""
    return "{}.{}".format(section["__name__"], key)


def landscape_dim(params):
    """Return the number of parameters a resolved landscape section builds."""
    kind = params["kind"]
    if kind == "double-well":
        return 1
    if kind == "quadratic" and isinstance(params["curvature"], list):
        return len(params["curvature"])
    if kind in ("logistic", "mlp"):
        input_dim = params["dataset"]["input_dim"]
        if kind == "logistic":
            return input_dim
        sizes = [input_dim] + [params["width"]] * (params["depth"] - 1) + [1]
        return sum(sizes[i + 1] * sizes[i] + sizes[i + 1]
                   for i in range(len(sizes) - 1))
    return params["dim"]


def _validate_landscape(p, check):
    check.choice(p, "kind", LANDSCAPE_KINDS)
    check.number(p, "dim", low=1, strict=False, integer=True)
    check.number(p, "height", low=0.)
    check.number(p, "tilt")
    check.number(p, "width", low=1, strict=False, integer=True)
    check.number(p, "depth", low=2, strict=False, integer=True)
    check.choice(p, "activation", ACTIVATIONS)
    check.number(p, "sharpness_k", low=0.)

    curv = p["curvature"]
    if isinstance(curv, list):
        if len(curv) == 0 or not all(_is_number(c) for c in curv):
            check.fail("landscape.curvature", "must be a number or a list of "
                       "numbers")
        p["curvature"] = [float(c) for c in curv]
    else:
        check.number(p, "curvature")

    if p["kind"] == "double-well" and \
            abs(p["tilt"]) >= 8. * p["height"] / (3. * np.sqrt(3.)):
        check.fail("landscape.tilt", "too large for two valleys to exist")

    dataset = p["dataset"]
    if dataset is None and p["kind"] in ("logistic", "mlp"):
        dataset = {}
    if dataset is not None:
        if not isinstance(dataset, dict):
            check.fail("landscape.dataset", "must be an object or null")
        for key in dataset:
            if key not in DATASET_PARAMS:
                check.fail("landscape.dataset." + key, "unknown key")
        if p["kind"] == "double-well":
            check.fail("landscape.dataset", "the double well has no data set")
        merged = copy.deepcopy(DATASET_PARAMS)
        merged.update(dataset)
        merged["__name__"] = "landscape.dataset"
        if merged["input_dim"] is None:
            merged["input_dim"] = 10 if p["kind"] in ("logistic", "mlp") \
                else landscape_dim(p)
        check.number(merged, "samples", low=1, strict=False, integer=True)
        check.number(merged, "input_dim", low=1, strict=False, integer=True)
        check.number(merged, "seed", low=0, strict=False, integer=True)
        check.choice(merged, "label_rule", ["random-binary"])
        if p["kind"] in ("styblinski-tang", "quadratic") and \
                merged["input_dim"] != landscape_dim(p):
            check.fail("landscape.dataset.input_dim",
                       "must equal the landscape dimension {}".format(
                           landscape_dim(p)))
        del merged["__name__"]
        p["dataset"] = merged


def _validate_dynamics(p, check, sample_count, used):
    check.choice(p, "stepper", STEPPERS)
    check.number(p, "eta", low=0.)
    check.choice(p, "sampling", SAMPLING_SCHEMES)
    check.number(p, "diffusion", low=0., strict=False)
    if p["batch_size"] is None and p["stepper"] == "sgd":
        p["batch_size"] = 1
    check.number(p, "batch_size", low=1, strict=False, integer=True,
                 optional=True)
    if p["batch_size"] is not None and used:
        if sample_count is None:
            check.fail("dynamics.batch_size", "minibatches need a landscape "
                       "with a data set")
        if p["batch_size"] > sample_count:
            check.fail("dynamics.batch_size", "must not exceed the {} "
                       "samples of the data set".format(sample_count))


def resolve_config(raw, experiment=None, seed=None, text=None):
    """Merge a raw configuration with the defaults and validate it.

    Parameters
    ----------
    raw : dict
        the parsed configuration file (may be empty)
    experiment : str or None
        the experiment named on the command line. Must agree with the
        "experiment" key of the file if both are present.
    seed : int or None
        the seed given on the command line. Overrides the file.
    text : str or None
        the raw text of the file, used to locate fields in diagnostics

    Returns
    -------
    dict
        the resolved configuration with every default made explicit

    Raises
    ------
    ConfigError
        if a key is unknown or a value violates its precondition
    """
    check = _Validator(text)
    if not isinstance(raw, dict):
        raise ConfigError("the configuration must be a JSON object")

    top_level = ["experiment", "seed"] + sorted(SECTIONS)
    for key in raw:
        if key not in top_level:
            check.fail(key, "unknown key")

    exp = raw.get("experiment", experiment)
    if experiment is not None and exp != experiment:
        check.fail("experiment", "the file configures {!r}, not {!r}".format(
            exp, experiment))
    if exp not in EXPERIMENTS:
        check.fail("experiment", "must be one of {}".format(EXPERIMENTS))

    config = {"experiment": exp, "seed": raw.get("seed", 0)}
    if seed is not None:
        config["seed"] = seed
    if not _is_int(config["seed"]) or not 0 <= config["seed"] <= MAX_SEED:
        check.fail("seed", "must be an integer in [0, 2^64)")
    config["seed"] = int(config["seed"])

    for name in sorted(SECTIONS):
        section = raw.get(name)
        if section is None:
            section = {}
        if not isinstance(section, dict):
            check.fail(name, "must be an object")
        for key in section:
            if key not in SECTIONS[name]:
                check.fail("{}.{}".format(name, key), "unknown key")
        merged = copy.deepcopy(SECTIONS[name])
        merged.update(copy.deepcopy(section))
        merged["__name__"] = name
        config[name] = merged

    land = config["landscape"]
    _validate_landscape(land, check)
    dim = landscape_dim(land)
    sample_count = None if land["dataset"] is None else \
        land["dataset"]["samples"]
    _validate_dynamics(config["dynamics"], check, sample_count,
                       exp in ("escape-sweep", "occupancy"))

    prot = config["protocol"]
    check.number(prot, "max_iters", low=1, strict=False, integer=True)
    check.vector(prot, "start", dim)
    if prot["region"] is not None:
        check.region(prot["region"], "protocol.region", dim)

    sweep = config["sweep"]
    check.choice(sweep, "variable", SWEEP_VARIABLES)
    check.grid(sweep, "grid", integer=sweep["variable"] == "batch_size")
    check.number(sweep, "trials_per_point", low=10, strict=False,
                 integer=True)
    if exp == "escape-sweep" and sweep["variable"] == "sharpness_k" and \
            land["sharpness_k"] != 1:
        check.fail("landscape.sharpness_k", "must be 1 in a sharpness sweep")
    if exp == "escape-sweep" and (config["dynamics"]["stepper"],
                                  sweep["variable"]) not in SWEEP_TRANSFORMS:
        check.fail("sweep.variable", "{} sweeps are not supported for "
                   "{}".format(sweep["variable"],
                               config["dynamics"]["stepper"]))
    if exp == "escape-sweep" and sweep["variable"] == "batch_size":
        if sample_count is None:
            check.fail("sweep.grid", "batch-size sweeps need a landscape "
                       "with a data set")
        for b in sweep["grid"]:
            if b > sample_count:
                check.fail("sweep.grid", "batch size {} exceeds the {} "
                           "samples of the data set".format(b, sample_count))

    noise = config["noise"]
    check.vector(noise, "theta", dim)
    if not isinstance(noise["pretrain"], bool):
        check.fail("noise.pretrain", "must be true or false")
    check.number(noise, "pretrain_tol", low=0.)
    check.number(noise, "pretrain_eta", low=0.)
    check.number(noise, "pretrain_max_iters", low=1, strict=False,
                 integer=True)
    check.number(noise, "batch_size", low=1, strict=False, integer=True)
    check.number(noise, "draws", low=2, strict=False, integer=True,
                 optional=True)
    if noise["draws"] is None:
        noise["draws"] = default_draw_count(dim)
    check.number(noise, "bin_count", low=2, strict=False, integer=True)
    check.number(noise, "alpha", low=0.)
    if noise["alpha"] > 2:
        check.fail("noise.alpha", "must lie in (0, 2]")
    check.number(noise, "levy_scale", low=0., strict=False, optional=True)
    check.grid(noise, "batch_sizes", integer=True, min_len=2)
    fr = noise["filter_range"]
    if not isinstance(fr, list) or len(fr) != 2 or \
            not all(_is_number(x) for x in fr) or not 0 <= fr[0] < fr[1]:
        check.fail("noise.filter_range", "must be [low, high] with "
                   "0 ≤ low < high")
    noise["filter_range"] = [float(x) for x in fr]
    if exp in ("noise-hist", "cov-fit"):
        if sample_count is None:
            check.fail("landscape.dataset", "noise experiments need a "
                       "landscape with a data set")
        for b in [noise["batch_size"]] + noise["batch_sizes"]:
            if b > sample_count:
                check.fail("noise.batch_size", "batch sizes must not exceed "
                           "the {} samples".format(sample_count))

    theory = config["theory"]
    check.grid(theory, "diffusion_grid", monotone=False)
    check.grid(theory, "eta_grid", monotone=False)
    check.grid(theory, "batch_grid", integer=True, monotone=False)
    check.number(theory, "s", low=0.)
    if theory["s"] >= 1:
        check.fail("theory.s", "must lie in (0, 1)")

    occ = config["occupancy"]
    check.number(occ, "total_iters", low=1, strict=False, integer=True)
    check.number(occ, "fraction", low=0.)
    if occ["fraction"] >= 1:
        check.fail("occupancy.fraction", "must lie in (0, 1)")
    check.vector(occ, "start", dim)
    if occ["regions"] is not None:
        if not isinstance(occ["regions"], list) or len(occ["regions"]) != 2:
            check.fail("occupancy.regions", "must be a list of two regions")
        for r in occ["regions"]:
            check.region(r, "occupancy.regions", dim)
    elif exp == "occupancy" and land["kind"] != "double-well":
        check.fail("occupancy.regions", "required unless the landscape is a "
                   "double well")

    for name in SECTIONS:
        del config[name]["__name__"]

    return config


# =========================================================================== #
#                          Assembling the experiment                          #
# =========================================================================== #

def build_landscape(params, scaled=True):
    """Build the landscape of a resolved landscape section.

    The landscape is rescaled by sharpness_k unless it equals one or `scaled`
    is False.
    """
    kind = params["kind"]
    dataset = None if params["dataset"] is None else \
        DatasetSpec.from_dict(params["dataset"])

    if kind == "styblinski-tang":
        landscape = st_landscape(params["dim"]) if dataset is None else \
            shifted_st_landscape(params["dim"], dataset)
    elif kind == "quadratic":
        landscape = quadratic_landscape(
            params["curvature"], dataset=dataset, dim=params["dim"])
    elif kind == "double-well":
        landscape = double_well_landscape(params["height"], params["tilt"])
    elif kind == "logistic":
        landscape = logistic_landscape(dataset)
    elif kind == "mlp":
        landscape = mlp_landscape(
            dataset, width=params["width"], depth=params["depth"],
            activation=params["activation"])
    else:
        raise ValueError("Unknown landscape: {}".format(kind))

    if scaled and params["sharpness_k"] != 1:
        landscape = rescale(landscape, params["sharpness_k"])
    return landscape


def build_stepper(params):
    """Build the SgdConfig or SgldConfig of a resolved dynamics section."""
    if params["stepper"] == "sgd":
        return SgdConfig(params["eta"], params["batch_size"],
                         params["sampling"])
    elif params["stepper"] == "sgld":
        return SgldConfig(params["eta"], params["diffusion"],
                          params["batch_size"], params["sampling"])
    raise ValueError("Unknown stepper: {}".format(params["stepper"]))


def build_region(params):
    """Build a ValleyRegion from its configuration object."""
    if "center" in params:
        return ValleyRegion.box(params["center"], params["radius"])
    return ValleyRegion(
        [-np.inf if v is None else v for v in params["lower"]],
        [np.inf if v is None else v for v in params["upper"]])


def build_protocol(landscape, config):
    """Build the EscapeProtocol of a resolved configuration."""
    prot = config["protocol"]
    start = landscape.default_start() if prot["start"] is None else \
        np.asarray(prot["start"], dtype=np.float64)
    region = landscape.default_region() if prot["region"] is None else \
        build_region(prot["region"])
    return EscapeProtocol(
        start, region, build_stepper(config["dynamics"]), prot["max_iters"])


def build_sweep(landscape, config):
    """Build the SweepSpec of a resolved configuration."""
    sweep = config["sweep"]
    return SweepSpec(
        variable=sweep["variable"],
        grid=sweep["grid"],
        landscape=landscape,
        protocol=build_protocol(landscape, config),
        trials_per_point=sweep["trials_per_point"],
    )
