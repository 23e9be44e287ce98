"""Script containing the Landscape base object and its generic helpers."""
import json
import numpy as np

from ddtlab.utils.exceptions import NumericalFailureError

# supported label generators for synthetic data sets
LABEL_RULES = ["random-binary"]


class DatasetSpec(object):
    """Seeded recipe for a synthetic Gaussian data set.

    Samples are drawn as x ~ N(0, I) and labels as a balanced random binary
    vector (exactly half ones when the sample count is even). Nothing is
    written to disk; the arrays are regenerated from the seed.

    Attributes
    ----------
    sample_count : int
        number of samples
    input_dim : int
        number of elements in each sample
    seed : int
        seed of the data generator
    label_rule : str
        the label generator. Must be one of LABEL_RULES.
    """

    def __init__(self, sample_count=5000, input_dim=10, seed=0,
                 label_rule="random-binary"):
        """Instantiate the data set recipe.

        Raises
        ------
        ValueError
            if the sample count or input dimension is not positive, or if the
            label rule is unknown
        """
        if int(sample_count) < 1:
            raise ValueError("sample_count must be a positive integer")
        if int(input_dim) < 1:
            raise ValueError("input_dim must be a positive integer")
        if label_rule not in LABEL_RULES:
            raise ValueError("Unknown label rule: {}".format(label_rule))

        self.sample_count = int(sample_count)
        self.input_dim = int(input_dim)
        self.seed = int(seed)
        self.label_rule = label_rule
        self._data = None

    def generate(self):
        """Return the samples and labels of the data set.

        Returns
        -------
        array_like
            (sample_count, input_dim) array of inputs
        array_like
            (sample_count,) array of {0, 1} labels
        """
        if self._data is None:
            rng = np.random.Generator(np.random.Philox(self.seed))
            x = rng.standard_normal((self.sample_count, self.input_dim))
            y = np.zeros(self.sample_count)
            y[:self.sample_count // 2] = 1.
            y = rng.permutation(y)
            x.setflags(write=False)
            y.setflags(write=False)
            self._data = (x, y)
        return self._data

    def to_dict(self):
        """Return the JSON-serializable form of the recipe."""
        return {
            "samples": self.sample_count,
            "input_dim": self.input_dim,
            "seed": self.seed,
            "label_rule": self.label_rule,
        }

    @classmethod
    def from_dict(cls, d):
        """Build a recipe from its JSON form."""
        return cls(
            sample_count=d["samples"],
            input_dim=d["input_dim"],
            seed=d["seed"],
            label_rule=d.get("label_rule", "random-binary"),
        )

    def to_json(self):
        """Return the recipe as a JSON string."""
        return json.dumps(self.to_dict(), sort_keys=True)

    def __getstate__(self):
        """Drop the cached arrays when pickling (they are regenerated)."""
        state = self.__dict__.copy()
        state["_data"] = None
        return state


class Landscape(object):
    """Base class for differentiable loss surfaces.

    Sub-classes with a data set implement `_batch_loss` and `_batch_grad`,
    which average the per-sample terms over a sorted index array. The full
    loss and gradient are these averages over every sample, so a minibatch
    that covers the whole data set reproduces `grad` bit for bit. Sub-classes
    without a data set implement `_loss` and `_grad` directly.

    Landscapes are immutable after construction.

    Attributes
    ----------
    dim : int
        number of parameters
    dataset : DatasetSpec or None
        the data set the loss is averaged over, if any
    """

    def __init__(self, dim, dataset=None):
        """Instantiate the landscape.

        Parameters
        ----------
        dim : int
            number of parameters
        dataset : DatasetSpec or None
            the data set the loss is averaged over, if any

        Raises
        ------
        ValueError
            if dim is not a positive integer
        """
        if int(dim) < 1:
            raise ValueError("dim must be a positive integer")
        self.dim = int(dim)
        self.dataset = dataset
        self._all_indices = None if dataset is None else \
            np.arange(dataset.sample_count)

    @property
    def sample_count(self):
        """Return the number of samples, or None without a data set."""
        return None if self.dataset is None else self.dataset.sample_count

    def _check_theta(self, theta):
        theta = np.asarray(theta, dtype=np.float64)
        if theta.shape != (self.dim,):
            raise ValueError("expected a parameter vector of shape ({},), got "
                             "{}".format(self.dim, theta.shape))
        return theta

    def _check_indices(self, indices):
        indices = np.asarray(indices, dtype=np.int64)
        if indices.size == 0:
            raise ValueError("the index set of a minibatch cannot be empty")
        return indices

    def loss(self, theta):
        """Return the full-data loss at theta."""
        theta = self._check_theta(theta)
        if self.dataset is None:
            return float(self._loss(theta))
        return float(self._batch_loss(theta, self._all_indices))

    def grad(self, theta):
        """Return the full-data gradient at theta."""
        theta = self._check_theta(theta)
        if self.dataset is None:
            return self._grad(theta)
        return self._batch_grad(theta, self._all_indices)

    def minibatch_grad(self, theta, indices):
        """Return the gradient of the loss of one minibatch.

        Parameters
        ----------
        theta : array_like
            the parameters
        indices : array_like of int
            indices of the samples in the minibatch. Repeated indices count
            with multiplicity.

        Returns
        -------
        array_like
            the average of the per-sample gradients

        Raises
        ------
        ValueError
            if the index set is empty
        """
        theta = self._check_theta(theta)
        indices = self._check_indices(indices)
        if self.dataset is None:
            return self._grad(theta)
        return self._batch_grad(theta, indices)

    def grad_batch(self, thetas):
        """Return the full-data gradient at every row of `thetas`.

        Parameters
        ----------
        thetas : array_like
            (count, dim) array of parameter vectors

        Returns
        -------
        array_like
            (count, dim) array of gradients
        """
        thetas = np.asarray(thetas, dtype=np.float64)
        if thetas.ndim != 2 or thetas.shape[1] != self.dim:
            raise ValueError("expected an array of shape (count, {}), got "
                             "{}".format(self.dim, thetas.shape))
        if self.dataset is None:
            return self._grad_rows(thetas)
        return np.array([self.grad(t) for t in thetas])

    def minibatch_grad_rows(self, thetas, index_rows):
        """Return one minibatch gradient per row of `thetas`.

        Row i of the result is the gradient at thetas[i] of the minibatch
        index_rows[i]. Rows are computed independently of each other.

        Parameters
        ----------
        thetas : array_like
            (count, dim) array of parameter vectors
        index_rows : array_like of int
            (count, batch_size) array of sample indices

        Returns
        -------
        array_like
            (count, dim) array of gradients

        Raises
        ------
        ValueError
            if the shapes do not agree or the landscape has no data set
        """
        thetas = np.asarray(thetas, dtype=np.float64)
        index_rows = np.asarray(index_rows, dtype=np.int64)
        if thetas.ndim != 2 or thetas.shape[1] != self.dim:
            raise ValueError("expected an array of shape (count, {}), got "
                             "{}".format(self.dim, thetas.shape))
        if index_rows.ndim != 2 or index_rows.shape[0] != thetas.shape[0] \
                or index_rows.shape[1] == 0:
            raise ValueError("expected one nonempty index row per parameter "
                             "vector")
        if self.dataset is None:
            raise ValueError("minibatch gradients of several rows require a "
                             "landscape with a data set")
        return self._batch_grad_rows(thetas, index_rows)

    def per_sample_grad(self, theta, index):
        """Return the gradient of the loss of a single sample."""
        return self.minibatch_grad(theta, [index])

    def hessian(self, theta):
        """Return the Hessian of the full-data loss at theta.

        Defaults to symmetrized central differences of the gradient.
        """
        return hessian_fd(self, self._check_theta(theta))

    def _loss(self, theta):
        raise NotImplementedError

    def _grad(self, theta):
        raise NotImplementedError

    def _grad_rows(self, thetas):
        # sub-classes with an elementwise gradient override this
        return np.array([self._grad(t) for t in thetas])

    def _batch_loss(self, theta, indices):
        raise NotImplementedError

    def _batch_grad(self, theta, indices):
        raise NotImplementedError

    def _batch_grad_rows(self, thetas, index_rows):
        # sub-classes with a vectorized per-sample gradient override this
        return np.array([self._batch_grad(t, idx)
                         for t, idx in zip(thetas, index_rows)])

    def default_start(self, k=1.):
        """Return the starting point of escape experiments."""
        raise NotImplementedError

    def default_region(self, k=1.):
        """Return the valley region of escape experiments."""
        raise NotImplementedError


class ScaledLandscape(Landscape):
    """A landscape whose sharpness is multiplied by a factor k.

    loss(θ) = base.loss(√k·θ), so every Hessian is scaled by k while the loss
    values (and hence barrier heights) are unchanged.

    Attributes
    ----------
    base : Landscape
        the unscaled landscape
    k : float
        the sharpness factor
    """

    def __init__(self, base, k):
        """Instantiate the scaled landscape.

        Raises
        ------
        ValueError
            if k is not positive
        """
        if not k > 0:
            raise ValueError("the sharpness factor k must be positive")
        super(ScaledLandscape, self).__init__(base.dim, base.dataset)
        self.base = base
        self.k = float(k)
        self._sqrt_k = np.sqrt(self.k)

    def loss(self, theta):
        """See parent class."""
        return self.base.loss(self._sqrt_k * self._check_theta(theta))

    def grad(self, theta):
        """See parent class."""
        return self._sqrt_k * self.base.grad(
            self._sqrt_k * self._check_theta(theta))

    def minibatch_grad(self, theta, indices):
        """See parent class."""
        return self._sqrt_k * self.base.minibatch_grad(
            self._sqrt_k * self._check_theta(theta), indices)

    def grad_batch(self, thetas):
        """See parent class."""
        return self._sqrt_k * self.base.grad_batch(
            self._sqrt_k * np.asarray(thetas, dtype=np.float64))

    def minibatch_grad_rows(self, thetas, index_rows):
        """See parent class."""
        return self._sqrt_k * self.base.minibatch_grad_rows(
            self._sqrt_k * np.asarray(thetas, dtype=np.float64), index_rows)

    def hessian(self, theta):
        """See parent class."""
        return self.k * self.base.hessian(
            self._sqrt_k * self._check_theta(theta))

    def default_start(self, k=1.):
        """See parent class."""
        return self.base.default_start(k * self.k)

    def default_region(self, k=1.):
        """See parent class."""
        return self.base.default_region(k * self.k)


def rescale(base, k):
    """Return `base` with its sharpness multiplied by k.

    Parameters
    ----------
    base : Landscape
        the landscape to rescale
    k : float
        the sharpness factor. Must be positive.

    Returns
    -------
    ScaledLandscape
        the rescaled landscape
    """
    return ScaledLandscape(base, k)


def hessian_fd(landscape, theta, step=1e-4):
    """Compute the Hessian by central differences of the gradient.

    Coordinate i is perturbed by step·(1 + |θ_i|) and the result is
    symmetrized as (A + Aᵀ)/2.

    Parameters
    ----------
    landscape : Landscape
        the landscape whose gradient is differentiated
    theta : array_like
        the point of evaluation
    step : float
        relative finite-difference step

    Returns
    -------
    array_like
        (dim, dim) symmetric matrix

    Raises
    ------
    ValueError
        if step is not positive
    NumericalFailureError
        if a gradient evaluation is non-finite
    """
    if not step > 0:
        raise ValueError("the finite-difference step must be positive")
    theta = np.asarray(theta, dtype=np.float64)
    n = theta.shape[0]
    a = np.zeros((n, n))
    for i in range(n):
        h = step * (1. + abs(theta[i]))
        theta_p = theta.copy()
        theta_m = theta.copy()
        theta_p[i] += h
        theta_m[i] -= h
        g_p = landscape.grad(theta_p)
        g_m = landscape.grad(theta_m)
        if not (np.all(np.isfinite(g_p)) and np.all(np.isfinite(g_m))):
            raise NumericalFailureError(
                "non-finite gradient while differentiating coordinate "
                "{}".format(i))
        a[:, i] = (g_p - g_m) / (theta_p[i] - theta_m[i])
    return 0.5 * (a + a.T)
