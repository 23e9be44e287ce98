"""Tiny trainable models over synthetic Gaussian data.

The loss of every model is the mean binary cross-entropy of a logit. The
gradients are exact (backpropagation written out with numpy).
"""
import numpy as np

from ddtlab.landscapes.base import Landscape
from ddtlab.dynamics.region import ValleyRegion

# supported hidden-layer activations of the MLP
ACTIVATIONS = ["relu", "tanh"]


def sigmoid(z):
    """Return the logistic function, computed without overflow."""
    return 0.5 * (1. + np.tanh(0.5 * z))


def cross_entropy(z, y):
    """Return the mean binary cross-entropy of logits z against labels y."""
    return np.mean(np.logaddexp(0., z) - y * z)


class LogisticLandscape(Landscape):
    """Logistic regression with a linear logit θᵀx (no bias term)."""

    def __init__(self, dataset):
        """Instantiate the landscape.

        Parameters
        ----------
        dataset : DatasetSpec
            the training data. The number of parameters is its input_dim.
        """
        super(LogisticLandscape, self).__init__(dataset.input_dim, dataset)

    def _batch_loss(self, theta, indices):
        x, y = self.dataset.generate()
        return cross_entropy(x[indices].dot(theta), y[indices])

    def _batch_grad(self, theta, indices):
        x, y = self.dataset.generate()
        xb = x[indices]
        residual = sigmoid(xb.dot(theta)) - y[indices]
        return xb.T.dot(residual) / indices.shape[0]

    def _batch_grad_rows(self, thetas, index_rows):
        x, y = self.dataset.generate()
        xb = x[index_rows]
        residual = sigmoid(np.einsum("cbd,cd->cb", xb, thetas)) - \
            y[index_rows]
        return np.einsum("cbd,cb->cd", xb, residual) / index_rows.shape[1]

    def hessian(self, theta):
        """Return Xᵀ diag(σ(1-σ)) X / m."""
        theta = self._check_theta(theta)
        x, _ = self.dataset.generate()
        p = sigmoid(x.dot(theta))
        return (x * (p * (1. - p))[:, None]).T.dot(x) / x.shape[0]

    def default_start(self, k=1.):
        """Return the origin."""
        return np.zeros(self.dim)

    def default_region(self, k=1.):
        """Return the box |θ_i| ≤ 0.1/√k."""
        return ValleyRegion.box(np.zeros(self.dim), 0.1 / np.sqrt(k))


class MLPLandscape(Landscape):
    """A fully-connected network with a single output logit.

    The parameter vector stores, layer by layer, the weight matrix (row-major,
    shape (out, in)) followed by the bias.

    Attributes
    ----------
    width : int
        number of units of each hidden layer
    depth : int
        number of linear layers (depth - 1 hidden layers)
    activation : str
        the hidden-layer activation. One of ACTIVATIONS.
    shapes : list of (int, int)
        (out, in) shape of each weight matrix
    """

    def __init__(self, dataset, width=10, depth=3, activation="relu"):
        """Instantiate the landscape.

        Raises
        ------
        ValueError
            if width < 1, depth < 2 or the activation is unknown
        """
        if int(width) < 1:
            raise ValueError("width must be a positive integer")
        if int(depth) < 2:
            raise ValueError("depth must be at least 2")
        if activation not in ACTIVATIONS:
            raise ValueError("Unknown activation: {}".format(activation))

        sizes = [dataset.input_dim] + [int(width)] * (int(depth) - 1) + [1]
        shapes = [(sizes[i + 1], sizes[i]) for i in range(len(sizes) - 1)]
        dim = sum(out * inp + out for out, inp in shapes)

        super(MLPLandscape, self).__init__(dim, dataset)
        self.width = int(width)
        self.depth = int(depth)
        self.activation = activation
        self.shapes = shapes

    def unflatten(self, theta):
        """Split a parameter vector into per-layer (weights, bias) pairs.

        Leading axes of `theta` are kept, so a (count, dim) array gives
        (count, out, in) weights and (count, out) biases.
        """
        lead = theta.shape[:-1]
        params = []
        i = 0
        for out, inp in self.shapes:
            w = theta[..., i:i + out * inp].reshape(lead + (out, inp))
            i += out * inp
            b = theta[..., i:i + out]
            i += out
            params.append((w, b))
        return params

    def _act(self, z):
        if self.activation == "relu":
            return np.maximum(z, 0.)
        return np.tanh(z)

    def _act_grad(self, z, a):
        if self.activation == "relu":
            return (z > 0.).astype(np.float64)
        return 1. - a ** 2

    def _forward(self, params, x):
        """Return the pre-activations and activations of every layer."""
        zs = []
        acts = [x]
        a = x
        for i, (w, b) in enumerate(params):
            z = np.matmul(a, np.swapaxes(w, -1, -2)) + b[..., None, :]
            zs.append(z)
            a = z if i == len(params) - 1 else self._act(z)
            acts.append(a)
        return zs, acts

    def _batch_loss(self, theta, indices):
        x, y = self.dataset.generate()
        zs, _ = self._forward(self.unflatten(theta), x[indices])
        return cross_entropy(zs[-1][:, 0], y[indices])

    def _batch_grad(self, theta, indices):
        return self._batch_grad_rows(theta[None, :], indices[None, :])[0]

    def _batch_grad_rows(self, thetas, index_rows):
        x, y = self.dataset.generate()
        params = self.unflatten(thetas)
        zs, acts = self._forward(params, x[index_rows])

        delta = (sigmoid(zs[-1][..., 0]) - y[index_rows])[..., None] / \
            index_rows.shape[1]
        grads = [None] * len(params)
        for i in reversed(range(len(params))):
            grads[i] = (np.matmul(np.swapaxes(delta, -1, -2), acts[i]),
                        np.sum(delta, axis=1))
            if i > 0:
                delta = np.matmul(delta, params[i][0]) * \
                    self._act_grad(zs[i - 1], acts[i])

        count = thetas.shape[0]
        return np.concatenate(
            [np.concatenate((gw.reshape(count, -1), gb), axis=1)
             for gw, gb in grads], axis=1)

    def default_start(self, k=1.):
        """Return 0.1 + N(0, 0.01²) per coordinate, scaled by 1/√k.

        The perturbation breaks the symmetry between hidden units and is
        seeded by the data set seed. It is clipped so that the start lies
        inside the default region.
        """
        rng = np.random.Generator(np.random.Philox(self.dataset.seed + 1))
        start = np.clip(0.1 + 0.01 * rng.standard_normal(self.dim), 0.06, 0.14)
        return start / np.sqrt(k)

    def default_region(self, k=1.):
        """Return the box 0.05/√k ≤ θ_i ≤ 0.15/√k."""
        return ValleyRegion(
            lower=np.full(self.dim, 0.05 / np.sqrt(k)),
            upper=np.full(self.dim, 0.15 / np.sqrt(k)))


def logistic_landscape(dataset):
    """Return the logistic-regression landscape over `dataset`."""
    return LogisticLandscape(dataset)


def mlp_landscape(dataset, width=10, depth=3, activation="relu"):
    """Return the MLP landscape over `dataset`. See MLPLandscape."""
    return MLPLandscape(dataset, width=width, depth=depth,
                        activation=activation)
