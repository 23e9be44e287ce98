"""Analytic test landscapes: Styblinski-Tang, quadratic wells, double wells.

All of these have closed-form gradients and Hessians. The Styblinski-Tang and
quadratic landscapes optionally average their loss over shifted copies
f(θ - x_j) of the deterministic function, where x_j are the samples of a
synthetic data set, which turns gradient descent on them into SGD.
"""
import numpy as np

from ddtlab.landscapes.base import Landscape
from ddtlab.dynamics.region import ValleyRegion


def st_critical_points():
    """Return the critical points of the 1-D Styblinski-Tang function.

    These are the roots of the gradient 2θ³ - 16θ + 2.5.

    Returns
    -------
    float
        the global minimum a (≈ -2.903534)
    float
        the saddle b separating the two valleys (≈ 0.156731)
    float
        the local minimum d (≈ 2.746803)
    """
    roots = np.sort(np.real(np.roots([2., 0., -16., 2.5])))
    return float(roots[0]), float(roots[1]), float(roots[2])


def st_loss_1d(theta):
    """Return the 1-D Styblinski-Tang function ½(θ⁴ - 16θ² + 5θ)."""
    theta = np.asarray(theta, dtype=np.float64)
    return 0.5 * (theta ** 4 - 16. * theta ** 2 + 5. * theta)


class StyblinskiTangLandscape(Landscape):
    """The n-dimensional Styblinski-Tang function.

    f(θ) = ½ Σ_i (θ_i⁴ - 16θ_i² + 5θ_i). With a data set, the loss of one
    sample is f(θ - x_j).
    """

    def __init__(self, dim, dataset=None):
        """Instantiate the landscape.

        Parameters
        ----------
        dim : int
            number of parameters
        dataset : DatasetSpec or None
            the shifts x_j. Must have input_dim equal to dim.

        Raises
        ------
        ValueError
            if dim < 1 or the data set dimension does not match
        """
        super(StyblinskiTangLandscape, self).__init__(dim, dataset)
        if dataset is not None and dataset.input_dim != self.dim:
            raise ValueError("the data set input_dim ({}) must equal dim "
                             "({})".format(dataset.input_dim, self.dim))

    def _loss(self, theta):
        return np.sum(st_loss_1d(theta))

    def _grad(self, theta):
        return 2. * theta * theta * theta - 16. * theta + 2.5

    def _grad_rows(self, thetas):
        return self._grad(thetas)

    def _batch_loss(self, theta, indices):
        u = theta - self.dataset.generate()[0][indices]
        return np.mean(np.sum(st_loss_1d(u), axis=1))

    def _batch_grad(self, theta, indices):
        u = theta - self.dataset.generate()[0][indices]
        return np.mean(2. * u * u * u - 16. * u + 2.5, axis=0)

    def _batch_grad_rows(self, thetas, index_rows):
        u = thetas[:, None, :] - self.dataset.generate()[0][index_rows]
        return np.mean(2. * u * u * u - 16. * u + 2.5, axis=1)

    def hessian(self, theta):
        """Return the (diagonal) Hessian of the full-data loss."""
        theta = self._check_theta(theta)
        if self.dataset is None:
            return np.diag(6. * theta ** 2 - 16.)
        u = theta - self.dataset.generate()[0]
        return np.diag(np.mean(6. * u ** 2 - 16., axis=0))

    def default_start(self, k=1.):
        """Return (1/√k)·(a, ..., a), with a the global minimum."""
        a, _, _ = st_critical_points()
        return np.full(self.dim, a / np.sqrt(k))

    def default_region(self, k=1.):
        """Return the valley θ_i < b/√k of the global minimum."""
        _, b, _ = st_critical_points()
        return ValleyRegion.half_space(upper=np.full(self.dim, b / np.sqrt(k)))


class QuadraticLandscape(Landscape):
    """A quadratic well ½(θ - x)ᵀA(θ - x).

    Without a data set x = 0. With one, the loss of one sample uses x = x_j.

    Attributes
    ----------
    curvature : array_like
        the (dim, dim) matrix A
    """

    def __init__(self, curvature, dataset=None, dim=None):
        """Instantiate the landscape.

        Parameters
        ----------
        curvature : float or array_like
            a scalar (isotropic), a vector (diagonal) or a symmetric matrix
        dataset : DatasetSpec or None
            the shifts x_j
        dim : int or None
            number of parameters. Only needed for a scalar curvature without
            a data set; defaults to 1.

        Raises
        ------
        ValueError
            if the curvature matrix is not symmetric or the dimensions do not
            agree
        """
        curvature = np.asarray(curvature, dtype=np.float64)
        if curvature.ndim == 0:
            n = dim or (dataset.input_dim if dataset is not None else 1)
            curvature = float(curvature) * np.eye(n)
        elif curvature.ndim == 1:
            curvature = np.diag(curvature)
        if curvature.shape[0] != curvature.shape[1] or \
                not np.allclose(curvature, curvature.T):
            raise ValueError("the curvature must be a symmetric matrix")
        if dataset is not None and dataset.input_dim != curvature.shape[0]:
            raise ValueError("the data set input_dim must equal the "
                             "curvature dimension")

        super(QuadraticLandscape, self).__init__(curvature.shape[0], dataset)
        self.curvature = curvature
        self.curvature.setflags(write=False)

    def _loss(self, theta):
        return 0.5 * theta.dot(self.curvature).dot(theta)

    def _grad(self, theta):
        return self.curvature.dot(theta)

    def _grad_rows(self, thetas):
        return np.sum(thetas[:, None, :] * self.curvature, axis=2)

    def _batch_loss(self, theta, indices):
        u = theta - self.dataset.generate()[0][indices]
        return 0.5 * np.mean(np.sum(u.dot(self.curvature) * u, axis=1))

    def _batch_grad(self, theta, indices):
        u = theta - self.dataset.generate()[0][indices]
        return np.mean(u, axis=0).dot(self.curvature)

    def _batch_grad_rows(self, thetas, index_rows):
        u = thetas[:, None, :] - self.dataset.generate()[0][index_rows]
        return np.mean(u, axis=1).dot(self.curvature)

    def hessian(self, theta):
        """Return the constant curvature matrix."""
        self._check_theta(theta)
        return self.curvature.copy()

    def minimizer(self):
        """Return the minimizer of the full-data loss (for invertible A)."""
        if self.dataset is None:
            return np.zeros(self.dim)
        return np.mean(self.dataset.generate()[0], axis=0)

    def default_start(self, k=1.):
        """Return the minimizer, scaled by 1/√k."""
        return self.minimizer() / np.sqrt(k)

    def default_region(self, k=1.):
        """Return a box of half-width 1/√k around the minimizer."""
        return ValleyRegion.box(self.default_start(k), 1. / np.sqrt(k))


class DoubleWellLandscape(Landscape):
    """The tilted 1-D double well h(θ² - 1)² + cθ.

    With c = 0 the two valleys at θ = ±1 are mirror images. A positive tilt c
    deepens the left valley.

    Attributes
    ----------
    height : float
        the barrier height h of the untilted well
    tilt : float
        the linear tilt c
    """

    def __init__(self, height=1., tilt=0.):
        """Instantiate the landscape.

        Raises
        ------
        ValueError
            if the height is not positive or the tilt removes a valley
        """
        if not height > 0:
            raise ValueError("the double-well height must be positive")
        # the cubic gradient needs three real roots for two valleys to exist
        if abs(tilt) >= 8. * height / (3. * np.sqrt(3.)):
            raise ValueError("the tilt is too large: only one valley remains")
        super(DoubleWellLandscape, self).__init__(1)
        self.height = float(height)
        self.tilt = float(tilt)

    def _loss(self, theta):
        return np.sum(self.height * (theta ** 2 - 1.) ** 2 + self.tilt * theta)

    def _grad(self, theta):
        return 4. * self.height * theta * (theta * theta - 1.) + self.tilt

    def _grad_rows(self, thetas):
        return self._grad(thetas)

    def hessian(self, theta):
        """Return the 1x1 analytic Hessian."""
        theta = self._check_theta(theta)
        return np.array([[12. * self.height * theta[0] ** 2 - 4. * self.height]])

    def critical_points(self):
        """Return the left minimum, the saddle and the right minimum."""
        h = self.height
        roots = np.sort(np.real(np.roots([4. * h, 0., -4. * h, self.tilt])))
        return float(roots[0]), float(roots[1]), float(roots[2])

    def valley_regions(self, fraction=0.5):
        """Return boxes around both minima.

        Parameters
        ----------
        fraction : float
            half-width of each box as a fraction of the distance from the
            minimum to the saddle

        Returns
        -------
        ValleyRegion
            the box around the left minimum
        ValleyRegion
            the box around the right minimum
        """
        left, saddle, right = self.critical_points()
        return (ValleyRegion.box([left], fraction * (saddle - left)),
                ValleyRegion.box([right], fraction * (right - saddle)))

    def default_start(self, k=1.):
        """Return the left minimum, scaled by 1/√k."""
        return np.array([self.critical_points()[0]]) / np.sqrt(k)

    def default_region(self, k=1.):
        """Return the left valley θ < saddle/√k."""
        return ValleyRegion.half_space(
            upper=[self.critical_points()[1] / np.sqrt(k)])


def st_landscape(dim):
    """Return the deterministic n-dimensional Styblinski-Tang landscape."""
    return StyblinskiTangLandscape(dim)


def shifted_st_landscape(dim, dataset):
    """Return the Styblinski-Tang landscape averaged over shifted samples."""
    return StyblinskiTangLandscape(dim, dataset)


def quadratic_landscape(curvature, dataset=None, dim=None):
    """Return a quadratic well. See QuadraticLandscape."""
    return QuadraticLandscape(curvature, dataset=dataset, dim=dim)


def double_well_landscape(height=1., tilt=0.):
    """Return a tilted 1-D double well. See DoubleWellLandscape."""
    return DoubleWellLandscape(height=height, tilt=tilt)
