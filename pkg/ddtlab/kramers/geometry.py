"""Local geometry of valleys and saddles entering the escape-time formulas."""
import numpy as np

from ddtlab.landscapes.analytic import st_critical_points
from ddtlab.landscapes.analytic import st_loss_1d

# supported outcomes of classify_critical
CRITICAL_KINDS = ["minimum", "index-1-saddle", "other"]


class ValleyGeometry(object):
    """Second-order description of a minimum a.

    Attributes
    ----------
    loss_at_min : float
        L(a)
    hessian_eigs : array_like
        the eigenvalues of H_a, all positive
    escape_eig : float
        H_ae, the eigenvalue along the escape direction
    """

    def __init__(self, loss_at_min, hessian_eigs, escape_eig=None):
        """Instantiate the geometry.

        Parameters
        ----------
        loss_at_min : float
            L(a)
        hessian_eigs : array_like
            the eigenvalues of H_a
        escape_eig : float or None
            H_ae. Defaults to the smallest eigenvalue.

        Raises
        ------
        ValueError
            if an eigenvalue is not positive or escape_eig is not one of them
        """
        eigs = np.atleast_1d(np.asarray(hessian_eigs, dtype=np.float64))
        if np.any(eigs <= 0):
            raise ValueError("every Hessian eigenvalue at a minimum must be "
                             "positive, got {}".format(eigs))
        if escape_eig is None:
            escape_eig = float(np.min(eigs))
        if not np.any(np.isclose(eigs, escape_eig, rtol=1e-9, atol=0.)):
            raise ValueError("escape_eig must be an eigenvalue of H_a")
        self.loss_at_min = float(loss_at_min)
        self.hessian_eigs = eigs
        self.escape_eig = float(escape_eig)

    def log_det(self):
        """Return log det H_a."""
        return float(np.sum(np.log(self.hessian_eigs)))

    def to_dict(self):
        """Return the JSON-serializable form of the geometry."""
        return {"loss_at_min": self.loss_at_min,
                "hessian_eigs": self.hessian_eigs.tolist(),
                "escape_eig": self.escape_eig}


class SaddleGeometry(object):
    """Second-order description of an index-1 saddle b.

    Attributes
    ----------
    loss_at_saddle : float
        L(b)
    hessian_eigs : array_like
        the eigenvalues of H_b, exactly one of them negative
    escape_eig : float
        H_be, the negative eigenvalue
    """

    def __init__(self, loss_at_saddle, hessian_eigs):
        """Instantiate the geometry.

        Raises
        ------
        ValueError
            if H_b does not have exactly one negative eigenvalue
        """
        eigs = np.atleast_1d(np.asarray(hessian_eigs, dtype=np.float64))
        if np.sum(eigs < 0) != 1:
            raise ValueError("an index-1 saddle has exactly one negative "
                             "eigenvalue, got {}".format(eigs))
        self.loss_at_saddle = float(loss_at_saddle)
        self.hessian_eigs = eigs
        self.escape_eig = float(eigs[eigs < 0][0])

    def log_abs_det(self):
        """Return log |det H_b|."""
        return float(np.sum(np.log(np.abs(self.hessian_eigs))))

    def to_dict(self):
        """Return the JSON-serializable form of the geometry."""
        return {"loss_at_saddle": self.loss_at_saddle,
                "hessian_eigs": self.hessian_eigs.tolist(),
                "escape_eig": self.escape_eig}


class PathParams(object):
    """Parameters of one escape path.

    Attributes
    ----------
    s : float
        the path-position parameter in (0, 1)
    barrier : float
        ΔL = L(b) - L(a) > 0
    """

    def __init__(self, s, barrier):
        if not 0 < s < 1:
            raise ValueError("the path parameter s must lie in (0, 1)")
        if not barrier > 0:
            raise ValueError("the barrier height must be positive")
        self.s = float(s)
        self.barrier = float(barrier)


def classify_critical(hessian, tol=None):
    """Classify a critical point from its Hessian.

    Parameters
    ----------
    hessian : array_like
        the symmetric Hessian
    tol : float or None
        eigenvalues within ±tol count as zero. Defaults to 1e-6·max|eig|.

    Returns
    -------
    str
        "minimum" if no eigenvalue is below -tol, "index-1-saddle" if exactly
        one is, "other" otherwise (or if every eigenvalue is within ±tol)
    """
    eigs = np.linalg.eigvalsh(np.atleast_2d(np.asarray(hessian, np.float64)))
    if tol is None:
        tol = 1e-6 * float(np.max(np.abs(eigs)))
    if np.all(np.abs(eigs) <= tol):
        return "other"
    below = int(np.sum(eigs < -tol))
    if below == 0:
        return "minimum"
    elif below == 1:
        return "index-1-saddle"
    return "other"


def landscape_geometry(landscape, minimum, saddle):
    """Measure the valley and saddle geometry of a landscape.

    The escape eigenvalue at the minimum is the one whose eigenvector is best
    aligned with the unstable direction of the saddle.

    Parameters
    ----------
    landscape : ddtlab.landscapes.Landscape
        the loss surface
    minimum : array_like
        the minimum a
    saddle : array_like
        the index-1 saddle b

    Returns
    -------
    ValleyGeometry
        the geometry at a
    SaddleGeometry
        the geometry at b
    float
        the barrier ΔL = L(b) - L(a)
    """
    eig_a, vec_a = np.linalg.eigh(landscape.hessian(minimum))
    eig_b, vec_b = np.linalg.eigh(landscape.hessian(saddle))
    saddle_geo = SaddleGeometry(landscape.loss(saddle), eig_b)

    unstable = vec_b[:, int(np.argmin(eig_b))]
    escape_idx = int(np.argmax(np.abs(vec_a.T.dot(unstable))))
    valley_geo = ValleyGeometry(
        landscape.loss(minimum), eig_a, escape_eig=eig_a[escape_idx])

    return valley_geo, saddle_geo, \
        saddle_geo.loss_at_saddle - valley_geo.loss_at_min


def st_geometry(dim=1, k=1.):
    """Return the geometry of the Styblinski-Tang valley around (a, ..., a).

    The saddle is the nearest index-1 saddle, with one coordinate at b and the
    others at a. With sharpness k every Hessian is scaled by k while the
    barrier is unchanged.

    Parameters
    ----------
    dim : int
        number of parameters
    k : float
        the sharpness factor

    Returns
    -------
    ValleyGeometry
        the geometry at the global minimum
    SaddleGeometry
        the geometry at the saddle
    float
        the barrier ΔL
    """
    if not k > 0:
        raise ValueError("the sharpness factor k must be positive")
    a, b, _ = st_critical_points()
    h_a = k * (6. * a ** 2 - 16.)
    h_b = k * (6. * b ** 2 - 16.)

    valley = ValleyGeometry(dim * float(st_loss_1d(a)), np.full(dim, h_a), h_a)
    saddle = SaddleGeometry(
        (dim - 1) * float(st_loss_1d(a)) + float(st_loss_1d(b)),
        np.concatenate(([h_b], np.full(dim - 1, h_a))))
    return valley, saddle, float(st_loss_1d(b) - st_loss_1d(a))
