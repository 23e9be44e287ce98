"""Script containing the ValleyRegion object."""
import numpy as np


class ValleyRegion(object):
    """Axis-aligned region defining "inside the valley".

    A point θ is inside when lower_i ≤ θ_i ≤ upper_i for every coordinate i.
    Bounds may be infinite, so half-spaces such as θ_i < b are expressible.

    Attributes
    ----------
    lower : array_like
        per-coordinate lower bounds
    upper : array_like
        per-coordinate upper bounds
    center : array_like or None
        the center θ₀ of a box region, None for other regions
    radius : float or None
        the per-coordinate half-width r of a box region, None for other regions
    """

    def __init__(self, lower, upper, center=None, radius=None):
        """Instantiate the region.

        Raises
        ------
        ValueError
            if the bounds have different shapes or lower > upper somewhere
        """
        lower = np.asarray(lower, dtype=np.float64)
        upper = np.asarray(upper, dtype=np.float64)
        if lower.shape != upper.shape or lower.ndim != 1:
            raise ValueError("lower and upper must be vectors of one shape")
        if np.any(lower > upper):
            raise ValueError("lower bounds must not exceed upper bounds")
        self.lower = lower
        self.upper = upper
        self.center = None if center is None else \
            np.asarray(center, dtype=np.float64)
        self.radius = None if radius is None else float(radius)

    @classmethod
    def box(cls, center, radius):
        """Return the box |θ_i - θ₀_i| ≤ r."""
        if not radius > 0:
            raise ValueError("the region radius must be positive")
        center = np.asarray(center, dtype=np.float64)
        return cls(center - radius, center + radius, center, radius)

    @classmethod
    def half_space(cls, upper=None, lower=None):
        """Return the region θ_i ≤ upper_i (and/or θ_i ≥ lower_i)."""
        if upper is None and lower is None:
            raise ValueError("at least one of upper or lower is required")
        ref = upper if upper is not None else lower
        n = np.asarray(ref).shape[0]
        return cls(np.full(n, -np.inf) if lower is None else lower,
                   np.full(n, np.inf) if upper is None else upper)

    @property
    def dim(self):
        """Return the number of coordinates."""
        return self.lower.shape[0]

    def contains(self, theta):
        """Return True if theta lies inside the region (boundary included)."""
        return bool(np.all(theta >= self.lower) and np.all(theta <= self.upper))

    def scaled(self, factor):
        """Return the region with every coordinate multiplied by `factor`."""
        if not factor > 0:
            raise ValueError("the scaling factor must be positive")
        return ValleyRegion(
            self.lower * factor,
            self.upper * factor,
            None if self.center is None else self.center * factor,
            None if self.radius is None else self.radius * factor,
        )

    def is_disjoint(self, other):
        """Return True if the two regions share no point."""
        return bool(np.any(self.upper < other.lower) or
                    np.any(other.upper < self.lower))

    def to_dict(self):
        """Return a JSON-serializable description of the region."""
        if self.center is not None:
            return {"center": self.center.tolist(), "radius": self.radius}
        return {
            "lower": [None if np.isinf(v) else float(v) for v in self.lower],
            "upper": [None if np.isinf(v) else float(v) for v in self.upper],
        }
