"""Seeded random streams.

Every random quantity in ddtlab is drawn from a Philox generator keyed by an
experiment seed and a tuple of stream indices, so the numbers used by trial i
of a grid point never depend on which worker ran it or on the order in which
grid points were visited.
"""
import numpy as np


def make_rng(seed, *stream):
    """Return an independent generator for the stream `(seed, *stream)`.

    Parameters
    ----------
    seed : int
        the experiment seed (64-bit)
    stream : int
        stream indices, e.g. (grid key, trial index)

    Returns
    -------
    numpy.random.Generator
        a Philox-backed generator
    """
    ss = np.random.SeedSequence(
        entropy=int(seed), spawn_key=tuple(int(s) for s in stream))
    return np.random.Generator(np.random.Philox(ss))


def as_generator(seed):
    """Return `seed` if it is a generator, else a generator seeded by it."""
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, (tuple, list)):
        return make_rng(seed[0], *seed[1:])
    return make_rng(seed)


def value_key(x):
    """Return a stream index that identifies the float `x` by its bits.

    Used to key grid points by value instead of by position.
    """
    return int(np.asarray(x, dtype=np.float64).view(np.uint64))
