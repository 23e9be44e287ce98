"""Script containing the MinibatchSampler object."""
import numpy as np

# supported minibatch sampling schemes
SAMPLING_SCHEMES = ["with-replacement", "without-replacement"]

# number of indices drawn at a time by a blocked with-replacement sampler
INDEX_BLOCK = 65536


class MinibatchSampler(object):
    """Draws minibatch index sets from a data set.

    * with-replacement: B i.i.d. uniform indices per batch.
    * without-replacement: batches walk through a fresh random permutation of
      the data set every epoch, so no index repeats within an epoch. A batch
      that would straddle two epochs is completed from the next permutation.

    Indices are returned sorted so that every batch is averaged in a fixed
    order. A blocked with-replacement sampler draws about INDEX_BLOCK indices
    at a time and hands them out batch by batch.
    """

    def __init__(self, sample_count, batch_size, sampling, rng,
                 blocked=False):
        """Instantiate the sampler.

        Parameters
        ----------
        sample_count : int
            number of samples in the data set
        batch_size : int
            number of elements that are to be returned as a batch
        sampling : str
            the sampling scheme. One of SAMPLING_SCHEMES.
        rng : numpy.random.Generator
            the random stream batches are drawn from
        blocked : bool
            whether with-replacement batches are drawn in blocks

        Raises
        ------
        ValueError
            if the batch size is not in [1, sample_count] or the sampling
            scheme is unknown
        """
        if sampling not in SAMPLING_SCHEMES:
            raise ValueError("Unknown sampling scheme: {}".format(sampling))
        if not 1 <= batch_size <= sample_count:
            raise ValueError("batch_size ({}) must lie in [1, sample_count="
                             "{}]".format(batch_size, sample_count))

        self._sample_count = int(sample_count)
        self._batch_size = int(batch_size)
        self._sampling = sampling
        self._rng = rng
        self._perm = None
        self._next_idx = 0
        self._block_rows = max(1, INDEX_BLOCK // self._batch_size) \
            if blocked else 1
        self._block = None
        self._block_idx = 0

    @property
    def batch_size(self):
        """Return the number of indices per batch."""
        return self._batch_size

    def is_full_batch(self):
        """Check whether every batch is the complete data set.

        Returns
        -------
        bool
            True if sampling without replacement with B equal to the sample
            count, False otherwise
        """
        return self._sampling == "without-replacement" and \
            self._batch_size == self._sample_count

    def sample(self):
        """Sample a batch of indices.

        Returns
        -------
        array_like
            sorted (batch_size,) array of sample indices
        """
        if self.is_full_batch():
            return np.arange(self._sample_count)

        if self._sampling == "with-replacement":
            if self._block_rows == 1:
                return np.sort(self._rng.integers(
                    0, self._sample_count, size=self._batch_size))
            if self._block is None or self._block_idx >= self._block_rows:
                self._block = np.sort(self._rng.integers(
                    0, self._sample_count,
                    size=(self._block_rows, self._batch_size)), axis=1)
                self._block_idx = 0
            idxes = self._block[self._block_idx]
            self._block_idx += 1
            return idxes

        parts = []
        needed = self._batch_size
        while needed > 0:
            if self._perm is None or self._next_idx >= self._sample_count:
                self._perm = self._rng.permutation(self._sample_count)
                self._next_idx = 0
            take = min(needed, self._sample_count - self._next_idx)
            parts.append(self._perm[self._next_idx:self._next_idx + take])
            self._next_idx += take
            needed -= take

        return np.sort(np.concatenate(parts))

    def sample_distinct(self):
        """Sample a batch of distinct indices, independent of any epoch.

        Used for independent gradient-noise draws at a fixed point.

        Returns
        -------
        array_like
            sorted (batch_size,) array of distinct sample indices
        """
        if self._batch_size == self._sample_count:
            return np.arange(self._sample_count)
        return np.sort(self._rng.choice(
            self._sample_count, size=self._batch_size, replace=False))
