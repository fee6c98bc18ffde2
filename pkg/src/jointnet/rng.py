"""Counter-based random streams.

Every random draw in jointnet comes from a Philox generator keyed by a
seed and a stream path ``(experiment, trial, purpose)``. Streams with
different paths are statistically independent, so a trial draws the same
numbers no matter which worker runs it or in which order.
"""
from enum import IntEnum

import numpy as np

SEED_MODULUS = 2**64


class Stream(IntEnum):
    """Purposes of random draws within a single trial."""

    GRAPH = 0
    REWIRE = 1
    FILTER = 2
    SIGNALS = 3
    WEIGHTS = 4


class Experiment(IntEnum):
    """Experiment families, used as the first component of a stream."""

    GENERATE = 0
    CERTIFICATE = 1
    DECAY = 2
    COMPARE = 3
    BOUND = 4
    REFERENCE = 5


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """Return a Philox generator for ``seed`` and the given stream path."""
    if seed < 0 or seed >= SEED_MODULUS:
        raise ValueError(
            f"`seed` must be an unsigned 64-bit integer. Got: {seed}."
        )
    seed_seq = np.random.SeedSequence(
        entropy=seed, spawn_key=tuple(int(s) for s in stream)
    )
    return np.random.Generator(np.random.Philox(seed_seq))


def as_generator(seed: int | np.random.Generator) -> np.random.Generator:
    """Use ``seed`` as a generator, building a Philox one from integers."""
    if isinstance(seed, np.random.Generator):
        return seed
    return make_rng(int(seed))
