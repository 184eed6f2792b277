"""Counter-based deterministic random numbers.

Each variate is a pure function of (seed, stream, counter): three rounds of
the splitmix64 finalizer chained by xor. There is no sequential state, so
trajectory-level parallelism, worker counts, and batch splits cannot change
results. The numba kernels re-implement the same arithmetic scalar-side from
the constants below; tests pin the two implementations bit-exactly.
"""

from __future__ import annotations

import os

import numpy as np

GOLDEN = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB
STREAM_SALT = 0xA3EC4E238D1C7C9B
COUNTER_SALT = 0xC2B2AE3D27D4EB4F

DEFAULT_SEED = 20240801
SEED_ENV_VAR = "WALKLAB_SEED"

_U64 = np.uint64
_MASK = (1 << 64) - 1


def resolve_seed(explicit: int | None = None) -> int:
    """Seed precedence: explicit argument, environment variable, constant."""
    if explicit is not None:
        return int(explicit)
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        return int(env)
    return DEFAULT_SEED


def mix64(z):
    """splitmix64 finalizer on uint64 scalars or arrays."""
    z = np.asarray(z, dtype=_U64)
    z = (z ^ (z >> _U64(30))) * _U64(MIX1)
    z = (z ^ (z >> _U64(27))) * _U64(MIX2)
    return z ^ (z >> _U64(31))


def hash_u64(seed: int, stream, counter):
    """64-bit hash of (seed, stream, counter); stream/counter may be arrays."""
    stream = np.asarray(stream, dtype=_U64)
    counter = np.asarray(counter, dtype=_U64)
    h = mix64(_U64(seed & _MASK) + _U64(GOLDEN))
    h = mix64(h ^ (stream * _U64(STREAM_SALT) + _U64(GOLDEN)))
    h = mix64(h ^ (counter * _U64(COUNTER_SALT) + _U64(GOLDEN)))
    return h


def uniform01(seed: int, stream, counter):
    """Uniform float64 in [0, 1) with 53-bit resolution."""
    h = hash_u64(seed, stream, counter)
    return (h >> _U64(11)).astype(np.float64) * (2.0 ** -53)
