"""Deterministic seeding utilities.

The Gibbs kernels use a splitmix64 generator implemented identically in the
compiled and pure-Python backends, so one seed produces one model regardless
of which backend is selected.  This module holds the reference Python
implementation plus the helpers the rest of the pipeline uses to derive
per-stage seeds from a single master seed.
"""

MASK64 = 0xFFFFFFFFFFFFFFFF
_GAMMA = 0x9E3779B97F4A7C15


def mix64(x: int) -> int:
    """splitmix64 output function (Stafford variant 13)."""
    x &= MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


class SplitMix64:
    """Tiny, fast, reproducible 64-bit generator."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + _GAMMA) & MASK64
        return mix64(self.state)

    def next_float(self) -> float:
        """Uniform in [0, 1) with 53 bits of precision."""
        return (self.next_u64() >> 11) * 1.1102230246251565e-16  # 2**-53

    def next_below(self, n: int) -> int:
        return self.next_u64() % n


def derive_seed(master: int, stream: int) -> int:
    """Derive an independent child seed for a named stream.

    Deterministic in (master, stream) only, so e.g. the per-k training seeds
    of a sweep do not depend on the order the k values are visited.
    """
    return mix64((master & MASK64) ^ (((stream + 1) * _GAMMA) & MASK64))
