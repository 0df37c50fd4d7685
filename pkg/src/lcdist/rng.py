"""Deterministic, platform-stable random number generation.

Every stochastic draw in the package flows through :class:`SplitMix64` so
that identical seeds give identical results on any platform or language.
The algorithm is Steele, Lea & Flood's SplitMix64 (also the seeding
generator of java.util.SplittableRandom and xoshiro):

    state    <- (state + 0x9E3779B97F4A7C15) mod 2^64
    z        <- state
    z        <- (z XOR (z >> 30)) * 0xBF58476D1CE4E5B9 mod 2^64
    z        <- (z XOR (z >> 27)) * 0x94D049BB133111EB mod 2^64
    output   <- z XOR (z >> 31)

Floats in [0, 1) use the top 53 bits: (output >> 11) * 2^-53.
Bounded integers use rejection sampling on the top of the 64-bit range,
so results are exactly reproducible and unbiased.

Child streams (annealing restarts, generation retries) are seeded with
consecutive outputs of a parent SplitMix64 over the user seed.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def _mix64(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """64-bit SplitMix64 stream seeded with an arbitrary integer."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        return _mix64(self._state)

    def random(self) -> float:
        """Uniform float in [0, 1) with 53 bits of precision."""
        return (self.next_u64() >> 11) * 2.0**-53

    def uniform(self, lo: float, hi: float) -> float:
        """Uniform float in [lo, hi)."""
        return lo + (hi - lo) * self.random()

    def randrange(self, n: int) -> int:
        """Uniform integer in [0, n) via unbiased rejection sampling."""
        if n <= 0:
            raise ValueError("randrange bound must be positive")
        limit = _MASK64 + 1 - (_MASK64 + 1) % n
        while True:
            u = self.next_u64()
            if u < limit:
                return u % n

    def spawn_seeds(self, count: int) -> list[int]:
        """Derive ``count`` child seeds; child k gets the k-th output."""
        return [self.next_u64() for _ in range(count)]


def child_seed(seed: int, index: int) -> int:
    """The ``index``-th child seed of ``seed`` (0-based), statelessly."""
    parent = SplitMix64(seed)
    for _ in range(index):
        parent.next_u64()
    return parent.next_u64()
