"""Counter-based pseudorandom generator with a fully specified algorithm.

The experiment harness must emit bit-identical streams for a given seed, in
any implementation language. To that end the generator is pinned exactly:

    output(k) = mix64(base + k * 0x9E3779B97F4A7C15)   for k = 1, 2, ...
    base      = mix64(seed)

where ``mix64`` is the splitmix64 finalizer on 64-bit unsigned integers:

    z ^= z >> 30; z *= 0xBF58476D1CE4E5B9
    z ^= z >> 27; z *= 0x94D049BB133111EB
    z ^= z >> 31

Derived quantities are defined on top of the raw 64-bit stream:

* ``uniform()``     takes the top 53 bits: (u >> 11) * 2**-53.
* ``randint(n)``    draws 64-bit words, rejecting values >= floor(2**64/n)*n,
                    then reduces modulo n (unbiased).
* ``normal()``      Box-Muller: sqrt(-2 ln u1) * cos(2 pi u2), consuming two
                    uniforms per call, never cached.
* ``shuffle(xs)``   Fisher-Yates from the last index down, using randint.
* ``spawn(key)``    independent child stream with base mix64(base ^ mix64(key+1)).
"""

from __future__ import annotations

import math

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


class CounterRNG:
    """Deterministic counter-based stream seeded by a 64-bit integer."""

    def __init__(self, seed: int):
        self._base = mix64(seed & _MASK)
        self._counter = 0

    def u64(self) -> int:
        self._counter += 1
        return mix64((self._base + self._counter * _GAMMA) & _MASK)

    def uniform(self, lo: float = 0.0, hi: float = 1.0) -> float:
        u = (self.u64() >> 11) * (2.0 ** -53)
        return lo + (hi - lo) * u

    def randint(self, n: int) -> int:
        """Uniform integer in [0, n)."""
        if n <= 0:
            raise ValueError("randint needs n >= 1")
        limit = (2 ** 64 // n) * n
        while True:
            u = self.u64()
            if u < limit:
                return u % n

    def normal(self) -> float:
        u1 = self.uniform()
        u2 = self.uniform()
        if u1 == 0.0:
            u1 = 2.0 ** -53
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)

    def shuffle(self, xs: list) -> None:
        for k in range(len(xs) - 1, 0, -1):
            m = self.randint(k + 1)
            xs[k], xs[m] = xs[m], xs[k]

    def choice(self, xs):
        return xs[self.randint(len(xs))]

    def spawn(self, key: int) -> "CounterRNG":
        child = CounterRNG(0)
        child._base = mix64(self._base ^ mix64((key + 1) & _MASK))
        return child
