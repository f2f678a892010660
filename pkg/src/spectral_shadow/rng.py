"""Seeded vectors with a fixed, language-neutral generator contract.

The generator is SplitMix64 (64-bit state):

    state += 0x9E3779B97F4A7C15
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    return z ^ (z >> 31)

all arithmetic mod 2**64. A uniform double in (0, 1] is ``((z >> 11) + 1) * 2**-53``.
Gaussians come from Box-Muller on consecutive uniform pairs (u1, u2):
``sqrt(-2 ln u1) * cos(2 pi u2)``; the sine branch is discarded. A complex
entry takes its real part from one Gaussian and its imaginary part from the next.
"""

import math

import numpy as np

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MUL1 = 0xBF58476D1CE4E5B9
_MUL2 = 0x94D049BB133111EB


class SplitMix64:
    def __init__(self, seed):
        self.state = int(seed) & _MASK

    def next_u64(self):
        self.state = (self.state + _GOLDEN) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * _MUL1) & _MASK
        z = ((z ^ (z >> 27)) * _MUL2) & _MASK
        return z ^ (z >> 31)

    def uniform(self):
        return ((self.next_u64() >> 11) + 1) * 2.0**-53

    def gaussian(self):
        u1 = self.uniform()
        u2 = self.uniform()
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)


def gaussian_vector(seed, n, complex_=True, normalize=True):
    """Deterministic Gaussian vector of length ``n`` from ``seed``."""
    gen = SplitMix64(seed)
    if complex_:
        out = np.array([complex(gen.gaussian(), gen.gaussian()) for _ in range(n)])
    else:
        out = np.array([gen.gaussian() for _ in range(n)], dtype=complex)
    if normalize:
        out = out / np.linalg.norm(out)
    return out
