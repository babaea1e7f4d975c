"""Seeded Gaussian draws that are stable across Python versions.

Uniforms come from the stdlib Mersenne Twister (``random.Random(seed).random()``,
whose output sequence for a given integer seed is guaranteed not to change);
normals are produced from them with the Box-Muller transform. The stdlib
``random.gauss`` is avoided because its algorithm is not covered by that
guarantee.
"""

from __future__ import annotations

import math
import random


class GaussianStream:
    def __init__(self, seed: int):
        self.seed = int(seed)
        self._uniform = random.Random(self.seed)
        self._spare = None

    def normal(self) -> float:
        if self._spare is not None:
            z, self._spare = self._spare, None
            return z
        u1 = self._uniform.random()
        u2 = self._uniform.random()
        # 1 - u1 lies in (0, 1], so the log is finite
        r = math.sqrt(-2.0 * math.log(1.0 - u1))
        theta = 2.0 * math.pi * u2
        self._spare = r * math.sin(theta)
        return r * math.cos(theta)

    def normals(self, count: int) -> list[float]:
        return [self.normal() for _ in range(count)]
