"""Adversarial cutters used to stress chooser strategies."""

from __future__ import annotations

import math

import numpy as np

from .engine import AliceStrategy, L


class ParityProbeAlice(AliceStrategy):
    """White-box attack on the interval-alternating Bob.

    Alice knows Bob's partition and works inside the interval she values
    most. When Bob's next answer there is ``R`` she cuts at the interval's
    right end (keeping almost all of ``[0, z_j]``); when it is ``L`` she cuts
    at its left end (keeping ``[z_{j-1}, 1]``).
    """

    def __init__(self, vA, vB):
        self.vA = vA
        self.vB = vB

    def reset(self, T, rng):
        super().reset(T, rng)
        P = math.ceil(math.sqrt(T))
        z = [self.vB.point_at_value(0.0, 1.0, j / P) for j in range(P + 1)]
        z[0], z[-1] = 0.0, 1.0
        vals = [self.vA.interval_value(z[j], z[j + 1]) for j in range(P)]
        j = int(np.argmax(vals))
        self.lo = z[j]
        self.hi = z[j + 1] if j == P - 1 else float(np.nextafter(z[j + 1], 0.0))
        self.count = 0

    def cut(self):
        return self.hi if self.count % 2 == 0 else self.lo

    def observe(self, a, b):
        self.count += 1


def parity_probe_alice(vA, vB):
    return ParityProbeAlice(vA, vB)


class ThresholdProbeAlice(AliceStrategy):
    """Find the leftmost cut Bob answers with ``L`` by bisection, then keep
    cutting there. Best response to any Bob who takes ``L`` exactly on an
    interval ``[y, 1]``.
    """

    def __init__(self, vA, probes=None):
        self.vA = vA
        self.probes = probes

    def reset(self, T, rng):
        super().reset(T, rng)
        self.k = self.probes if self.probes is not None else math.ceil(math.log2(T))
        self.lo, self.hi = 0.0, 1.0
        self.t = 0

    def cut(self):
        if self.t < self.k:
            return 0.5 * (self.lo + self.hi)
        return self.hi

    def observe(self, a, b):
        if self.t < self.k:
            if b == L:
                self.hi = a
            else:
                self.lo = a
        self.t += 1


def threshold_probe_alice(vA, probes=None):
    return ThresholdProbeAlice(vA, probes)
