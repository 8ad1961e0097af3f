"""Pure-Python twins of the compiled kernels in ``_kernels.pyx``.

Every routine here must give bit-identical results to its compiled
counterpart. A piecewise-linear function is described by knots ``xs``
(strictly increasing), values ``ys`` at the knots and ``slopes`` on each of
the ``len(xs) - 1`` segments.
"""

from bisect import bisect_left, bisect_right

import numpy as np

BACKEND = "python"


class PiecewiseLinear:
    __slots__ = ("xs", "ys", "slopes", "n")

    def __init__(self, xs, ys, slopes):
        self.xs = [float(v) for v in xs]
        self.ys = [float(v) for v in ys]
        self.slopes = [float(v) for v in slopes]
        self.n = len(self.xs)
        if self.n < 2 or len(self.ys) != self.n or len(self.slopes) != self.n - 1:
            raise ValueError("need n >= 2 knots, n values and n - 1 slopes")

    def eval(self, x):
        """Value at a scalar ``x`` (clamped to the end values outside the knots)."""
        xs = self.xs
        if x >= xs[-1]:
            return self.ys[-1]
        if x <= xs[0]:
            return self.ys[0]
        k = bisect_right(xs, x) - 1
        return self.ys[k] + (x - xs[k]) * self.slopes[k]

    def inverse(self, target):
        """Leftmost ``x`` with ``f(x) == target`` for a nondecreasing ``f``."""
        xs, ys = self.xs, self.ys
        if target <= ys[0]:
            return xs[0]
        if target >= ys[-1]:
            return xs[bisect_left(ys, ys[-1])]
        k = bisect_left(ys, target)
        if ys[k] == target:
            return xs[k]
        x = xs[k - 1] + (target - ys[k - 1]) / self.slopes[k - 1]
        if x < xs[k - 1]:
            x = xs[k - 1]
        elif x > xs[k]:
            x = xs[k]
        return x

    def bisect_root(self, eps, max_iter):
        """Bisection for a zero of a nondecreasing function on the knot span.

        Returns ``(x, iterations)``; ``iterations == -1`` means no point with
        ``|f| <= eps`` was found.
        """
        lo, hi = self.xs[0], self.xs[-1]
        for it in range(1, max_iter + 1):
            mid = 0.5 * (lo + hi)
            p = self.eval(mid)
            if -eps <= p <= eps:
                return mid, it
            if p < 0.0:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi), -1


def fp_simulate(vb, T, alice_rule, bob_rule, mid_a, coins_a, coins_b):
    """Fused simultaneous-move fictitious play.

    ``vb`` is Bob's cumulative as a ``PiecewiseLinear``.
    ``alice_rule``: 0 cut at 0, 1 cut at 1, 2 cut at ``mid_a``, 3 uniform cut.
    ``bob_rule``: 0 pick L, 1 pick R, 2 fair coin. Random tie-breaks consume
    ``coins_a`` / ``coins_b`` in order, one entry per tie.
    Returns ``(cuts, left)`` where ``left[t] == 1`` when Bob took ``[0, a_t]``.
    """
    cuts = np.empty(T, dtype=np.float64)
    left = np.empty(T, dtype=np.uint8)
    ev = vb.eval
    alpha = 0
    beta = 0.0
    ka = kb = 0
    for t in range(T):
        if alpha > 0:
            a = 1.0
        elif alpha < 0:
            a = 0.0
        elif alice_rule == 0:
            a = 0.0
        elif alice_rule == 1:
            a = 1.0
        elif alice_rule == 2:
            a = mid_a
        else:
            a = float(coins_a[ka])
            ka += 1
        if beta > 0.0:
            is_left = True
        elif beta < 0.0:
            is_left = False
        elif bob_rule == 0:
            is_left = True
        elif bob_rule == 1:
            is_left = False
        else:
            is_left = coins_b[kb] < 0.5
            kb += 1
        cuts[t] = a
        left[t] = 1 if is_left else 0
        alpha += -1 if is_left else 1
        beta += 2.0 * ev(a) - 1.0
    return cuts, left
