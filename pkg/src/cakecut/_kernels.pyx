# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops. Semantics mirror ``_kernels_py`` exactly."""

import numpy as np
cimport numpy as cnp

cnp.import_array()

BACKEND = "cython"


cdef class PiecewiseLinear:
    cdef readonly object xs_arr, ys_arr, slopes_arr
    cdef const double* xs
    cdef const double* ys
    cdef const double* sl
    cdef Py_ssize_t n

    def __init__(self, xs, ys, slopes):
        self.xs_arr = np.ascontiguousarray(xs, dtype=np.float64)
        self.ys_arr = np.ascontiguousarray(ys, dtype=np.float64)
        self.slopes_arr = np.ascontiguousarray(slopes, dtype=np.float64)
        self.n = self.xs_arr.shape[0]
        if self.n < 2 or self.ys_arr.shape[0] != self.n or self.slopes_arr.shape[0] != self.n - 1:
            raise ValueError("need n >= 2 knots, n values and n - 1 slopes")
        self.xs = <const double*> cnp.PyArray_DATA(self.xs_arr)
        self.ys = <const double*> cnp.PyArray_DATA(self.ys_arr)
        self.sl = <const double*> cnp.PyArray_DATA(self.slopes_arr)

    def __reduce__(self):
        return (PiecewiseLinear, (self.xs_arr, self.ys_arr, self.slopes_arr))

    cdef inline double _eval(self, double x) noexcept nogil:
        cdef Py_ssize_t lo = 0, hi = self.n, mid
        if x >= self.xs[self.n - 1]:
            return self.ys[self.n - 1]
        if x <= self.xs[0]:
            return self.ys[0]
        while lo < hi:  # bisect_right
            mid = (lo + hi) >> 1
            if x < self.xs[mid]:
                hi = mid
            else:
                lo = mid + 1
        lo -= 1
        return self.ys[lo] + (x - self.xs[lo]) * self.sl[lo]

    cdef inline Py_ssize_t _left_of_ys(self, double v) noexcept nogil:
        cdef Py_ssize_t lo = 0, hi = self.n, mid
        while lo < hi:  # bisect_left on ys
            mid = (lo + hi) >> 1
            if self.ys[mid] < v:
                lo = mid + 1
            else:
                hi = mid
        return lo

    def eval(self, double x):
        return self._eval(x)

    def inverse(self, double target):
        cdef Py_ssize_t k
        cdef double x
        if target <= self.ys[0]:
            return self.xs[0]
        if target >= self.ys[self.n - 1]:
            return self.xs[self._left_of_ys(self.ys[self.n - 1])]
        k = self._left_of_ys(target)
        if self.ys[k] == target:
            return self.xs[k]
        x = self.xs[k - 1] + (target - self.ys[k - 1]) / self.sl[k - 1]
        if x < self.xs[k - 1]:
            x = self.xs[k - 1]
        elif x > self.xs[k]:
            x = self.xs[k]
        return x

    def bisect_root(self, double eps, int max_iter):
        cdef double lo = self.xs[0], hi = self.xs[self.n - 1], mid, p
        cdef int it
        for it in range(1, max_iter + 1):
            mid = 0.5 * (lo + hi)
            p = self._eval(mid)
            if -eps <= p <= eps:
                return mid, it
            if p < 0.0:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi), -1


def fp_simulate(PiecewiseLinear vb, Py_ssize_t T, int alice_rule, int bob_rule,
                double mid_a, const double[:] coins_a, const double[:] coins_b):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] cuts = np.empty(T, dtype=np.float64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] left = np.empty(T, dtype=np.uint8)
    cdef double[:] cv = cuts
    cdef unsigned char[:] lv = left
    cdef long alpha = 0
    cdef double beta = 0.0, a
    cdef Py_ssize_t ka = 0, kb = 0, t
    cdef bint is_left
    with nogil:
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
                a = coins_a[ka]
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
            cv[t] = a
            lv[t] = 1 if is_left else 0
            alpha += -1 if is_left else 1
            beta += 2.0 * vb._eval(a) - 1.0
    return cuts, left
