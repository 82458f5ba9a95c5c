# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled split-scan kernel for decision tree training.

Mirrors frugalas._split_py.scan_split bit for bit: same candidate thresholds,
same score arithmetic, same first-minimum tie-break.
"""

from libc.math cimport INFINITY


def scan_split(double[::1] values, long long[::1] labels):
    """Best binary split of a feature column sorted ascending.

    Returns (score, threshold, valid) where score is the sum over both
    children of n_child * gini(child) and valid is False when the column
    is constant.
    """
    cdef Py_ssize_t n = values.shape[0]
    cdef Py_ssize_t j
    cdef long long total1 = 0
    for j in range(n):
        total1 += labels[j]

    cdef long long c1l = 0
    cdef long long n_l, n_r, c0l, c1r, c0r
    cdef double left, right, score, thr
    cdef double best_score = INFINITY
    cdef double best_thr = 0.0
    cdef bint found = False

    for j in range(n - 1):
        c1l += labels[j]
        if values[j] == values[j + 1]:
            continue
        n_l = j + 1
        n_r = n - n_l
        c0l = n_l - c1l
        c1r = total1 - c1l
        c0r = n_r - c1r
        left = n_l - (<double>(c0l * c0l + c1l * c1l)) / (<double>n_l)
        right = n_r - (<double>(c0r * c0r + c1r * c1r)) / (<double>n_r)
        score = left + right
        if score < best_score:
            thr = (values[j] + values[j + 1]) / 2.0
            if thr >= values[j + 1]:
                thr = values[j]
            best_score = score
            best_thr = thr
            found = True

    return best_score, best_thr, found
