"""Pure-numpy fallback for the split-scan kernel.

Kept arithmetically identical to the compiled version in _split.pyx: counts
are exact integers, every score is formed with the same sequence of double
operations, and ties keep the first minimum.
"""

from __future__ import annotations

import numpy as np


def scan_split(values: np.ndarray, labels: np.ndarray):
    """Best binary split of a feature column sorted ascending.

    Returns (score, threshold, valid); see the compiled kernel for the
    score definition.
    """
    n = values.shape[0]
    if n < 2:
        return np.inf, 0.0, False
    c1 = np.cumsum(labels)
    boundaries = np.nonzero(values[:-1] != values[1:])[0]
    if boundaries.size == 0:
        return np.inf, 0.0, False

    n_l = boundaries + 1
    n_r = n - n_l
    c1l = c1[boundaries]
    c0l = n_l - c1l
    c1r = c1[-1] - c1l
    c0r = n_r - c1r
    left = n_l - (c0l * c0l + c1l * c1l) / n_l
    right = n_r - (c0r * c0r + c1r * c1r) / n_r
    score = left + right

    k = int(np.argmin(score))
    j = int(boundaries[k])
    thr = (values[j] + values[j + 1]) / 2.0
    if thr >= values[j + 1]:
        thr = values[j]
    return float(score[k]), float(thr), True
