"""Compensated (Neumaier) accumulation for element-wise array series."""
from __future__ import annotations

import numpy as np


class CompensatedSum:
    """Running element-wise sum with a carried error term.

    >>> acc = CompensatedSum(())
    >>> for v in (1.0, 1e100, 1.0, -1e100):
    ...     acc.add(v)
    >>> float(acc.value)
    2.0
    """

    def __init__(self, shape, dtype=float):
        self._s = np.zeros(shape, dtype=dtype)
        self._c = np.zeros(shape, dtype=dtype)

    def add(self, term) -> None:
        term = np.asarray(term, dtype=self._s.dtype)
        t = self._s + term
        big = np.abs(self._s) >= np.abs(term)
        self._c += np.where(big, (self._s - t) + term, (term - t) + self._s)
        self._s = t

    @property
    def value(self) -> np.ndarray:
        return self._s + self._c
