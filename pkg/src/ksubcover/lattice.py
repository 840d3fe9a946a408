"""Dense enumeration of all k-sets over a small ground set.

A k-set over ``n`` elements is encoded as its position vector read as a
base-(k+1) number, element 0 being the most significant digit. Integer
order on codes is therefore lexicographic order on vectors: positions vary
fastest, elements slowest.
"""

from __future__ import annotations

import numpy as np

from .errors import BudgetExceededError

#: Hard cap on the number of k-sets any exhaustive routine will enumerate.
MAX_KSETS = 10**6


def num_ksets(n: int, k: int) -> int:
    return (k + 1) ** n


def check_budget(n: int, k: int, limit: int = MAX_KSETS) -> int:
    total = num_ksets(n, k)
    if total > limit:
        raise BudgetExceededError(
            f"(k+1)^n = {k + 1}^{n} = {total} k-sets exceeds the enumeration budget {limit}"
        )
    return total


def place_values(n: int, k: int) -> np.ndarray:
    """Weight of each element's digit in the code."""
    return (k + 1) ** np.arange(n - 1, -1, -1, dtype=np.int64)


def all_vectors(n: int, k: int) -> np.ndarray:
    """Array of shape ``((k+1)**n, n)``; row ``c`` is the vector with code ``c``."""
    total = check_budget(n, k)
    codes = np.arange(total, dtype=np.int64)
    out = np.empty((total, n), dtype=np.int8)
    for x, p in enumerate(place_values(n, k)):
        out[:, x] = (codes // p) % (k + 1)
    return out


def encode(vector, k: int) -> int:
    code = 0
    for d in vector:
        code = code * (k + 1) + int(d)
    return code


def decode(code: int, n: int, k: int) -> tuple[int, ...]:
    digits = []
    for _ in range(n):
        code, d = divmod(code, k + 1)
        digits.append(d)
    return tuple(reversed(digits))


def comparable_pairs(n: int, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Codes ``(s, t)`` of every pair with ``s ⊑ t``.

    Per element the admissible digit pairs are ``(0, j)`` for j in 0..k and
    ``(i, i)`` for i in 1..k, so there are ``(2k+1)**n`` pairs.
    """
    opts_s = np.array([0] * (k + 1) + list(range(1, k + 1)), dtype=np.int64)
    opts_t = np.array(list(range(k + 1)) + list(range(1, k + 1)), dtype=np.int64)
    m = 2 * k + 1
    idx = np.arange(m**n, dtype=np.int64)
    pv = place_values(n, k)
    s_codes = np.zeros_like(idx)
    t_codes = np.zeros_like(idx)
    for x in range(n):
        o = (idx // m ** (n - 1 - x)) % m
        s_codes += opts_s[o] * pv[x]
        t_codes += opts_t[o] * pv[x]
    return s_codes, t_codes
