"""Roots of unity from two short factor tables.

``zeta_N^k`` for ``0 <= k < m`` is served as ``H[k // s] * L[k % s]`` with
``s = isqrt(m)``, ``H[a] = zeta_N^(a*s)`` and ``L[b] = zeta_N^b``, so a table
costs O(sqrt(m)) complex words.  Entries are evaluated directly in extended
precision and rounded once; no recurrence is involved.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

_TWO_PI = 8 * np.arctan(np.longdouble(1))


def _unit_roots(N, exponents):
    k = np.asarray(exponents, dtype=np.int64) % N
    theta = _TWO_PI * k.astype(np.longdouble) / N
    out = np.empty(k.shape, np.complex128)
    out.real = np.cos(theta)
    out.imag = np.sin(theta)
    return out


@dataclass(frozen=True, eq=False)
class ZetaTable:
    N: int
    m: int
    s: int
    H: np.ndarray
    L: np.ndarray

    def __call__(self, k):
        return zeta(self, k)

    def powers(self, n=None):
        """``zeta_N^k`` for ``k = 0..n-1`` (default ``n = m``) as an array."""
        n = self.m if n is None else n
        if not 0 <= n <= self.m:
            raise ValueError(f"table serves exponents below {self.m}, asked for {n}")
        return np.outer(self.H, self.L).ravel()[:n]

    def __eq__(self, other):
        if not isinstance(other, ZetaTable):
            return NotImplemented
        return (self.N, self.m, self.s) == (other.N, other.m, other.s) and \
            np.array_equal(self.H, other.H) and np.array_equal(self.L, other.L)

    __hash__ = None


def build_zeta_table(N, m):
    if N < 1 or m < 1:
        raise ValueError(f"need N >= 1 and m >= 1, got N={N}, m={m}")
    if m > N:
        raise ValueError(f"m={m} exceeds N={N}")
    s = math.isqrt(m)
    H = _unit_roots(N, s * np.arange(-(-m // s)))
    L = _unit_roots(N, np.arange(s))
    H.setflags(write=False)
    L.setflags(write=False)
    return ZetaTable(N, m, s, H, L)


@lru_cache(maxsize=256)
def cached_table(N, m):
    return build_zeta_table(N, m)


def zeta(table, k):
    """``zeta_N^k`` for integer (or integer array) ``k`` in ``[0, m)``.

    Negative exponents are the caller's job: ``zeta_N^-k = conj(zeta_N^k)``.
    """
    k = np.asarray(k)
    if k.dtype.kind not in "iu":
        raise TypeError("exponent must be an integer")
    if k.size and (k.min() < 0 or k.max() >= table.m):
        raise ValueError(f"exponent out of range [0, {table.m})")
    out = table.H[k // table.s] * table.L[k % table.s]
    return out[()] if out.ndim == 0 else out
