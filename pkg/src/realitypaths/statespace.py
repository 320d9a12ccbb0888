"""Exact and approximate sizes of the container x fact-assignment state space.

For ``m`` containers and ``n`` binary facts there are ``m * 2**n`` states.
Removing the fixed ingress and egress leaves ``N = m * 2**n - 2``
intermediate states, and a path visiting ``k`` of them in order can be
chosen in ``N! / (N - k)!`` ways.

All counts are Python integers, so values such as ``1534!`` are exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "BigCount",
    "StateSpaceParams",
    "APPROX_COEFFICIENT",
    "possible_states",
    "paths_with_k_intermediates",
    "exact_path_count",
    "approx_path_count",
    "format_count",
]

#: 1/1! + 1/2! + 1/3! + 1/4! + 1/5!, i.e. 1.71666...
APPROX_COEFFICIENT = sum(Fraction(1, math.factorial(i)) for i in range(1, 6))


@dataclass(frozen=True)
class StateSpaceParams:
    m: int
    n: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"container count must be positive, got {self.m}")
        if self.n < 0:
            raise ValueError(f"fact count must be non-negative, got {self.n}")

    @property
    def intermediates(self) -> int:
        """``N = m * 2**n - 2``; requires at least two containers."""
        if self.m < 2:
            raise ValueError("path counts need at least 2 containers (ingress and egress)")
        return self.m * 2**self.n - 2


@dataclass(frozen=True)
class BigCount:
    exact: int
    log10: float

    @classmethod
    def of(cls, value: int) -> "BigCount":
        return cls(value, math.log10(value) if value > 0 else float("-inf"))

    def __int__(self):
        return self.exact

    def __str__(self):
        return format_count(self)


def _params(p, n=None) -> StateSpaceParams:
    if isinstance(p, StateSpaceParams):
        return p
    return StateSpaceParams(p, n)


def possible_states(p, n=None) -> BigCount:
    """``m * 2**n``.  Accepts a :class:`StateSpaceParams` or ``(m, n)``."""
    p = _params(p, n)
    return BigCount.of(p.m * 2**p.n)


def paths_with_k_intermediates(p, *args) -> BigCount:
    """Ordered selections of ``k`` distinct intermediate states, ``P(N, k)``.

    Called as ``paths_with_k_intermediates(params, k)`` or
    ``paths_with_k_intermediates(m, n, k)``.
    """
    if isinstance(p, StateSpaceParams):
        (k,) = args
    else:
        n, k = args
        p = StateSpaceParams(p, n)
    big_n = p.intermediates
    if k < 0 or k > big_n:
        raise ValueError(f"k must lie in [0, {big_n}], got {k}")
    return BigCount.of(math.perm(big_n, k))


def exact_path_count(p, n=None) -> BigCount:
    """Sum of ``N! / (N - k)!`` over ``k = 0 .. N``."""
    big_n = _params(p, n).intermediates
    term = total = 1
    for k in range(1, big_n + 1):
        term *= big_n - k + 1
        total += term
    return BigCount.of(total)


def approx_path_count(p, n=None) -> BigCount:
    """``1.71666... * N!``: the five longest path lengths only.

    This drops the full-length ``N!/0!`` term, so it undershoots
    :func:`exact_path_count`, whose leading coefficient tends to ``e``.
    ``N >= 5`` makes the product an integer.
    """
    big_n = _params(p, n).intermediates
    if big_n < 5:
        raise ValueError(f"approximation needs N >= 5, got N = {big_n}")
    value = APPROX_COEFFICIENT * math.factorial(big_n)
    log10 = math.log10(APPROX_COEFFICIENT) + math.lgamma(big_n + 1) / math.log(10)
    return BigCount(int(value), log10)


def format_count(count: BigCount, max_digits: int = 40) -> str:
    """Exact digits up to ``max_digits``, else ``d.dd × 10^E``."""
    if count.exact < 10**max_digits:
        return str(count.exact)
    exponent = math.floor(count.log10)
    mantissa = 10 ** (count.log10 - exponent)
    if round(mantissa, 2) >= 10:
        mantissa /= 10
        exponent += 1
    return f"{mantissa:.2f} × 10^{exponent}"
