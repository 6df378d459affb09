"""Shared oracles and fixtures.

Oracles here are independent of the library's fast paths: exact
rational arithmetic over Fraction for probabilities and orderings,
mpmath at 60 digits for logarithmic measures.  Tests derive expected
values from these before trusting library output.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import pytest
from mpmath import mp, mpf

mp.dps = 60


def mp_log2(x):
    return mp.log(mpf(x)) / mp.log(2)


def mp_entropy(probs) -> float:
    return float(-mp.fsum(mpf(p) * mp_log2(p) for p in probs if p > 0))


def mp_cross_entropy(p, q) -> float:
    return float(-mp.fsum(mpf(x) * mp_log2(y) for x, y in zip(p, q) if x > 0))


def mp_divergence(p, q) -> float:
    return float(
        mp.fsum(mpf(x) * (mp_log2(x) - mp_log2(y)) for x, y in zip(p, q) if x > 0)
    )


def exact_string_prob(sym: tuple[int, ...], q) -> Fraction:
    """Exact probability of one string; q entries converted from float."""
    out = Fraction(1)
    for s in sym:
        out *= Fraction(q.probs[s])
    return out


def sorted_support_strings(q, n: int) -> list[tuple[int, ...]]:
    """Canonical-order oracle: all support strings sorted by exactly
    computed descending probability, ties by ascending packed value."""
    letters = q.support
    out = []
    for sym in itertools.product(letters, repeat=n):
        out.append((-exact_string_prob(sym, q), sym))
    out.sort()
    return [sym for _, sym in out]


def binom_prefix_exact(n: int, q: float, k: int):
    """(sum_{i<=k} C(n,i), its Q-mass at 60 digits) for the light tail."""
    total = 0
    mass = mpf(0)
    for i in range(k + 1):
        c = math.comb(n, i)
        total += c
        mass += c * mpf(q) ** i * (1 - mpf(q)) ** (n - i)
    return total, float(mass)


@pytest.fixture(scope="session")
def fig5_data():
    from ildcode.analysis import fig5_rows

    return fig5_rows()
