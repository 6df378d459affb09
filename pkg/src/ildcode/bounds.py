"""Inequality toolbox: entropy continuity, Pinsker, tail and set-size
bounds, and exact binomial/multinomial identities.

Every bound returns its hypothesis status instead of throwing, because
parameter sweeps routinely cross hypothesis boundaries.  Values that
would overflow a float saturate to inf (only relevant for block
lengths in the thousands; exact integer paths exist elsewhere for
those).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import log2

from .errors import DomainError, RangeError
from .info import Pmf, entropy, exp2_or_inf as _exp2, l1_distance

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class BoundPair:
    lower: float
    upper: float
    applicable: bool = True


@dataclass(frozen=True)
class OneSidedBound:
    value: float
    applicable: bool


@dataclass(frozen=True)
class EntropyDiffBounds:
    """Two upper bounds on entropy differences driven by the l1 gap.

    log_form bounds |H(P) - H(Q)| and needs d1 <= 1/2.  linear_form
    bounds the signed difference H(P) - H(Q) and needs d1 <= 2*p_min;
    it is effectively linear in d1 for small d1, unlike the log form.
    """

    d1: float
    log_form: OneSidedBound
    linear_form: OneSidedBound


def entropy_diff_bounds(p: Pmf, q: Pmf) -> EntropyDiffBounds:
    d1 = l1_distance(p, q)
    a = p.alphabet_size

    log_val = 0.0 if d1 == 0.0 else -d1 * log2(d1 / a)
    log_bound = OneSidedBound(log_val, d1 <= 0.5)

    p_min, p_max = p.min_prob, p.max_prob
    lin_ok = d1 <= 2.0 * p_min
    if d1 == 0.0:
        lin_val = 0.0
    else:
        den = p_min - d1 / 2.0
        if den <= 0.0:
            lin_val = math.inf
        else:
            lin_val = (d1 / 2.0) * log2((p_max + d1 / 2.0) / den)
    return EntropyDiffBounds(d1, log_bound, OneSidedBound(lin_val, lin_ok))


def pinsker_bounds(p: Pmf, q: Pmf) -> BoundPair:
    """Sandwich on D(P||Q): d1^2/(2 ln2) <= D <= d1^2/(q_min ln2).

    q_min is taken over supp(P) union supp(Q); restricting it to
    supp(P) alone can put the upper side below the exact divergence
    when supp(P) is a strict subset.  Upper side is inf when Q fails
    to dominate P.
    """
    d1 = l1_distance(p, q)
    lower = d1 * d1 / (2.0 * _LN2)
    if any(x > 0.0 and y <= 0.0 for x, y in zip(p.probs, q.probs)):
        return BoundPair(lower, math.inf)
    masses = [y for x, y in zip(p.probs, q.probs) if x > 0.0 or y > 0.0]
    q_min = min(masses)
    upper = math.inf if d1 > 0.0 and q_min <= 0.0 else (
        0.0 if d1 == 0.0 else d1 * d1 / (q_min * _LN2)
    )
    return BoundPair(lower, upper)


def hoeffding_tail(n: int, t: float) -> float:
    """exp(-2 n t^2): tail bound for a mean of n iid [0,1] variables."""
    if n < 1:
        raise DomainError("n must be at least 1")
    if t < 0:
        raise DomainError("t must be non-negative")
    return math.exp(-2.0 * n * t * t)


@dataclass(frozen=True)
class TypicalSetBounds:
    delta: float
    prob: BoundPair
    string_prob: BoundPair
    size: BoundPair


def typical_set_bounds(q: Pmf, n: int, eps: float) -> TypicalSetBounds:
    """Probability, per-string probability, and size sandwiches for the
    letter-typical set of Q^n at tolerance eps.

    delta = 2|A| exp(-2 n p_min^2 eps^2).  The probability lower bound
    1 - delta is left unclamped; it is vacuous when delta >= 1.
    """
    if eps < 0:
        raise DomainError("eps must be non-negative")
    if n < 1:
        raise DomainError("n must be at least 1")
    a = q.alphabet_size
    p_min = q.min_prob
    delta = 2.0 * a * math.exp(-2.0 * n * p_min * p_min * eps * eps)
    h = entropy(q)
    sp_low = _exp2(-n * (1.0 + eps) * h)
    sp_high = _exp2(-n * (1.0 - eps) * h)
    size_low = (1.0 - delta) * _exp2(n * (1.0 - eps) * h)
    size_high = _exp2(n * (1.0 + eps) * h)
    return TypicalSetBounds(
        delta=delta,
        prob=BoundPair(1.0 - delta, 1.0),
        string_prob=BoundPair(sp_low, sp_high),
        size=BoundPair(size_low, size_high),
    )


@dataclass(frozen=True)
class MidpointSums:
    """Both closed forms of sum_{i<=k} C(n,i)(n/2 - i), doubled so all
    three quantities are exact integers."""

    twice_sum: int
    twice_forward: int
    twice_backward: int


def binomial_midpoint_identity(n: int, k: int) -> MidpointSums:
    """sum_{i<=k} C(n,i)(n/2-i) = (k+1)/2 C(n,k+1) = (n-k)/2 C(n,k).

    All three sides are returned times 2 as exact integers; they are
    always equal.
    """
    if n < 1 or k < 0 or k > n:
        raise RangeError("need n >= 1 and 0 <= k <= n")
    twice_sum = sum(math.comb(n, i) * (n - 2 * i) for i in range(k + 1))
    twice_forward = (k + 1) * math.comb(n, k + 1) if k + 1 <= n else 0
    twice_backward = (n - k) * math.comb(n, k)
    return MidpointSums(twice_sum, twice_forward, twice_backward)


def binomial_coefficient_bounds(n: int, k: int) -> BoundPair:
    """2^{nh(p)}/sqrt(8np(1-p)) <= C(n,k) <= 2^{nh(p)}/sqrt(2 pi np(1-p))
    with p = k/n, valid for 0 < k < n."""
    if n < 1 or k <= 0 or k >= n:
        raise RangeError("need 0 < k < n")
    p = k / n
    h = -(p * log2(p) + (1.0 - p) * log2(1.0 - p))
    var = n * p * (1.0 - p)
    lower = _exp2(n * h - 0.5 * log2(8.0 * var))
    upper = _exp2(n * h - 0.5 * log2(2.0 * math.pi * var))
    return BoundPair(lower, upper)


def binomial_prefix_sum_bounds(n: int, k: int) -> BoundPair:
    """alpha*beta*C(n,k) <= sum_{i<=k} C(n,i) <= alpha*C(n,k) for k/n < 1/2,
    with alpha = (1-p+1/n)/(1-2p+1/n) and beta = (1-2p)^2/((1-2p)^2+1/n)."""
    if n < 1 or k < 0 or 2 * k >= n:
        raise RangeError("need 0 <= k < n/2")
    p = k / n
    inv_n = 1.0 / n
    alpha = (1.0 - p + inv_n) / (1.0 - 2.0 * p + inv_n)
    gap2 = (1.0 - 2.0 * p) ** 2
    beta = gap2 / (gap2 + inv_n)
    c = math.comb(n, k)
    if c.bit_length() < 1000:
        return BoundPair(alpha * beta * c, alpha * c)
    log2c = math.log2(c)
    return BoundPair(
        _exp2(log2(alpha) + log2(beta) + log2c), _exp2(log2(alpha) + log2c)
    )


_COUNT_TOL = 1e-9


def multinomial_bounds(p: Pmf, n: int) -> BoundPair:
    """Sandwich on the multinomial coefficient C(n; np_1..np_|A|).

    With c = (prod p_i)^(1/(|A|-1)) and m = |A|-1:
    2^{nH(p)}/(8nc)^{m/2} <= C <= 2^{nH(p)}/(2 pi nc)^{m/2}.
    Every n*p_i must be a positive integer.
    """
    if n < 1:
        raise RangeError("n must be at least 1")
    counts = []
    for x in p.probs:
        c = round(n * x)
        if abs(n * x - c) > _COUNT_TOL or c <= 0:
            raise RangeError("every n*p_i must be a positive integer")
        counts.append(c)
    if sum(counts) != n:
        raise RangeError("type counts must sum to n")
    m = p.alphabet_size - 1
    log2_c_geo = sum(log2(x) for x in p.probs) / m
    h = entropy(p)
    base = log2(n) + log2_c_geo
    lower = _exp2(n * h - 0.5 * m * (log2(8.0) + base))
    upper = _exp2(n * h - 0.5 * m * (log2(2.0 * math.pi) + base))
    return BoundPair(lower, upper)


@dataclass(frozen=True)
class RateRegionReport:
    """Finite-blocklength admissibility of a rate pair (r_info, h_rng).

    The combined rate must stay below H(Q) plus a slack that vanishes
    with the matching tolerance xi, and above H(Q) minus a similar
    slack.  ok flags use a 1e-12 grace so exact boundary cases pass.
    """

    upper_limit: float
    lower_limit: float
    upper_ok: bool
    lower_ok: bool
    upper_slack: float
    lower_slack: float


def rate_region_check(
    r_info: float, h_rng: float, q: Pmf, xi: float
) -> RateRegionReport:
    if not 0.0 <= xi <= 0.5:
        raise DomainError("xi must lie in [0, 1/2]")
    h = entropy(q)
    a = q.alphabet_size
    spread = 0.0 if xi == 0.0 else xi * log2(xi / a)
    upper_limit = h - spread
    lower_limit = h + spread - xi * xi / (2.0 * _LN2)
    total = r_info + h_rng
    upper_slack = upper_limit - total
    lower_slack = total - lower_limit
    return RateRegionReport(
        upper_limit=upper_limit,
        lower_limit=lower_limit,
        upper_ok=upper_slack >= -1e-12,
        lower_ok=lower_slack >= -1e-12,
        upper_slack=upper_slack,
        lower_slack=lower_slack,
    )
