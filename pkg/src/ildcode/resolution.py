"""Per-message resolution codes: the RNG leg of a one-to-many encoder.

Given a partition set S_w, a resolution code turns B uniform bits into
a member of S_w.  Ideal mode records the exact conditional target
Q^n(.|S_w) (zero divergence, not samplable from finite bits); M-type
mode spreads M = 2^B equiprobable seeds over the members with integer
multiplicities chosen to minimize the divergence to the conditional.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from math import fsum, log2

from .codebook import EXPLICIT_CAP
from .errors import (
    BudgetTooSmall,
    DomainError,
    EmptySet,
    RangeError,
    SizeLimit,
)
from .info import SymbolString
from .partition import Partition, set_members

_LOG2_E = math.log2(math.e)


@dataclass(frozen=True)
class ResolutionCode:
    """Distribution of the transmitted member of one set S_w.

    members are in ascending rank (canonical) order.  cond_probs is
    P(a|w): the exact conditional in ideal mode, m(a)/M in M-type
    mode.  multiplicities and the seed layout exist only for M-type.
    """

    w: int
    mode: str
    members: tuple[SymbolString, ...]
    log2_probs: tuple[float, ...]
    cond_probs: tuple[float, ...]
    B: int | None = None
    M: int | None = None
    multiplicities: tuple[int, ...] | None = None
    seed_cum: tuple[int, ...] | None = None


def _collect(part: Partition, w: int):
    if w < 1 or w > part.K:
        raise RangeError(f"w must lie in [1, {part.K}]")
    size_w = sum(part.class_counts[w - 1])
    if size_w == 0:
        raise EmptySet(f"set {w} has no members")
    if size_w > EXPLICIT_CAP:
        raise SizeLimit(f"set {w} has too many members to materialize")
    members: list[SymbolString] = []
    lps: list[float] = []
    for a, lp in set_members(part, w):
        members.append(a)
        lps.append(lp)
    return tuple(members), tuple(lps)


def _conditional(part: Partition, w: int, lps: tuple[float, ...]):
    shift = log2(part.set_probs[w - 1])
    return tuple(2.0 ** (lp - shift) for lp in lps)


def build_ideal(part: Partition, w: int) -> ResolutionCode:
    """The divergence-optimal choice: P(a|w) = Q^n(a)/q_{S_w} on S_w."""
    members, lps = _collect(part, w)
    return ResolutionCode(
        w=w,
        mode="ideal",
        members=members,
        log2_probs=lps,
        cond_probs=_conditional(part, w, lps),
    )


def _phi(m: int, M: int, log2_r: float) -> float:
    # contribution of one member with multiplicity m to D(m/M || r)
    if m == 0:
        return 0.0
    return (m / M) * (log2(m) - math.log2(M) - log2_r)


def build_mtype(part: Partition, w: int, B: int) -> ResolutionCode:
    """Best M-type approximation of the conditional with M = 2^B seeds.

    Starts from largest-remainder rounding of M * Q^n(.|S_w) and
    applies single-unit exchanges while any strictly decreases
    D(m/M || Q^n(.|S_w)); the objective is separately convex in each
    multiplicity, so the local optimum reached is global.
    """
    if B < 0:
        raise DomainError("the bit budget must be non-negative")
    members, lps = _collect(part, w)
    s = len(members)
    M = 1 << B
    if s > M:
        raise BudgetTooSmall(
            f"set {w} has {s} members but 2^{B} = {M} seeds"
        )
    total = fsum(2.0**lp for lp in lps)
    r = [2.0**lp / total for lp in lps]
    log2_r = [log2(x) for x in r]
    m = [math.floor(M * x) for x in r]
    deficit = M - sum(m)
    order = sorted(range(s), key=lambda i: (-(M * r[i] - m[i]), i))
    for i in order[:deficit]:
        m[i] += 1
    for _ in range(M * s + 1):
        best_gain = 0.0
        donor = receiver = -1
        for i in range(s):
            if m[i] >= 1:
                g = _phi(m[i], M, log2_r[i]) - _phi(m[i] - 1, M, log2_r[i])
                if donor < 0 or g > best_gain:
                    best_gain = g
                    donor = i
        best_cost = 0.0
        for j in range(s):
            c = _phi(m[j] + 1, M, log2_r[j]) - _phi(m[j], M, log2_r[j])
            if receiver < 0 or c < best_cost:
                best_cost = c
                receiver = j
        if donor < 0 or best_gain - best_cost <= 1e-13:
            break
        m[donor] -= 1
        m[receiver] += 1
    else:
        raise AssertionError("unit-exchange descent failed to settle")
    cum = []
    acc = 0
    for x in m:
        acc += x
        cum.append(acc)
    return ResolutionCode(
        w=w,
        mode="mtype",
        members=members,
        log2_probs=lps,
        cond_probs=tuple(x / M for x in m),
        B=B,
        M=M,
        multiplicities=tuple(m),
        seed_cum=tuple(cum),
    )


def rc_divergence(rc: ResolutionCode, part: Partition, w: int | None = None) -> float:
    """Exact D(P(.|w) || Q^n(.|S_w)) in bits."""
    if w is None:
        w = rc.w
    if w != rc.w:
        raise DomainError("resolution code belongs to a different set")
    shift = log2(part.set_probs[w - 1])
    return fsum(
        p * (log2(p) - (lp - shift))
        for p, lp in zip(rc.cond_probs, rc.log2_probs)
        if p > 0.0
    )


@dataclass(frozen=True)
class RcBound:
    """Upper bound on the M-type divergence: log and linear forms."""

    value: float
    relaxed: float
    set_size: int
    q_min: float


def rc_bound(part: Partition, w: int, B: int) -> RcBound:
    """log2(1 + |S_w| / (2 q_min M^2)) with q_min the smallest
    conditional probability in S_w; valid whenever |S_w| <= 2^B."""
    if w < 1 or w > part.K:
        raise RangeError(f"w must lie in [1, {part.K}]")
    if B < 0:
        raise DomainError("the bit budget must be non-negative")
    counts = part.class_counts[w - 1]
    size_w = sum(counts)
    if size_w == 0:
        raise EmptySet(f"set {w} has no members")
    min_lp = min(
        g.log2_prob for g, c in zip(part.book.groups, counts) if c > 0
    )
    # stay in the log domain: 2^log2_q_min underflows to 0 long before
    # log2_x stops being meaningful
    log2_q_min = min_lp - log2(part.set_probs[w - 1])
    q_min = 2.0**log2_q_min
    log2_x = log2(size_w) - 1.0 - log2_q_min - 2.0 * B
    if log2_x > 1023.0:
        return RcBound(math.inf, math.inf, size_w, q_min)
    x = 2.0**log2_x
    return RcBound(math.log1p(x) * _LOG2_E, x * _LOG2_E, size_w, q_min)


def sample(rc: ResolutionCode, seed: int) -> SymbolString:
    """Map a B-bit seed to a member via contiguous multiplicity blocks."""
    if rc.mode != "mtype":
        raise DomainError("only M-type codes map seed bits to members")
    if seed < 0 or seed >= rc.M:
        raise RangeError(f"seed must lie in [0, {rc.M})")
    return rc.members[bisect_right(rc.seed_cum, seed)]


@dataclass(frozen=True)
class RngRates:
    """Entropy rate actually drawn vs raw bit rate spent, per symbol."""

    h_rng: float
    r_rng: float | None


def rates(rcs) -> RngRates:
    """h_rng = (1/n) average member entropy; r_rng = B/n (None if any
    code is ideal).  h_rng never exceeds r_rng for M-type codes."""
    rcs = tuple(rcs)
    if not rcs:
        raise DomainError("need at least one resolution code")
    n = len(rcs[0].members[0].symbols)
    k = len(rcs)
    h = fsum(
        -p * log2(p) for rc in rcs for p in rc.cond_probs if p > 0.0
    ) / (n * k)
    if any(rc.mode != "mtype" for rc in rcs):
        return RngRates(h, None)
    bs = {rc.B for rc in rcs}
    if len(bs) != 1:
        raise DomainError("mixed bit budgets across messages")
    r = bs.pop() / n
    if h > r + 1e-9:
        raise AssertionError("entropy rate exceeded the bit rate")
    return RngRates(h, r)
