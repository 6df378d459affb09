"""Distribution-matching codes and their exact divergences.

A DM maps messages one-to-one onto a codebook S of size K; the figure
of merit is D(U_S || Q^n).  Because string self-information is linear
in the letter counts, this equals n*X(p_bar||Q) - log2 K for *any*
code, where p_bar is the average empirical distribution of the
members.  Four constructions are provided: constant-type codes, their
equal-probability-class enlargement, parallel composition over product
targets, and prefix codes made of the K most probable strings.
"""

from __future__ import annotations

import heapq
import itertools
import math
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from math import fsum, log2

from .bounds import BoundPair
from .codebook import (
    Codebook,
    build_full_support,
    build_prefix,
    build_type_class,
    multiset_strings,
    _build_from_types,
)
from .errors import (
    DimensionMismatch,
    DomainError,
    FactorizationMismatch,
    RangeError,
    SizeLimit,
    SupportViolation,
)
from .info import Pmf, TypeVector, cross_entropy, iter_types, multinomial

_ENUM_CAP = 4_000_000
_UNIQUE_TYPE_CAP = 2_000_000
_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class DmClass:
    """Letters sharing one target probability, with their total count."""

    q_value: float
    letters: tuple[int, ...]
    total: int


@dataclass(frozen=True)
class DmCode:
    """A one-to-one matcher onto a size-K codebook over Q^n.

    p_bar is the average empirical distribution of the members; target
    is the pmf the code was built against.  classes is set for
    equal-probability-class codes, components for parallel ones (whose
    p_bar is the product of component p_bars, which has the right
    marginals for every divergence identity used here).
    """

    kind: str
    book: Codebook | None
    K: int
    n: int
    r_info: float
    p_bar: Pmf
    target: Pmf
    classes: tuple[DmClass, ...] | None = None
    components: tuple["DmCode", ...] | None = None


@dataclass(frozen=True)
class DmDivergence:
    exact: float
    sandwich: BoundPair


def _validate_type(q: Pmf, p_type: TypeVector) -> tuple[int, ...]:
    counts = p_type.counts
    if len(counts) != q.alphabet_size:
        raise DimensionMismatch("type length must match the alphabet size")
    for c, y in zip(counts, q.probs):
        if c > 0 and y <= 0.0:
            raise SupportViolation("type puts mass on a zero-probability letter")
    return counts


def ccdm(q: Pmf, p_type: TypeVector) -> DmCode:
    """Constant-composition DM: all strings of one type, K = multinomial."""
    counts = _validate_type(q, p_type)
    n = p_type.n
    book = build_type_class(q, counts)
    return DmCode(
        kind="ccdm",
        book=book,
        K=book.size,
        n=n,
        r_info=math.log2(book.size) / n,
        p_bar=Pmf(tuple(c / n for c in counts)),
        target=q,
    )


def quantize_type(q: Pmf, n: int) -> TypeVector:
    """Closest n-type to q: floor(n*q_i) plus largest-remainder top-up.

    The greedy pick always meets the l1 guarantee d1(p, q) <= |A|/(2n);
    the exhaustive reassignment below is a safety net that never fires.
    """
    if n < len(q.support):
        raise DomainError("n must be at least the support size")
    floors = [math.floor(n * x) for x in q.probs]
    deficit = n - sum(floors)
    remainders = [n * x - f for x, f in zip(q.probs, floors)]
    order = sorted(range(len(floors)), key=lambda i: (-remainders[i], i))
    counts = list(floors)
    for i in order[:deficit]:
        counts[i] += 1
    target = q.alphabet_size / (2.0 * n)
    if _type_l1(counts, q, n) > target + 1e-12:
        best = None
        for pick in itertools.combinations(range(len(floors)), deficit):
            cand = list(floors)
            for i in pick:
                cand[i] += 1
            d = _type_l1(cand, q, n)
            if best is None or d < best[0]:
                best = (d, cand)
        counts = best[1]
    return TypeVector(tuple(counts))


def _type_l1(counts: list[int], q: Pmf, n: int) -> float:
    return fsum(abs(c / n - x) for c, x in zip(counts, q.probs))


def _composition_sandwich(
    fractions: tuple[float, ...] | list[float],
    refs: tuple[float, ...] | list[float],
    n: int,
) -> BoundPair:
    """Bracket n*D(p||ref) + (n*H(p) - log2 multinomial(n*p)).

    Zero-fraction parts carry no strings and are dropped before the
    multinomial coefficient sandwich is applied; with one part left the
    coefficient is exactly 1 and the bracket collapses.
    """
    pos = [(p, r) for p, r in zip(fractions, refs) if p > 0.0]
    m = len(pos) - 1
    # log2(p) - log2(r) rather than log2(p/r): bit-aligns the m = 0
    # degenerate bracket with the cross-entropy form of the exact value
    n_d = n * fsum(p * (log2(p) - log2(r)) for p, r in pos)
    if m == 0:
        return BoundPair(n_d, n_d)
    log2_c = fsum(log2(p) for p, _ in pos) / m
    base = log2(n) + log2_c
    lower = n_d + 0.5 * m * (log2(_TWO_PI) + base)
    upper = n_d + 0.5 * m * (log2(8.0) + base)
    return BoundPair(lower, upper)


def dm_divergence(code: DmCode, q: Pmf | None = None) -> DmDivergence:
    """Exact D(U_S||Q^n) plus a two-sided growth bracket where valid.

    The bracket is available for constant-type codes (against any
    target), for equal-probability-class codes and parallel codes
    against their build target, and is flagged inapplicable otherwise.
    """
    if q is None:
        q = code.target
    if q.alphabet_size != code.p_bar.alphabet_size:
        raise DimensionMismatch("target pmf must match the code alphabet")
    exact = code.n * cross_entropy(code.p_bar, q) - math.log2(code.K)
    on_target = q.probs == code.target.probs
    if code.kind == "ccdm":
        sandwich = _composition_sandwich(code.p_bar.probs, q.probs, code.n)
    elif code.kind == "unique" and on_target:
        fractions = [cls.total / code.n for cls in code.classes]
        refs = [cls.q_value * len(cls.letters) for cls in code.classes]
        sandwich = _composition_sandwich(fractions, refs, code.n)
    elif code.kind == "pdm" and on_target:
        parts = [dm_divergence(c).sandwich for c in code.components]
        sandwich = BoundPair(
            fsum(p.lower for p in parts),
            fsum(p.upper for p in parts),
            applicable=all(p.applicable for p in parts),
        )
    else:
        sandwich = BoundPair(-math.inf, math.inf, applicable=False)
    return DmDivergence(exact, sandwich)


ccdm_divergence = dm_divergence


def unique_prob_dm(q: Pmf, p_type: TypeVector) -> DmCode:
    """Enlarge a type class to every string of the same probability.

    Letters with equal target probability are interchangeable, so only
    the total occupancy of each equal-probability class is pinned and
    the mix inside a class is free.  With class sizes nu_j and totals
    n*r_j this gives K = multinomial(n; totals) * prod_j nu_j^total_j.
    """
    counts = _validate_type(q, p_type)
    n = p_type.n
    by_value: dict[float, list[int]] = {}
    for i in q.support:
        by_value.setdefault(q.probs[i], []).append(i)
    classes = tuple(
        DmClass(val, tuple(letters), sum(counts[i] for i in letters))
        for val, letters in sorted(by_value.items(), key=lambda kv: kv[1][0])
    )
    k_size = multinomial(tuple(cls.total for cls in classes))
    for cls in classes:
        k_size *= len(cls.letters) ** cls.total
    n_types = 1
    for cls in classes:
        n_types *= math.comb(cls.total + len(cls.letters) - 1, len(cls.letters) - 1)
        if n_types > _UNIQUE_TYPE_CAP:
            raise SizeLimit("equal-probability enlargement has too many types")
    per_class = [
        [tuple(zip(cls.letters, comp)) for comp in iter_types(cls.total, len(cls.letters))]
        for cls in classes
    ]
    types = []
    for combo in itertools.product(*per_class):
        vec = [0] * q.alphabet_size
        for pairs in combo:
            for letter, c in pairs:
                vec[letter] = c
        types.append(tuple(vec))
    book = _build_from_types(q, n, "type_union", types)
    if book.size != k_size:
        raise AssertionError("class-count formula disagrees with enumeration")
    p_bar = [0.0] * q.alphabet_size
    for cls in classes:
        for i in cls.letters:
            p_bar[i] = cls.total / (len(cls.letters) * n)
    return DmCode(
        kind="unique",
        book=book,
        K=k_size,
        n=n,
        r_info=math.log2(k_size) / n,
        p_bar=Pmf(tuple(p_bar)),
        target=q,
        classes=classes,
    )


def _kron(parts: list[tuple[float, ...]]) -> tuple[float, ...]:
    acc = [1.0]
    for probs in parts:
        acc = [x * y for x in acc for y in probs]
    return tuple(acc)


def pdm_compose(
    components: tuple[DmCode, ...] | list[DmCode], target: Pmf | None = None
) -> DmCode:
    """Parallel DM over a product target: K multiplies, divergence adds.

    All components must share one block length.  When an explicit
    product target is given it must factor into the component targets
    (entrywise, tolerance 1e-12).
    """
    comps = tuple(components)
    if not comps:
        raise DomainError("need at least one component")
    n = comps[0].n
    if any(c.n != n for c in comps):
        raise DimensionMismatch("parallel components must share one block length")
    kron_target = _kron([c.target.probs for c in comps])
    if target is not None:
        if target.alphabet_size != len(kron_target) or any(
            abs(x - y) > 1e-12 for x, y in zip(target.probs, kron_target)
        ):
            raise FactorizationMismatch(
                "target does not factor into the component targets"
            )
    else:
        target = Pmf(kron_target)
    k_size = 1
    for c in comps:
        k_size *= c.K
    return DmCode(
        kind="pdm",
        book=None,
        K=k_size,
        n=n,
        r_info=math.log2(k_size) / n,
        p_bar=Pmf(_kron([c.p_bar.probs for c in comps])),
        target=target,
        components=comps,
    )


def optimal_dm(q: Pmf, n: int, K: int) -> DmCode:
    """Minimum-divergence binary DM of size K: the K most probable strings."""
    if q.alphabet_size != 2:
        raise DomainError("optimal DM is implemented for binary targets")
    if n < 1:
        raise DomainError("n must be at least 1")
    base = build_full_support(q, n)
    if K < 1 or K > base.size:
        raise RangeError(f"K must lie in [1, {base.size}]")
    book = build_prefix(base, K)
    zeros = 0
    for g in book.groups:
        if len(g.types) == 1:
            zeros += g.size * g.types[0][0]
        elif g.size == sum(g.type_sizes):
            zeros += sum(s * t[0] for s, t in zip(g.type_sizes, g.types))
        else:
            # equiprobable types interleave, so the cut is per string
            if g.size > _ENUM_CAP:
                raise SizeLimit("partial tie group too large to average")
            merged = heapq.merge(*(multiset_strings(t) for t in g.types))
            zeros += sum(
                sym.count(0) for sym in itertools.islice(merged, g.size)
            )
    p0 = Fraction(zeros, n * K)
    return DmCode(
        kind="optimal",
        book=book,
        K=K,
        n=n,
        r_info=math.log2(K) / n,
        p_bar=Pmf((float(p0), float(1 - p0))),
        target=q,
    )


@dataclass(frozen=True)
class ThresholdEntry:
    """One weight-threshold code: size, exact light fraction, divergence.

    sandwich_ok reports the exact rational check of the closeness
    bracket 0 <= k/n - p_bar <= (1-k/n)/(n(1-2k/n)) + 1/(2n^2(1-2k/n)^2),
    which applies for k < n/2 (None otherwise).
    """

    k: int
    K: int
    p_bar_exact: Fraction
    p_bar: float
    divergence: float
    sandwich_ok: bool | None


def threshold_stats(q: Pmf, n: int) -> list[ThresholdEntry]:
    """All weight-threshold codes for k = 0..n with exact accounting."""
    if q.alphabet_size != 2:
        raise DomainError("weight-threshold stats need a binary pmf")
    if n < 1:
        raise DomainError("n must be at least 1")
    light = q.light_index()
    q_light = q.probs[light]
    q_heavy = q.probs[1 - light]
    if q_light <= 0.0:
        raise DomainError("the light letter must have positive probability")
    entries = []
    size = 0
    light_total = 0
    for k in range(n + 1):
        c = math.comb(n, k)
        size += c
        light_total += k * c
        p_bar = Fraction(light_total, n * size)
        alt = Fraction(1, 2) - (Fraction(1, 2) - Fraction(k, 2 * n)) * Fraction(
            c, size
        )
        if p_bar != alt:
            raise AssertionError("light-fraction closed form disagrees")
        pb = float(p_bar)
        div = n * (-pb * log2(q_light) - (1.0 - pb) * log2(q_heavy)) - math.log2(
            size
        )
        ok = None
        if 2 * k < n:
            kappa = Fraction(k, n)
            gap = kappa - p_bar
            rhs = (1 - kappa) / (n * (1 - 2 * kappa)) + Fraction(1, 2) / (
                n * (1 - 2 * kappa)
            ) ** 2
            ok = 0 <= gap <= rhs
        entries.append(ThresholdEntry(k, size, p_bar, pb, div, ok))
    return entries


@dataclass(frozen=True)
class SweepResult:
    """Divergence of the optimal binary DM for each requested size.

    p1 is the light fraction at which the per-letter cross-entropy
    against the target reaches one bit; the divergence of the optimal
    code approaches n*X(p1-type||Q) - n as K -> 2^n.
    """

    rows: list[tuple[int, float]]
    thresholds: list[ThresholdEntry]
    p1: float


def optimal_dm_sweep(
    q: Pmf, n: int, ks: list[int] | None = None
) -> SweepResult:
    """Exact optimal-DM divergence over many sizes via group prefix sums."""
    if q.alphabet_size != 2:
        raise DomainError("the sweep is implemented for binary targets")
    if n < 1:
        raise DomainError("n must be at least 1")
    if n > 20:
        raise SizeLimit("sweeps above n = 20 enumerate too many sizes")
    base = build_full_support(q, n)
    cum_size = [0]
    cum_info = [0.0]
    for g in base.groups:
        cum_size.append(cum_size[-1] + g.size)
        cum_info.append(cum_info[-1] + g.size * (-g.log2_prob))
    if ks is None:
        ks = list(range(1, base.size + 1))
    rows = []
    for K in ks:
        if K < 1 or K > base.size:
            raise RangeError(f"K must lie in [1, {base.size}]")
        i = bisect_left(cum_size, K)
        take = K - cum_size[i - 1]
        sel = cum_info[i - 1] + take * (-base.groups[i - 1].log2_prob)
        rows.append((K, sel / K - math.log2(K)))
    if q.probs[0] == q.probs[1]:
        return SweepResult(rows, [], 0.5)
    light = q.light_index()
    q_light = q.probs[light]
    q_heavy = q.probs[1 - light]
    thresholds = threshold_stats(q, n) if q_light > 0.0 else []
    p1 = (
        (1.0 + log2(q_heavy)) / (log2(q_heavy) - log2(q_light))
        if q_light > 0.0
        else 0.0
    )
    return SweepResult(rows, thresholds, p1)
