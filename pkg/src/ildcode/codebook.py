"""Canonical ordered codebooks and exact combinatorial ranking.

A codebook is a subset S of length-n strings kept in *canonical
order*: descending string probability under Q^n, ties broken by
ascending packed integer value (equivalently lexicographic symbol
order).  Equal-probability strings always share one contiguous run,
even when they come from different letter-count types, so the order is
a total order independent of how the book was built.

Parametric books (full support, weight threshold, typical set) store
only their admitted types and work combinatorially, which keeps
rank/unrank and probability accounting exact at block lengths in the
thousands.  Explicit books store the sorted member list and are capped
at 2^24 strings.
"""

from __future__ import annotations

import heapq
import itertools
import json
import math
from bisect import bisect_right
from dataclasses import dataclass, field, replace
from math import fsum, log2
from typing import Iterable, Iterator

from .errors import (
    DomainError,
    EmptySet,
    EmptyTypicalSet,
    NotInCodebook,
    RangeError,
    SizeLimit,
    SupportViolation,
)
from .info import (
    Pmf,
    SymbolString,
    exp2_or_inf,
    iter_types,
    mass_of,
    multinomial,
    type_is_typical,
    type_of,
)

EXPLICIT_CAP = 1 << 24
_TYPE_CAP = 2_000_000


def type_sort_key(counts: tuple[int, ...], q: Pmf) -> float:
    """log2 per-string probability of a type, summed over sorted terms.

    Counts are pooled per distinct letter probability before taking
    c*log2(y), so any two types whose strings have the same multiset of
    probability factors produce bit-identical keys.  Without pooling,
    redistributing a count across equal-probability letters (3*t vs
    t + 2*t) shifts the result by an ulp and splits one genuine order
    group in two.
    """
    pooled: dict[float, int] = {}
    for c, y in zip(counts, q.probs):
        if c > 0:
            if y <= 0.0:
                raise SupportViolation("type uses a zero-mass letter")
            pooled[y] = pooled.get(y, 0) + c
    terms = sorted(c * log2(y) for y, c in pooled.items())
    return fsum(terms)


def multiset_strings(counts: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    """All strings with the given letter counts, ascending lex order."""
    arr: list[int] = []
    for letter, c in enumerate(counts):
        arr.extend([letter] * c)
    while True:
        yield tuple(arr)
        i = len(arr) - 2
        while i >= 0 and arr[i] >= arr[i + 1]:
            i -= 1
        if i < 0:
            return
        j = len(arr) - 1
        while arr[j] <= arr[i]:
            j -= 1
        arr[i], arr[j] = arr[j], arr[i]
        arr[i + 1 :] = reversed(arr[i + 1 :])


def _count_below(sym: tuple[int, ...], counts: tuple[int, ...]) -> int:
    # Number of strings of this exact type lexicographically below sym.
    rem = list(counts)
    n_rem = sum(rem)
    m = multinomial(counts)
    below = 0
    for s in sym:
        for b in range(s):
            if rem[b] > 0:
                below += m * rem[b] // n_rem
        if rem[s] == 0:
            return below
        m = m * rem[s] // n_rem
        rem[s] -= 1
        n_rem -= 1
    return below


@dataclass(frozen=True)
class OrderGroup:
    """A maximal run of equal-probability strings in canonical order."""

    log2_prob: float
    prob: float
    types: tuple[tuple[int, ...], ...]
    type_sizes: tuple[int, ...]
    size: int
    offset: int

    def mass(self, count: int | None = None) -> float:
        """Total probability of `count` members (default: all)."""
        return mass_of(self.size if count is None else count, self.log2_prob)


@dataclass(frozen=True, eq=False)
class Codebook:
    q: Pmf
    n: int
    kind: str
    groups: tuple[OrderGroup, ...]
    size: int
    q_total: float
    k: int | None = None
    eps: float | None = None
    light_letter: int | None = None
    type_counts: tuple[int, ...] | None = None
    explicit_members: tuple[tuple[int, ...], ...] | None = None
    _offsets: tuple[int, ...] = field(default=(), repr=False)
    _group_index: dict = field(default_factory=dict, repr=False)
    _rank_map: dict = field(default_factory=dict, repr=False)

    # -- probabilities ------------------------------------------------

    @property
    def q_S(self) -> float:
        return self.q_total

    @property
    def max_member_prob(self) -> float:
        return self.groups[0].prob

    @property
    def log2_max_member_prob(self) -> float:
        return self.groups[0].log2_prob

    @property
    def min_member_prob(self) -> float:
        return self.groups[-1].prob

    @property
    def log2_min_member_prob(self) -> float:
        return self.groups[-1].log2_prob

    def log2_string_prob(self, a: SymbolString) -> float:
        self._check_shape(a)
        return type_sort_key(type_of(a, self.q.alphabet_size).counts, self.q)

    # -- membership and ranking ---------------------------------------

    def _check_shape(self, a: SymbolString) -> None:
        if a.n != self.n:
            raise NotInCodebook(f"string length {a.n}, book length {self.n}")
        if any(s >= self.q.alphabet_size for s in a.symbols):
            raise NotInCodebook("letter outside the book's alphabet")

    def __contains__(self, a: SymbolString) -> bool:
        try:
            self.rank(a)
        except NotInCodebook:
            return False
        return True

    def rank(self, a: SymbolString) -> int:
        """0-based position of `a` in canonical order."""
        self._check_shape(a)
        if self.explicit_members is not None:
            r = self._rank_map.get(a.symbols)
            if r is None:
                raise NotInCodebook(f"{a} is not a member")
            return r
        counts = type_of(a, self.q.alphabet_size).counts
        try:
            key = type_sort_key(counts, self.q)
        except SupportViolation:
            raise NotInCodebook(f"{a} uses a zero-mass letter") from None
        gi = self._group_index.get(key)
        if gi is None or counts not in self.groups[gi].types:
            raise NotInCodebook(f"{a} is not a member")
        g = self.groups[gi]
        below = sum(_count_below(a.symbols, t) for t in g.types)
        r = g.offset + below
        # prefix books truncate their last group
        if below >= g.size or r >= self.size:
            raise NotInCodebook(f"{a} is beyond the book's cutoff")
        return r

    def unrank(self, r: int) -> SymbolString:
        """Inverse of rank."""
        if r < 0 or r >= self.size:
            raise NotInCodebook(f"rank {r} outside [0, {self.size})")
        if self.explicit_members is not None:
            return SymbolString(self.explicit_members[r])
        gi = bisect_right(self._offsets, r) - 1
        g = self.groups[gi]
        r_in = r - g.offset
        # one live state per type; a state dies when the chosen prefix
        # leaves its letter budget
        states = [[list(t), multinomial(t)] for t in g.types]
        n_rem = self.n
        out = []
        for _ in range(self.n):
            for b in range(self.q.alphabet_size):
                cnt = 0
                for rem, m in states:
                    if rem[b] > 0:
                        cnt += m * rem[b] // n_rem
                if r_in < cnt:
                    survivors = []
                    for rem, m in states:
                        if rem[b] > 0:
                            m = m * rem[b] // n_rem
                            rem[b] -= 1
                            survivors.append([rem, m])
                    states = survivors
                    out.append(b)
                    n_rem -= 1
                    break
                r_in -= cnt
            else:
                raise AssertionError("rank walk exhausted the alphabet")
        return SymbolString(tuple(out))

    # -- iteration ----------------------------------------------------

    def member_iter(self) -> Iterator[tuple[SymbolString, float]]:
        """Yield (string, probability) in canonical order."""
        if self.explicit_members is not None:
            for g in self.groups:
                for sym in self.explicit_members[g.offset : g.offset + g.size]:
                    yield SymbolString(sym), g.prob
            return
        for g in self.groups:
            streams = [multiset_strings(t) for t in g.types]
            merged = streams[0] if len(streams) == 1 else heapq.merge(*streams)
            for sym in itertools.islice(merged, g.size):
                yield SymbolString(sym), g.prob

    def members(self) -> list[SymbolString]:
        if self.size > EXPLICIT_CAP:
            raise SizeLimit(
                f"{self.size} strings exceed the explicit cap {EXPLICIT_CAP}"
            )
        return [a for a, _ in self.member_iter()]

    # -- serialization ------------------------------------------------

    def to_json(self) -> str:
        doc: dict = {"kind": self.kind, "n": self.n, "pmf": list(self.q.probs)}
        if self.kind in ("prefix", "type_union"):
            # prefix and union books re-serialize as explicit lists
            if self.size > EXPLICIT_CAP:
                raise SizeLimit("book too large to serialize explicitly")
            doc["kind"] = "explicit"
            doc["strings"] = ["".join(str(s) for s in a.symbols) for a, _ in self.member_iter()]
            return json.dumps(doc)
        if self.k is not None:
            doc["k"] = self.k
        if self.eps is not None:
            doc["eps"] = self.eps
        if self.type_counts is not None:
            doc["counts"] = list(self.type_counts)
        if self.explicit_members is not None:
            doc["strings"] = [
                "".join(str(s) for s in sym) for sym in self.explicit_members
            ]
        return json.dumps(doc)


def _build_from_types(
    q: Pmf,
    n: int,
    kind: str,
    types: Iterable[tuple[int, ...]],
    k: int | None = None,
    eps: float | None = None,
    light_letter: int | None = None,
) -> Codebook:
    buckets: dict[float, list[tuple[int, ...]]] = {}
    for counts in types:
        buckets.setdefault(type_sort_key(counts, q), []).append(tuple(counts))
    groups: list[OrderGroup] = []
    offset = 0
    for key in sorted(buckets, reverse=True):
        tlist = tuple(sorted(buckets[key]))
        sizes = tuple(multinomial(t) for t in tlist)
        g_size = sum(sizes)
        groups.append(
            OrderGroup(
                log2_prob=key,
                prob=2.0**key,
                types=tlist,
                type_sizes=sizes,
                size=g_size,
                offset=offset,
            )
        )
        offset += g_size
    q_total = min(fsum(g.mass() for g in groups), 1.0)
    return Codebook(
        q=q,
        n=n,
        kind=kind,
        groups=tuple(groups),
        size=offset,
        q_total=q_total,
        k=k,
        eps=eps,
        light_letter=light_letter,
        _offsets=tuple(g.offset for g in groups),
        _group_index={g.log2_prob: i for i, g in enumerate(groups)},
    )


def _guard_type_count(n: int, support_size: int) -> None:
    n_types = math.comb(n + support_size - 1, support_size - 1)
    if n_types > _TYPE_CAP:
        raise SizeLimit(
            f"{n_types} candidate types exceed the per-type cap {_TYPE_CAP}"
        )


def build_full_support(q: Pmf, n: int) -> Codebook:
    """All strings over the support of q; q_S = 1."""
    if n < 1:
        raise DomainError("n must be at least 1")
    support = q.support
    _guard_type_count(n, len(support))
    types = iter_types(n, q.alphabet_size, support)
    return _build_from_types(q, n, "full_support", types)


def build_weight_threshold(q: Pmf, n: int, k: int) -> Codebook:
    """Binary strings with at most k occurrences of the light letter."""
    if q.alphabet_size != 2:
        raise DomainError("weight-threshold books need a binary pmf")
    light = q.light_index()
    if n < 1 or k < 0 or k > n:
        raise RangeError("need n >= 1 and 0 <= k <= n")
    types = []
    for w in range(k + 1):
        counts = [0, 0]
        counts[light] = w
        counts[1 - light] = n - w
        types.append(tuple(counts))
    return _build_from_types(
        q, n, "weight_threshold", types, k=k, light_letter=light
    )


def enumerate_typical(q: Pmf, n: int, eps: float) -> Codebook:
    """The letter-typical set of Q^n at tolerance eps, as a codebook."""
    if n < 1:
        raise DomainError("n must be at least 1")
    if eps < 0:
        raise DomainError("eps must be non-negative")
    support = q.support
    _guard_type_count(n, len(support))
    types = [
        counts
        for counts in iter_types(n, q.alphabet_size, support)
        if type_is_typical(counts, q, eps)
    ]
    if not types:
        raise EmptyTypicalSet(f"no {n}-type is typical at eps={eps}")
    return _build_from_types(q, n, "typical", types, eps=eps)


def build_type_class(q: Pmf, counts: tuple[int, ...]) -> Codebook:
    """All strings with exactly the given letter counts (one n-type)."""
    counts = tuple(int(c) for c in counts)
    if len(counts) != q.alphabet_size:
        raise DomainError("type length must match the alphabet size")
    if any(c < 0 for c in counts) or sum(counts) < 1:
        raise RangeError("type counts must be non-negative and sum to >= 1")
    n = sum(counts)
    book = _build_from_types(q, n, "type_class", [counts])
    return replace(book, type_counts=counts)


def build_prefix(base: Codebook, size: int) -> Codebook:
    """The `size` most probable strings of `base`, as a codebook."""
    if size < 1 or size > base.size:
        raise RangeError(f"prefix size must lie in [1, {base.size}]")
    if base.explicit_members is not None:
        return build_explicit(
            base.q, [SymbolString(s) for s in base.explicit_members[:size]]
        )
    groups: list[OrderGroup] = []
    remaining = size
    for g in base.groups:
        take = min(g.size, remaining)
        groups.append(
            OrderGroup(g.log2_prob, g.prob, g.types, g.type_sizes, take, g.offset)
        )
        remaining -= take
        if remaining == 0:
            break
    q_total = min(fsum(g.mass() for g in groups), 1.0)
    return Codebook(
        q=base.q,
        n=base.n,
        kind="prefix",
        groups=tuple(groups),
        size=size,
        q_total=q_total,
        _offsets=tuple(g.offset for g in groups),
        _group_index={g.log2_prob: i for i, g in enumerate(groups)},
    )


def build_explicit(q: Pmf, strings: Iterable[SymbolString]) -> Codebook:
    """Codebook from an explicit member list (canonically re-sorted)."""
    syms = [a.symbols for a in strings]
    if not syms:
        raise EmptySet("explicit codebook needs at least one string")
    if len(syms) > EXPLICIT_CAP:
        raise SizeLimit(f"{len(syms)} strings exceed the cap {EXPLICIT_CAP}")
    n = len(syms[0])
    a_size = q.alphabet_size
    keyed = []
    for sym in syms:
        if len(sym) != n:
            raise DomainError("explicit members must share one length")
        counts = type_of(SymbolString(sym), a_size).counts
        keyed.append((-type_sort_key(counts, q), sym))
    if len({sym for _, sym in keyed}) != len(keyed):
        raise DomainError("duplicate strings in explicit codebook")
    keyed.sort()
    ordered = tuple(sym for _, sym in keyed)
    groups: list[OrderGroup] = []
    offset = 0
    i = 0
    while i < len(keyed):
        j = i
        while j < len(keyed) and keyed[j][0] == keyed[i][0]:
            j += 1
        key = -keyed[i][0]
        groups.append(
            OrderGroup(
                log2_prob=key,
                prob=2.0**key,
                types=(),
                type_sizes=(),
                size=j - i,
                offset=offset,
            )
        )
        offset += j - i
        i = j
    q_total = min(fsum(g.mass() for g in groups), 1.0)
    return Codebook(
        q=q,
        n=n,
        kind="explicit",
        groups=tuple(groups),
        size=offset,
        q_total=q_total,
        explicit_members=ordered,
        _offsets=tuple(g.offset for g in groups),
        _group_index={g.log2_prob: i for i, g in enumerate(groups)},
        _rank_map={sym: r for r, sym in enumerate(ordered)},
    )


def from_json(doc: str | dict) -> Codebook:
    """Rebuild a codebook from its JSON description."""
    if isinstance(doc, str):
        doc = json.loads(doc)
    kind = doc.get("kind")
    q = Pmf(tuple(doc["pmf"]))
    if kind == "full_support":
        return build_full_support(q, int(doc["n"]))
    if kind == "weight_threshold":
        return build_weight_threshold(q, int(doc["n"]), int(doc["k"]))
    if kind == "typical":
        return enumerate_typical(q, int(doc["n"]), float(doc["eps"]))
    if kind == "type_class":
        return build_type_class(q, tuple(doc["counts"]))
    if kind == "explicit":
        strings = [SymbolString.from_text(s) for s in doc["strings"]]
        return build_explicit(q, strings)
    raise DomainError(f"unknown codebook kind {kind!r}")
