"""Greedy one-to-many partitions of a codebook and exact decoding.

A partition splits the codebook S into K disjoint sets S_1..S_K; the
encoder hides rng bits by picking a member of S_w, the decoder
recovers w from the member alone.  Two greedy builders are provided
(most-likely-first and least-likely-first load balancing) plus the
round-robin form of LLF, which needs no stored table and works on
parametric books of any size.

Set indices w are 1-based in every public signature; internal arrays
are 0-based.  Accumulated probabilities are tracked in plain floats
while building and recomputed exactly per order group afterwards.
"""

from __future__ import annotations

import heapq
import json
import math
from array import array
from bisect import bisect_right
from dataclasses import dataclass
from math import fsum, log2
from typing import Iterator

from .bounds import BoundPair
from .codebook import EXPLICIT_CAP, Codebook, build_full_support
from .errors import DomainError, RangeError, SizeLimit
from .info import Pmf, SymbolString

_LN2 = math.log(2.0)
_TOL = 1e-9


@dataclass(eq=False)
class Partition:
    """An immutable K-way split of a codebook in canonical rank space.

    assignment maps rank -> 0-based set index for the greedy builders
    and is None for round-robin (where w follows from the rank
    formula).  class_counts[w][g] counts members of set w+1 inside
    order group g, which makes set probabilities exactly recomputable.
    """

    book: Codebook
    K: int
    algo: str
    set_probs: tuple[float, ...]
    class_counts: tuple[tuple[int, ...], ...]
    assignment: array | None = None
    delta_history: tuple[float, ...] | None = None

    def set_index(self, rank: int) -> int:
        """1-based set index of the member at the given rank."""
        if rank < 0 or rank >= self.book.size:
            raise RangeError("rank outside the codebook")
        if self.assignment is not None:
            return self.assignment[rank] + 1
        return (self.book.size - 1 - rank) % self.K + 1


def _check_k(book: Codebook, K: int) -> None:
    if K < 1 or K > book.size:
        raise RangeError(f"K must lie in [1, {book.size}]")


def _exact_set_probs(
    book: Codebook, counts: list[list[int]]
) -> tuple[float, ...]:
    probs = tuple(
        fsum(g.mass(c) for g, c in zip(book.groups, row) if c) for row in counts
    )
    if abs(fsum(probs) - book.q_total) > 1e-10:
        raise AssertionError("set probabilities fail to add up to q_S")
    return probs


class _MaxTracker:
    # lazy max-heap over set loads; stale entries are skipped on read
    def __init__(self, K: int):
        self.loads = [0.0] * K
        self.heap = [(-0.0, i) for i in range(K)]

    def update(self, idx: int, load: float) -> None:
        self.loads[idx] = load
        heapq.heappush(self.heap, (-load, idx))

    def peek(self) -> float:
        while -self.heap[0][0] != self.loads[self.heap[0][1]]:
            heapq.heappop(self.heap)
        return -self.heap[0][0]


def mlf_partition(book: Codebook, K: int) -> Partition:
    """Most-likely-first: walk ranks in canonical (descending) order,
    put each string into the currently lightest set, lowest index on
    ties."""
    _check_k(book, K)
    if book.size > EXPLICIT_CAP:
        raise SizeLimit("greedy partitioning needs an explicitly walkable book")
    loads = [0.0] * K
    lo = [(0.0, i) for i in range(K)]
    hi = _MaxTracker(K)
    assignment = array("i", bytes(array("i").itemsize * book.size))
    counts = [[0] * len(book.groups) for _ in range(K)]
    deltas = [0.0]
    for gi, g in enumerate(book.groups):
        for r in range(g.offset, g.offset + g.size):
            while lo[0][0] != loads[lo[0][1]]:
                heapq.heappop(lo)
            w0 = lo[0][1]
            loads[w0] += g.prob
            heapq.heappush(lo, (loads[w0], w0))
            hi.update(w0, loads[w0])
            assignment[r] = w0
            counts[w0][gi] += 1
            while lo[0][0] != loads[lo[0][1]]:
                heapq.heappop(lo)
            deltas.append(hi.peek() - lo[0][0])
    return Partition(
        book=book,
        K=K,
        algo="mlf",
        set_probs=_exact_set_probs(book, counts),
        class_counts=tuple(tuple(row) for row in counts),
        assignment=assignment,
        delta_history=tuple(deltas),
    )


def llf_partition(book: Codebook, K: int) -> Partition:
    """Least-likely-first: walk ranks in ascending-probability order,
    put each string into the lightest set; tied sets are served
    first-in-first-out, so a freshly loaded set goes behind the sets
    it now ties with."""
    _check_k(book, K)
    if book.size > EXPLICIT_CAP:
        raise SizeLimit("greedy partitioning needs an explicitly walkable book")
    loads = [0.0] * K
    queue = [(0.0, i, i) for i in range(K)]
    hi = _MaxTracker(K)
    seq = K
    assignment = array("i", bytes(array("i").itemsize * book.size))
    counts = [[0] * len(book.groups) for _ in range(K)]
    deltas = [0.0]
    for gi in range(len(book.groups) - 1, -1, -1):
        g = book.groups[gi]
        for r in range(g.offset + g.size - 1, g.offset - 1, -1):
            load, _, w0 = heapq.heappop(queue)
            loads[w0] = load + g.prob
            heapq.heappush(queue, (loads[w0], seq, w0))
            seq += 1
            hi.update(w0, loads[w0])
            assignment[r] = w0
            counts[w0][gi] += 1
            deltas.append(hi.peek() - queue[0][0])
    size = book.size
    for r in range(size):
        if assignment[r] != (size - 1 - r) % K:
            raise AssertionError("greedy LLF left the round-robin pattern")
    return Partition(
        book=book,
        K=K,
        algo="llf",
        set_probs=_exact_set_probs(book, counts),
        class_counts=tuple(tuple(row) for row in counts),
        assignment=assignment,
        delta_history=tuple(deltas),
    )


def llf_round_robin(book: Codebook, K: int) -> Partition:
    """Table-free LLF: the i-th least likely string goes to set
    ((i-1) mod K) + 1, i.e. w(rank) = ((|S|-1-rank) mod K) + 1.

    Works on parametric books without materializing members; per-set
    counts inside each order group follow from the residue window of
    its rank range.
    """
    _check_k(book, K)
    if K > EXPLICIT_CAP:
        raise SizeLimit("too many sets to account for individually")
    size = book.size
    counts = [[0] * len(book.groups) for _ in range(K)]
    for gi, g in enumerate(book.groups):
        t0 = (size - 1 - g.offset) % K
        base, rem = divmod(g.size, K)
        for c in range(K):
            counts[c][gi] = base + (1 if (t0 - c) % K < rem else 0)
    return Partition(
        book=book,
        K=K,
        algo="llf_rr",
        set_probs=_exact_set_probs(book, counts),
        class_counts=tuple(tuple(row) for row in counts),
    )


def decode(part: Partition, a: SymbolString) -> int:
    """Recover the message index from a transmitted member.

    MLF needs its stored table; LLF and round-robin share the rank
    formula, so no table is consulted.
    """
    r = part.book.rank(a)
    if part.algo == "mlf":
        return part.assignment[r] + 1
    return (part.book.size - 1 - r) % part.K + 1


def set_members(
    part: Partition, w: int
) -> Iterator[tuple[SymbolString, float]]:
    """Members of S_w with their log2 probabilities, ascending rank."""
    if w < 1 or w > part.K:
        raise RangeError(f"w must lie in [1, {part.K}]")
    book = part.book
    if part.assignment is not None:
        target = w - 1
        for r in range(book.size):
            if part.assignment[r] == target:
                a = book.unrank(r)
                yield a, book.log2_string_prob(a)
    else:
        start = (book.size - w) % part.K
        for r in range(start, book.size, part.K):
            a = book.unrank(r)
            yield a, book.log2_string_prob(a)


@dataclass(frozen=True)
class ParetoMove:
    """A single-string move that strictly lowers D(U_K || set probs)."""

    rank: int
    from_w: int
    to_w: int


def pareto_check(part: Partition) -> tuple[bool, ParetoMove | None]:
    """True iff no single-string move strictly improves the partition.

    Moving a string of probability p from S_v to S_u helps exactly
    when q_v - q_u > p; only moves clearing a 1e-12 float guard are
    reported.
    """
    if part.book.size > EXPLICIT_CAP:
        raise SizeLimit("move search needs an explicitly walkable book")
    qs = part.set_probs
    order = sorted(range(part.K), key=lambda i: (qs[i], i))
    low1 = order[0]
    low2 = order[1] if part.K > 1 else None
    for gi, g in enumerate(part.book.groups):
        for r in range(g.offset, g.offset + g.size):
            v = part.set_index(r) - 1
            u = low1 if v != low1 else low2
            if u is None:
                continue
            if qs[v] - qs[u] > g.prob + 1e-12:
                return False, ParetoMove(rank=r, from_w=v + 1, to_w=u + 1)
    return True, None


def _prob_at_rank(book: Codebook, r: int) -> float:
    gi = bisect_right(book._offsets, r) - 1
    return book.groups[gi].prob


def delta_bounds_check(part: Partition) -> bool:
    """Check the greedy imbalance guarantees along the recorded run.

    MLF keeps Delta_i <= p_1 throughout; LLF keeps Delta_i <= p_{K-i+1}
    where p_j means p_1 for j < 1 and 0 for j past the list.
    """
    if part.delta_history is None:
        raise DomainError("this partition recorded no imbalance history")
    book = part.book
    p1 = book.max_member_prob
    if part.algo == "mlf":
        return all(d <= p1 + _TOL for d in part.delta_history)
    size = book.size
    for i, d in enumerate(part.delta_history):
        j = part.K - i + 1
        if j < 1:
            bound = p1
        elif j > size:
            bound = 0.0
        else:
            bound = _prob_at_rank(book, j - 1)
        if d > bound + _TOL:
            return False
    return True


def set_prob_bounds(part: Partition) -> BoundPair:
    """Greedy balance window: every q_{S_w} lies in q_S/K +- p_1."""
    center = part.book.q_total / part.K
    p1 = part.book.max_member_prob
    return BoundPair(center - p1, center + p1)


@dataclass(frozen=True)
class OneBitWorstCase:
    """Divergence guarantee for a K=2 full-support partition.

    bound is the exact worst-case value, relaxed its simpler upper
    estimate, achieved the divergence an actual LLF partition reached
    (None when the check is skipped at large n).
    """

    bound: float
    relaxed: float
    achieved: float | None


def one_bit_worst_case(q: Pmf, n: int) -> OneBitWorstCase:
    """Worst-case D(U_2 || set probs) when encoding one bit at length n.

    The imbalance of a two-set LLF partition of the full-support book
    is at most q_max^n, giving D <= 0.5*log2(1/(1 - q_max^(2n))); the
    relaxed form replaces the log with its linear bound.
    """
    if n < 1:
        raise DomainError("n must be at least 1")
    x = q.max_prob ** (2 * n)
    if x >= 1.0:
        return OneBitWorstCase(math.inf, math.inf, None)
    bound = 0.5 * log2(1.0 / (1.0 - x))
    relaxed = x / (2.0 * _LN2 * (1.0 - x))
    achieved = None
    if n <= 20:
        book = build_full_support(q, n)
        if book.size >= 2:
            part = llf_round_robin(book, 2)
            achieved = fsum(
                0.5 * log2(0.5 / (p / book.q_total)) for p in part.set_probs
            )
            if achieved > bound + _TOL:
                raise AssertionError("LLF exceeded the one-bit worst case")
    return OneBitWorstCase(bound, relaxed, achieved)


def _runs(part: Partition) -> list[list[int]]:
    runs: list[list[int]] = []
    for r in range(part.book.size):
        w = part.set_index(r)
        if runs and runs[-1][2] == w and runs[-1][1] == r:
            runs[-1][1] = r + 1
        else:
            runs.append([r, r + 1, w])
    return runs


def partition_to_json(part: Partition) -> str:
    """Dump {"algo", "K", "set_probs", "assignment_runs"} as JSON.

    assignment_runs run-length-encodes rank space as [start, end, w)
    triples with end exclusive.
    """
    if part.book.size > EXPLICIT_CAP:
        raise SizeLimit("partition too large to dump rank runs")
    return json.dumps(
        {
            "algo": part.algo,
            "K": part.K,
            "set_probs": list(part.set_probs),
            "assignment_runs": _runs(part),
        }
    )
