"""Exact information measures and string/type machinery.

All scalar measures are in bits (log base 2) with the convention
0*log2(0) = 0.  Probability masses of whole weight/type classes are
accumulated per type, switching to the log domain when counts exceed
float range, so block lengths up to 10^4 stay representable.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from math import fsum, log2

from .errors import DimensionMismatch, DomainError, SupportViolation

_SUM_TOL = 1e-12


@dataclass(frozen=True)
class Pmf:
    """Probability mass function over letters 0 .. alphabet_size-1.

    Entries must be non-negative and sum to 1 within 1e-12; at least
    two letters.  Zero entries are allowed (letters outside the
    support).
    """

    probs: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "probs", tuple(float(x) for x in self.probs))
        if len(self.probs) < 2:
            raise DomainError("a pmf needs at least two letters")
        if any(x < 0.0 for x in self.probs):
            raise DomainError("pmf entries must be non-negative")
        total = fsum(self.probs)
        if abs(total - 1.0) > _SUM_TOL:
            raise DomainError(f"pmf entries must sum to 1 within 1e-12, got {total!r}")

    @classmethod
    def binary(cls, q: float) -> "Pmf":
        """Binary pmf (q, 1-q); letter 0 carries probability q."""
        return cls((q, 1.0 - q))

    @classmethod
    def uniform(cls, k: int) -> "Pmf":
        return cls((1.0 / k,) * k)

    @property
    def alphabet_size(self) -> int:
        return len(self.probs)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, x in enumerate(self.probs) if x > 0.0)

    @property
    def min_prob(self) -> float:
        """Smallest probability over the support."""
        return min(x for x in self.probs if x > 0.0)

    @property
    def max_prob(self) -> float:
        return max(self.probs)

    def light_index(self) -> int:
        """Index of the strictly less likely letter of a binary pmf."""
        if len(self.probs) != 2:
            raise DomainError("light_index is defined for binary pmfs only")
        if self.probs[0] == self.probs[1]:
            raise DomainError("uniform binary pmf has no light letter")
        return 0 if self.probs[0] < self.probs[1] else 1

    def __len__(self) -> int:
        return len(self.probs)

    def __getitem__(self, i: int) -> float:
        return self.probs[i]

    def __iter__(self):
        return iter(self.probs)


@dataclass(frozen=True)
class TypeVector:
    """Letter occurrence counts of a length-n string (an n-type)."""

    counts: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))
        if any(c < 0 for c in self.counts):
            raise DomainError("type counts must be non-negative")
        if sum(self.counts) <= 0:
            raise DomainError("type must have positive length")

    @property
    def n(self) -> int:
        return sum(self.counts)

    @property
    def alphabet_size(self) -> int:
        return len(self.counts)

    def empirical(self) -> Pmf:
        n = self.n
        return Pmf(tuple(c / n for c in self.counts))


@dataclass(frozen=True)
class SymbolString:
    """A length-n string of letter indices.

    Binary strings pack into a machine word (first symbol = most
    significant bit); `packed` on a general alphabet is the base-|A|
    value with the same MSB-first convention, so ascending packed value
    equals ascending lexicographic symbol order.
    """

    symbols: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "symbols", tuple(int(s) for s in self.symbols))
        if len(self.symbols) == 0:
            raise DomainError("empty string")
        if any(s < 0 for s in self.symbols):
            raise DomainError("letter indices must be non-negative")

    @classmethod
    def from_packed(cls, value: int, n: int, alphabet_size: int = 2) -> "SymbolString":
        if value < 0 or value >= alphabet_size**n:
            raise DomainError("packed value out of range")
        out = []
        for _ in range(n):
            value, r = divmod(value, alphabet_size)
            out.append(r)
        return cls(tuple(reversed(out)))

    @classmethod
    def from_text(cls, text: str) -> "SymbolString":
        return cls(tuple(int(c) for c in text))

    @property
    def n(self) -> int:
        return len(self.symbols)

    def packed(self, alphabet_size: int = 2) -> int:
        if any(s >= alphabet_size for s in self.symbols):
            raise DomainError("symbol exceeds alphabet size")
        v = 0
        for s in self.symbols:
            v = v * alphabet_size + s
        return v

    def weight(self, letter: int = 1) -> int:
        return sum(1 for s in self.symbols if s == letter)

    def __str__(self) -> str:
        return "".join(str(s) for s in self.symbols)


def type_of(a: SymbolString, alphabet_size: int) -> TypeVector:
    """Occurrence counts of `a` over letters 0..alphabet_size-1."""
    counts = [0] * alphabet_size
    for s in a.symbols:
        if s >= alphabet_size:
            raise DomainError(f"letter {s} exceeds alphabet size {alphabet_size}")
        counts[s] += 1
    return TypeVector(tuple(counts))


def entropy(p: Pmf) -> float:
    """H(P) in bits."""
    return -fsum(x * log2(x) for x in p.probs if x > 0.0)


def _padded_pair(p: Pmf, q: Pmf) -> tuple[tuple[float, ...], tuple[float, ...]]:
    # Shorter pmf is implicitly padded with zero-mass letters.
    a, b = p.probs, q.probs
    if len(a) < len(b):
        a = a + (0.0,) * (len(b) - len(a))
    elif len(b) < len(a):
        b = b + (0.0,) * (len(a) - len(b))
    return a, b


def cross_entropy(p: Pmf, q: Pmf) -> float:
    """X(P||Q) = H(P) + D(P||Q) in bits; requires supp(P) subset of supp(Q)."""
    a, b = _padded_pair(p, q)
    terms = []
    for x, y in zip(a, b):
        if x > 0.0:
            if y <= 0.0:
                raise SupportViolation("cross entropy needs supp(P) inside supp(Q)")
            terms.append(-x * log2(y))
    return fsum(terms)


def divergence(p: Pmf, q: Pmf) -> float:
    """D(P||Q) in bits; requires supp(P) subset of supp(Q)."""
    a, b = _padded_pair(p, q)
    terms = []
    for x, y in zip(a, b):
        if x > 0.0:
            if y <= 0.0:
                raise SupportViolation("divergence needs supp(P) inside supp(Q)")
            terms.append(x * log2(x / y))
    return fsum(terms)


def l1_distance(p: Pmf, q: Pmf) -> float:
    """Total variation times two: sum_i |p_i - q_i| over a shared alphabet."""
    if len(p) != len(q):
        raise DimensionMismatch("l1 distance needs equal alphabet sizes")
    return fsum(abs(x - y) for x, y in zip(p.probs, q.probs))


def string_self_information(a: SymbolString, q: Pmf) -> float:
    """-log2 Q^n(a) = n * X(pi_a || Q), accumulated per letter count."""
    tv = type_of(a, q.alphabet_size)
    terms = []
    for c, y in zip(tv.counts, q.probs):
        if c > 0:
            if y <= 0.0:
                raise SupportViolation("string uses a zero-mass letter")
            terms.append(-c * log2(y))
    return fsum(terms)


def type_log2_prob(counts: tuple[int, ...], q: Pmf) -> float:
    """log2 of the probability of one string with these counts under Q^n."""
    total = 0.0
    for c, y in zip(counts, q.probs):
        if c > 0:
            if y <= 0.0:
                raise SupportViolation("type uses a zero-mass letter")
            total += c * log2(y)
    return total


def is_typical(a: SymbolString, q: Pmf, eps: float) -> bool:
    """Letter-typicality: |pi_a(i) - q_i| <= eps * q_i for every letter."""
    if eps < 0:
        raise DomainError("eps must be non-negative")
    tv = type_of(a, q.alphabet_size)
    n = tv.n
    return all(abs(c / n - y) <= eps * y for c, y in zip(tv.counts, q.probs))


def type_is_typical(counts: tuple[int, ...], q: Pmf, eps: float) -> bool:
    n = sum(counts)
    return all(abs(c / n - y) <= eps * y for c, y in zip(counts, q.probs))


def iter_types(n: int, alphabet_size: int, allowed: tuple[int, ...] | None = None):
    """Yield all n-type count vectors over the alphabet.

    `allowed` restricts positive counts to those letters (others are 0).
    """
    letters = tuple(range(alphabet_size)) if allowed is None else allowed
    for splits in itertools.combinations_with_replacement(range(len(letters)), n):
        counts = [0] * alphabet_size
        for idx in splits:
            counts[letters[idx]] += 1
        yield tuple(counts)


def typical_types(q: Pmf, n: int, eps: float) -> list[tuple[int, ...]]:
    """All n-types passing the letter-typicality test for (Q, eps)."""
    if n <= 0:
        raise DomainError("n must be positive")
    if eps < 0:
        raise DomainError("eps must be non-negative")
    out = []
    for counts in iter_types(n, q.alphabet_size, q.support):
        if type_is_typical(counts, q, eps):
            out.append(counts)
    return out


def exp2_or_inf(x: float) -> float:
    """2**x saturating to inf on overflow (underflow gives 0.0)."""
    try:
        return 2.0**x
    except OverflowError:
        return math.inf


def mass_of(count: int, log2_prob: float) -> float:
    """count * 2**log2_prob, robust to huge counts and tiny probs."""
    if count <= 0:
        return 0.0
    if count < (1 << 53):
        p = 2.0**log2_prob
        if p > 0.0:
            return count * p
    return exp2_or_inf(math.log2(count) + log2_prob)


def multinomial(counts: tuple[int, ...]) -> int:
    """Exact number of strings with the given type (unbounded int)."""
    total = 0
    out = 1
    for c in counts:
        if c < 0:
            raise DomainError("negative count")
        total += c
        out *= math.comb(total, c)
    return out
