"""Exact partition/composition calculus.

Partitions index nilpotent conjugacy classes; compositions encode graded
dimension vectors (rows of a generalized Young diagram).  Everything here is
exact integer / rational arithmetic — no floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Iterator

from .errors import DegenerateInputError

__all__ = [
    "Partition",
    "Composition",
    "Dominance",
    "dominates",
    "union",
    "conjugate_partition",
    "conjugate_set_partition",
    "conjugate_composition",
    "dual_profile",
    "c_constant",
    "d_constant",
    "induced_partition",
    "composition_dominates",
    "partitions_of",
    "compositions_of",
    "young_diagram",
    "format_rational",
    "parse_rational",
]


@dataclass(frozen=True)
class Partition:
    """A weakly decreasing tuple of positive integers.

    The empty partition (total 0) is allowed; it is the identity for
    :func:`union`.
    """

    parts: tuple[int, ...]

    def __init__(self, parts: Iterable[int] = ()):
        parts = tuple(int(p) for p in parts)
        for i, p in enumerate(parts):
            if p < 1:
                raise ValueError(f"partition parts must be >= 1, got {p}")
            if i and parts[i - 1] < p:
                raise ValueError(f"partition parts must be weakly decreasing: {parts}")
        object.__setattr__(self, "parts", parts)

    @property
    def total(self) -> int:
        return sum(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __str__(self) -> str:
        return ",".join(str(p) for p in self.parts)

    @classmethod
    def from_string(cls, text: str) -> "Partition":
        """Parse "6,4,2,1" (whitespace tolerated, empty string -> empty partition)."""
        text = text.strip()
        if not text:
            return cls(())
        return cls(int(tok) for tok in text.split(","))


@dataclass(frozen=True)
class Composition:
    """An ordered tuple of nonnegative integers with positive total.

    Zeros are allowed anywhere (padding never changes the conjugate, and
    interior zeros simply break column runs).
    """

    entries: tuple[int, ...]

    def __init__(self, entries: Iterable[int]):
        entries = tuple(int(e) for e in entries)
        if any(e < 0 for e in entries):
            raise ValueError(f"composition entries must be >= 0: {entries}")
        if sum(entries) <= 0:
            raise ValueError("composition must have positive total")
        object.__setattr__(self, "entries", entries)

    @property
    def total(self) -> int:
        return sum(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[int]:
        return iter(self.entries)

    def __str__(self) -> str:
        return ",".join(str(e) for e in self.entries)

    @classmethod
    def from_string(cls, text: str) -> "Composition":
        return cls(int(tok) for tok in text.strip().split(","))


class Dominance(Enum):
    """Outcome of a dominance-order comparison (a partial order)."""

    EQUAL = "equal"
    DOMINATES = "dominates"
    DOMINATED_BY = "dominated_by"
    INCOMPARABLE = "incomparable"


def _prefix_compare(a: tuple[int, ...], b: tuple[int, ...]) -> Dominance:
    """Compare by prefix sums, padding the shorter sequence with zeros."""
    if a == b:
        return Dominance.EQUAL
    ge = le = True
    sa = sb = 0
    for i in range(max(len(a), len(b))):
        sa += a[i] if i < len(a) else 0
        sb += b[i] if i < len(b) else 0
        if sa < sb:
            ge = False
        if sa > sb:
            le = False
    if ge and le:
        # identical prefix sums but different padding, e.g. (2,) vs (2, 0)
        return Dominance.EQUAL
    if ge:
        return Dominance.DOMINATES
    if le:
        return Dominance.DOMINATED_BY
    return Dominance.INCOMPARABLE


def dominates(lhs: Partition, rhs: Partition) -> Dominance:
    """Dominance comparison of two partitions of the same total.

    ``lhs`` dominates ``rhs`` iff every prefix sum of ``lhs`` is >= the
    corresponding prefix sum of ``rhs``.  Incomparability is a first-class
    outcome, not an error.
    """
    if lhs.total != rhs.total:
        raise ValueError(f"cannot compare partitions of different totals: {lhs.total} != {rhs.total}")
    return _prefix_compare(lhs.parts, rhs.parts)


def composition_dominates(lhs: Composition, rhs: Composition) -> Dominance:
    """Dominance extended to compositions of the same total (prefix sums)."""
    if lhs.total != rhs.total:
        raise ValueError(f"cannot compare compositions of different totals: {lhs.total} != {rhs.total}")
    return _prefix_compare(lhs.entries, rhs.entries)


def union(lhs: Partition, rhs: Partition) -> Partition:
    """Multiset union of parts, re-sorted weakly decreasing."""
    return Partition(sorted(lhs.parts + rhs.parts, reverse=True))


def conjugate_partition(p: Partition) -> Partition:
    """Transpose of the Young diagram: part j counts parts of p that are >= j."""
    if not p.parts:
        return Partition(())
    return Partition(sum(1 for part in p.parts if part >= j) for j in range(1, p.parts[0] + 1))


def conjugate_set_partition(r: Composition) -> list[list[int]]:
    """Per-column run lengths of the generalized Young diagram.

    Column i of the diagram occupies the rows j with r_j >= i; the column's
    boxes split into maximal vertical runs (zero rows break runs).  Returns
    one list of run lengths per nonempty column, in column order.
    """
    columns: list[list[int]] = []
    for i in range(1, max(r.entries) + 1):
        runs: list[int] = []
        current = 0
        for e in r.entries:
            if e >= i:
                current += 1
            elif current:
                runs.append(current)
                current = 0
        if current:
            runs.append(current)
        columns.append(runs)
    return columns


def conjugate_composition(r: Composition) -> Partition:
    """Conjugate partition of a composition.

    All column run lengths of the generalized Young diagram, flattened into
    one weakly decreasing partition of ``r.total``.  Coincides with
    :func:`conjugate_partition` whenever ``r`` is already a partition.
    """
    lengths = [run for column in conjugate_set_partition(r) for run in column]
    return Partition(sorted(lengths, reverse=True))


def dual_profile(r: Composition) -> list[int]:
    """Cumulative kernel-dimension profile (a^1, ..., a^m) of a composition.

    a^i = sum_{l<=m-i} (r_l - min(r_l..r_{l+i})) + sum of the last i entries;
    in particular a^m = r.total.  The difference sequence
    (a^1, a^2-a^1, ...) reproduces, after dropping zero differences, the
    conjugate partition of ``conjugate_composition(r)``.
    """
    e = r.entries
    m = len(e)
    profile = []
    for i in range(1, m + 1):
        head = sum(e[l] - min(e[l : l + i + 1]) for l in range(m - i))
        tail = sum(e[m - i :])
        profile.append(head + tail)
    return profile


def c_constant(p: Partition) -> Fraction:
    """The sharp orbit minimum 12 / sum_p part*(part^2-1), exact.

    Undefined (degenerate) when every part equals 1: the associated
    block-diagonal nilpotent is the zero matrix.
    """
    denom = sum(part * (part * part - 1) for part in p.parts)
    if denom == 0:
        label = str(p) or "()"
        raise DegenerateInputError(f"C is undefined for {label}: all parts are 1")
    return Fraction(12, denom)


def d_constant(r: Composition) -> Fraction:
    """The graded-row constant 4 / sum_p p*(p-1)*r_p, exact (rows 1-indexed).

    Undefined when all mass sits in position 1.
    """
    denom = sum(p * (p - 1) * e for p, e in enumerate(r.entries, start=1))
    if denom == 0:
        raise DegenerateInputError(f"D is undefined for {r}: no entry beyond position 1")
    return Fraction(4, denom)


def induced_partition(r: Composition) -> Partition:
    """Entries of r sorted weakly decreasing, zeros dropped."""
    return Partition(sorted((e for e in r.entries if e > 0), reverse=True))


def partitions_of(n: int) -> Iterator[Partition]:
    """All partitions of n in reverse lexicographic order ((n) first)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        yield Partition(())
        return

    def rec(remaining: int, cap: int, prefix: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
        if remaining == 0:
            yield prefix
            return
        for part in range(min(cap, remaining), 0, -1):
            yield from rec(remaining - part, part, prefix + (part,))

    for parts in rec(n, n, ()):
        yield Partition(parts)


def compositions_of(n: int) -> Iterator[Composition]:
    """All 2^(n-1) compositions of n into positive parts."""
    if n < 1:
        raise ValueError("n must be >= 1")

    def rec(remaining: int, prefix: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
        if remaining == 0:
            yield prefix
            return
        for first in range(1, remaining + 1):
            yield from rec(remaining - first, prefix + (first,))

    for entries in rec(n, ()):
        yield Composition(entries)


def young_diagram(rows: Iterable[int], box: str = "#") -> str:
    """ASCII (generalized) Young diagram: one row of boxes per entry.

    Zero rows render as empty lines so row indices stay aligned.
    """
    return "\n".join(box * r for r in rows)


def format_rational(q: Fraction) -> str:
    """Render a rational as "p/q" in lowest terms, sign on the numerator."""
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    """Inverse of :func:`format_rational` (also accepts a bare integer)."""
    return Fraction(text.strip())
