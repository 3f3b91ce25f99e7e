"""Integer partitions and their Ferrers boards.

Cells use matrix coordinates: ``(i, j)`` with row ``i`` counted from the
top and column ``j`` from the left, both 1-based.  Cell ``(i, j)`` is on
the board of ``lam`` iff ``1 <= i <= len(lam)`` and ``1 <= j <= lam[i-1]``.
"""
from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass


class PartitionParseError(ValueError):
    pass


class Partition(tuple):
    """Nonincreasing tuple of positive ints.

    A tuple subclass, so partitions hash and compare like tuples and can be
    used directly as memo keys.
    """

    __slots__ = ()

    def __new__(cls, parts: Iterable[int] = ()) -> "Partition":
        self = super().__new__(cls, parts)
        prev = None
        for idx, p in enumerate(self):
            if not isinstance(p, int) or p < 1:
                raise ValueError(f"part {idx + 1} must be a positive integer, got {p!r}")
            if prev is not None and p > prev:
                raise ValueError(
                    f"parts must be nonincreasing: part {idx + 1} ({p}) > part {idx} ({prev})"
                )
            prev = p
        return self

    @classmethod
    def _trusted(cls, parts: Iterable[int]) -> "Partition":
        # skip validation for internally generated parts
        return tuple.__new__(cls, parts)

    @property
    def size(self) -> int:
        return sum(self)

    @property
    def length(self) -> int:
        return len(self)

    def cells(self) -> Iterator[tuple[int, int]]:
        for i, p in enumerate(self, start=1):
            for j in range(1, p + 1):
                yield (i, j)

    def __contains__(self, cell) -> bool:  # type: ignore[override]
        if isinstance(cell, tuple) and len(cell) == 2:
            i, j = cell
            return 1 <= i <= len(self) and 1 <= j <= self[i - 1]
        return tuple.__contains__(self, cell)

    def __repr__(self) -> str:
        return "<" + ",".join(map(str, self)) + ">"

    def __str__(self) -> str:
        return format_partition(self)


def staircase(n: int) -> Partition:
    """``delta_n = <n-1, n-2, ..., 1>``."""
    return Partition._trusted(range(n - 1, 0, -1))


def parse_partition(text: str) -> Partition:
    """Parse ``"10,9,3,2,1"``; whitespace is ignored and ``""`` is empty."""
    s = "".join(text.split())
    if not s:
        return Partition()
    parts: list[int] = []
    for pos, token in enumerate(s.split(","), start=1):
        if not token:
            raise PartitionParseError(f"empty part at position {pos}")
        try:
            value = int(token)
        except ValueError:
            raise PartitionParseError(f"part {pos} is not an integer: {token!r}") from None
        if value < 1:
            raise PartitionParseError(f"part {pos} must be positive, got {value}")
        if parts and value > parts[-1]:
            raise PartitionParseError(
                f"part {pos} ({value}) exceeds part {pos - 1} ({parts[-1]}); "
                "parts must be nonincreasing"
            )
        parts.append(value)
    return Partition._trusted(parts)


def format_partition(lam: Iterable[int]) -> str:
    return ",".join(map(str, lam))


def conjugate(lam: Partition) -> Partition:
    if not lam:
        return Partition()
    out = []
    ell = len(lam)
    for j in range(1, lam[0] + 1):
        while lam[ell - 1] < j:
            ell -= 1
        out.append(ell)
    return Partition._trusted(out)


def diagonal_vector(lam: Iterable[int]) -> tuple[int, ...]:
    """``d_m`` = number of cells with ``i + j = m + 1``, for ``m = 1, 2, ...``.

    Row ``i`` of length ``p`` meets diagonals ``i .. i+p-1``; the counts are
    accumulated with a difference array.
    """
    lam = tuple(lam)
    if not lam:
        return ()
    top = max(i + p for i, p in enumerate(lam))
    diff = [0] * (top + 1)
    for i, p in enumerate(lam):
        diff[i] += 1
        diff[i + p] -= 1
    out = []
    run = 0
    for m in range(top):
        run += diff[m]
        out.append(run)
    while out and not out[-1]:
        out.pop()
    return tuple(out)


def enumerate_partitions(n: int) -> Iterator[Partition]:
    """All partitions of ``n`` in reverse-lexicographic order.

    ``<n>`` comes first and ``<1,...,1>`` last.  Downstream sharding and
    checkpoint cursors rely on this exact order.
    """
    if n < 0:
        return
    if n == 0:
        yield Partition()
        return
    # successor: strip trailing 1s, decrement the last part, refill greedily
    a = [n]
    while True:
        yield Partition._trusted(a)
        ones = 0
        while a and a[-1] == 1:
            a.pop()
            ones += 1
        if not a:
            return
        k = a[-1] - 1
        a[-1] = k
        rem = ones + 1
        while rem > k:
            a.append(k)
            rem -= k
        if rem:
            a.append(rem)


def partition_count(n: int) -> int:
    """p(n) by Euler's pentagonal-number recurrence."""
    if n < 0:
        return 0
    p = [1] + [0] * n
    for m in range(1, n + 1):
        total = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > m:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[m - g1]
            g2 = k * (3 * k + 1) // 2
            if g2 <= m:
                total += sign * p[m - g2]
            k += 1
        p[m] = total
    return p[n]


@dataclass(frozen=True)
class EquivalenceClass:
    diagonal: tuple[int, ...]
    representative: Partition
    member_count: int
    members: tuple[Partition, ...] = ()


def equivalence_classes(n: int, keep_members: bool = True) -> list[EquivalenceClass]:
    """Rook-equivalence classes of partitions of ``n``.

    Classes are keyed by diagonal vector.  Each representative is the
    first member met in enumeration order and classes are listed in that
    order, which is also descending order of representatives.  With
    ``keep_members=False`` only counts are kept, which matters for large n.
    """
    if keep_members:
        groups: dict[tuple[int, ...], list[Partition]] = {}
        for lam in enumerate_partitions(n):
            groups.setdefault(diagonal_vector(lam), []).append(lam)
        return [
            EquivalenceClass(d, members[0], len(members), tuple(members))
            for d, members in groups.items()
        ]
    first: dict[tuple[int, ...], Partition] = {}
    counts: dict[tuple[int, ...], int] = {}
    for lam in enumerate_partitions(n):
        d = diagonal_vector(lam)
        if d in counts:
            counts[d] += 1
        else:
            counts[d] = 1
            first[d] = lam
    return [EquivalenceClass(d, first[d], c) for d, c in counts.items()]
