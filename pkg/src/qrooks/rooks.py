"""Garsia-Remmel q-rook polynomials of Ferrers boards.

``R_k(lam; q)`` sums ``q**inv(w)`` over placements ``w`` of ``k``
nonattacking rooks.  A rook at ``(a, b)`` cancels itself, every cell above
it in column ``b`` and every cell left of it in row ``a``; ``inv(w)`` is the
number of cells that survive.

The main entry point :func:`qrook` uses the deletion-contraction recurrence
on the last cell of the shortest row::

    R_k(<l_1..l_r>) = q * R_k(<l_1..l_{r-1}, l_r - 1>)
                      + R_{k-1}(<l_1 - 1, ..., l_{r-1} - 1>)

with a memo shared across calls.  :func:`qrook_enumerate` is a brute-force
oracle, and the extreme ranks have closed forms.
"""
from __future__ import annotations

import itertools
import sys
from collections.abc import Iterable, Iterator, Sequence

from . import poly
from .partitions import Partition, diagonal_vector
from .poly import IntPolynomial

MEMO_LIMIT = 2_000_000

_memo: dict[tuple[tuple[int, ...], int], IntPolynomial] = {}


class InvalidPlacementError(ValueError):
    pass


def clear_memo() -> None:
    _memo.clear()


def memo_size() -> int:
    return len(_memo)


# ------------------------------------------------------------ inversion stat

def validate_placement(lam: Sequence[int], rooks: Iterable[tuple[int, int]]) -> frozenset:
    w = frozenset(rooks)
    rows: set[int] = set()
    cols: set[int] = set()
    for a, b in w:
        if not (1 <= a <= len(lam) and 1 <= b <= lam[a - 1]):
            raise InvalidPlacementError(f"rook {(a, b)} is not on the board {tuple(lam)}")
        if a in rows or b in cols:
            raise InvalidPlacementError(f"rook {(a, b)} attacks another rook")
        rows.add(a)
        cols.add(b)
    return w


def inversion_number(lam: Sequence[int], rooks: Iterable[tuple[int, int]]) -> int:
    """Number of cells of ``B_lam`` left after every rook deletes its column
    upward and its row leftward (itself included)."""
    w = validate_placement(lam, rooks)
    deleted: set[tuple[int, int]] = set()
    for a, b in w:
        deleted.update((i, b) for i in range(1, a + 1))
        deleted.update((a, j) for j in range(1, b + 1))
    return sum(lam) - len(deleted)


def placements(lam: Sequence[int], k: int) -> Iterator[frozenset]:
    """All ``k``-rook placements on ``B_lam``, rows visited top-down."""
    ell = len(lam)

    def rec(row: int, left: int, used: frozenset, chosen: tuple) -> Iterator[frozenset]:
        if left == 0:
            yield frozenset(chosen)
            return
        if ell - row < left:
            return
        # row ``row + 1`` without a rook
        yield from rec(row + 1, left, used, chosen)
        for b in range(1, lam[row] + 1):
            if b not in used:
                yield from rec(row + 1, left - 1, used | {b}, chosen + ((row + 1, b),))

    yield from rec(0, k, frozenset(), ())


def qrook_enumerate(lam: Sequence[int], k: int) -> IntPolynomial:
    """Brute-force ``R_k(lam; q)``; only meant for small boards."""
    counts: dict[int, int] = {}
    for w in placements(lam, k):
        e = inversion_number(lam, w)
        counts[e] = counts.get(e, 0) + 1
    if not counts:
        return poly.ZERO
    return poly.normalize(counts.get(e, 0) for e in range(max(counts) + 1))


# ------------------------------------------------------------ recurrence

def _qrook(parts: tuple[int, ...], k: int) -> IntPolynomial:
    if k == 0:
        return poly.monomial(sum(parts))
    if k > len(parts) or k > parts[0]:
        return poly.ZERO
    key = (parts, k)
    hit = _memo.get(key)
    if hit is not None:
        return hit
    last = parts[-1]
    deleted = parts[:-1] + (last - 1,) if last > 1 else parts[:-1]
    contracted = tuple(p - 1 for p in parts[:-1] if p > 1)
    value = _qrook(deleted, k)
    if value:
        value = (0,) + value
    other = _qrook(contracted, k - 1)
    if other:
        value = poly.add(value, other)
    if len(_memo) >= MEMO_LIMIT:
        _memo.clear()
    _memo[key] = value
    return value


def _ensure_recursion(lam: Sequence[int]) -> None:
    need = 4 * (sum(lam) + len(lam)) + 200
    if sys.getrecursionlimit() < need:
        sys.setrecursionlimit(need)


def qrook(lam: Sequence[int], k: int) -> IntPolynomial:
    """``R_k(lam; q)`` via memoized deletion-contraction."""
    if k < 0:
        return poly.ZERO
    parts = tuple(p for p in lam if p > 0)
    _ensure_recursion(parts)
    return _qrook(parts, k)


def qrook_all(lam: Sequence[int]) -> list[IntPolynomial]:
    """``[R_0, R_1, ..., R_ell]`` in one pass over a shared memo."""
    parts = tuple(p for p in lam if p > 0)
    _ensure_recursion(parts)
    return [_qrook(parts, k) for k in range(len(parts) + 1)]


def total_qrook(lam: Sequence[int]) -> IntPolynomial:
    total = poly.ZERO
    for r in qrook_all(lam):
        total = poly.add(total, r)
    return total


def rook_number(lam: Sequence[int], k: int) -> int:
    return poly.eval_at_one(qrook(lam, k))


# ------------------------------------------------------------ closed forms

def qrook_full_rank(lam: Sequence[int]) -> IntPolynomial:
    """``R_ell = [l_ell]_q [l_{ell-1} - 1]_q ... [l_1 - (ell-1)]_q``."""
    ell = len(lam)
    out = poly.ONE
    for i, p in enumerate(lam, start=1):
        out = poly.mul(out, poly.q_integer(p - (ell - i)))
    return out


def qrook_rank_one(lam: Sequence[int]) -> IntPolynomial:
    """``R_1 = sum_i d_i q**(|lam| - i)``."""
    n = sum(lam)
    coeffs = [0] * (n + 1)
    for i, d in enumerate(diagonal_vector(lam), start=1):
        coeffs[n - i] += d
    return poly.normalize(coeffs)


def qrook_closed_form(lam: Sequence[int], k: int) -> IntPolynomial | None:
    """Closed form for rank 0, 1 or ``len(lam)``; ``None`` otherwise."""
    if k == 0:
        return poly.monomial(sum(lam))
    if k > len(lam):
        return poly.ZERO
    if k == len(lam):
        return qrook_full_rank(lam)
    if k == 1:
        return qrook_rank_one(lam)
    return None


# ------------------------------------------------------------ equivalence

class EquivalenceMismatch(AssertionError):
    """Diagonal counts and q-rook polynomials disagree on equivalence."""


def are_q_rook_equivalent(lam: Sequence[int], mu: Sequence[int]) -> bool:
    by_diag = diagonal_vector(lam) == diagonal_vector(mu)
    top = max(len(lam), len(mu))
    by_poly = all(qrook(lam, k) == qrook(mu, k) for k in range(top + 1))
    if by_diag != by_poly:
        raise EquivalenceMismatch(
            f"{tuple(lam)} vs {tuple(mu)}: diagonal test says {by_diag}, "
            f"polynomial test says {by_poly}"
        )
    return by_poly


# ------------------------------------------------------------ finite fields

# Fixed irreducibles for the non-prime fields, coefficients low degree first.
_IRREDUCIBLE = {4: (2, (1, 1, 1)), 8: (2, (1, 1, 0, 1)), 9: (3, (1, 0, 1))}
SUPPORTED_FIELDS = (2, 3, 4, 5, 7, 8, 9)
MAX_MATRIX_BOARD = 16


class FiniteField:
    """Addition/multiplication tables for GF(pp), elements ``0..pp-1``.

    Element ``x`` encodes the polynomial whose base-``p`` digits are its
    coefficients.
    """

    def __init__(self, order: int):
        if order not in SUPPORTED_FIELDS:
            raise ValueError(
                f"unsupported field order {order}; choose one of {SUPPORTED_FIELDS}"
            )
        self.order = order
        if order in _IRREDUCIBLE:
            p, modulus = _IRREDUCIBLE[order]
        else:
            p, modulus = order, (0, 1)
        self.char = p
        deg = len(modulus) - 1

        def digits(x: int) -> list[int]:
            return [(x // p**i) % p for i in range(deg)]

        def pack(ds: Sequence[int]) -> int:
            return sum(d * p**i for i, d in enumerate(ds))

        def pmul(x: int, y: int) -> int:
            a, b = digits(x), digits(y)
            prod = [0] * (2 * deg - 1)
            for i, u in enumerate(a):
                for j, v in enumerate(b):
                    prod[i + j] = (prod[i + j] + u * v) % p
            # reduce by the monic modulus
            for top in range(len(prod) - 1, deg - 1, -1):
                c = prod[top]
                if c:
                    for i, m in enumerate(modulus):
                        prod[top - deg + i] = (prod[top - deg + i] - c * m) % p
            return pack(prod[:deg])

        rng = range(order)
        self.add = [[pack([(u + v) % p for u, v in zip(digits(x), digits(y))]) for y in rng] for x in rng]
        self.mul = [[pmul(x, y) for y in rng] for x in rng]
        self.neg = [pack([(-u) % p for u in digits(x)]) for x in rng]
        self.inv = [0] * order
        for x in range(1, order):
            for y in range(1, order):
                if self.mul[x][y] == 1:
                    self.inv[x] = y
                    break
            else:  # pragma: no cover - guarded by the irreducible table
                raise ValueError(f"GF({order}) table is not a field")

    def rank(self, rows: list[list[int]]) -> int:
        m = [list(r) for r in rows]
        add, mul, neg, inv = self.add, self.mul, self.neg, self.inv
        rank = 0
        ncols = len(m[0]) if m else 0
        for c in range(ncols):
            pivot = next((i for i in range(rank, len(m)) if m[i][c]), None)
            if pivot is None:
                continue
            m[rank], m[pivot] = m[pivot], m[rank]
            s = inv[m[rank][c]]
            prow = [mul[s][x] for x in m[rank]]
            m[rank] = prow
            for i in range(rank + 1, len(m)):
                f = m[i][c]
                if f:
                    nf = neg[f]
                    row = m[i]
                    m[i] = [add[x][mul[nf][y]] for x, y in zip(row, prow)]
            rank += 1
        return rank


def rank_distribution(lam: Sequence[int], order: int) -> list[int]:
    """Counts of fillings of ``B_lam`` over GF(order), by matrix rank."""
    n = sum(lam)
    if n > MAX_MATRIX_BOARD:
        raise ValueError(
            f"board has {n} cells; exhaustive enumeration is limited to {MAX_MATRIX_BOARD}"
        )
    field = FiniteField(order)
    ell = len(lam)
    width = lam[0] if lam else 0
    cells = [(i, j) for i in range(ell) for j in range(lam[i])]
    counts = [0] * (min(ell, width) + 1)
    for values in itertools.product(range(order), repeat=n):
        grid = [[0] * width for _ in range(ell)]
        for (i, j), v in zip(cells, values):
            grid[i][j] = v
        counts[field.rank(grid)] += 1
    return counts


def count_rank_matrices(lam: Sequence[int], order: int, r: int) -> int:
    """Number of matrices over GF(order), zero off ``B_lam``, with rank ``r``."""
    counts = rank_distribution(lam, order)
    return counts[r] if 0 <= r < len(counts) else 0


def predicted_rank_count(lam: Sequence[int], order: int, r: int) -> int:
    """``(pp-1)**r * pp**(|lam|-r) * R_r(lam; 1/pp)``, computed in integers.

    ``R_r`` has degree at most ``|lam| - r`` whenever it is nonzero, so
    ``pp**(|lam|-r-e)`` never has a negative exponent.
    """
    n = sum(lam)
    rk = qrook(lam, r)
    total = sum(c * order ** (n - r - e) for e, c in enumerate(rk) if c)
    return (order - 1) ** r * total
