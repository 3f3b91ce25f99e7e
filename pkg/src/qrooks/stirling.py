"""q-Stirling numbers of the second kind and q-Bell numbers.

Normalization::

    S_q(0, k) = [k == 0]
    S_q(n, k) = q**(k-1) * S_q(n-1, k-1) + [k]_q * S_q(n-1, k)    (0 < k <= n)

and ``S_q(n, 0) = 0`` for ``n > 0``.  With this normalization
``S_q(n, k) = R_{n-k}(delta_n; q)`` exactly, no extra power of ``q``.
"""
from __future__ import annotations

from collections.abc import Callable, Iterator
from dataclasses import dataclass, field
from functools import lru_cache

from . import poly
from .poly import IntPolynomial


def next_row(row: list[IntPolynomial]) -> list[IntPolynomial]:
    """Row ``n`` of the table from row ``n-1`` (both indexed by ``k``)."""
    n = len(row)
    out = [poly.ZERO] * (n + 1)
    for k in range(1, n + 1):
        a = poly.shift(row[k - 1], k - 1)
        b = poly.mul_q_integer(row[k], k) if k < n else poly.ZERO
        out[k] = poly.add(a, b)
    return out


def rows(n_max: int) -> Iterator[list[IntPolynomial]]:
    """Rows ``0..n_max`` in order; only the current row is kept."""
    row = [poly.ONE]
    yield row
    for _ in range(n_max):
        row = next_row(row)
        yield row


@lru_cache(maxsize=8)
def table(n_max: int) -> tuple[tuple[IntPolynomial, ...], ...]:
    return tuple(tuple(r) for r in rows(n_max))


def qstirling(n: int, k: int) -> IntPolynomial:
    if n < 0 or k < 0 or k > n:
        return poly.ZERO
    return table(n)[n][k]


def _h(m: int, xs: list[IntPolynomial]) -> IntPolynomial:
    # complete homogeneous h_m(x_1..x_j), built up over j:
    # h_m(x_1..x_j) = h_m(x_1..x_{j-1}) + x_j * h_{m-1}(x_1..x_j)
    col = [poly.ONE] + [poly.ZERO] * m
    for x in xs:
        new = [poly.ONE]
        for d in range(1, m + 1):
            new.append(poly.add(col[d], poly.mul(x, new[d - 1])))
        col = new
    return col[m]


def qstirling_via_h(n: int, k: int) -> IntPolynomial:
    """``q**C(k,2) * h_{n-k}([1]_q, ..., [k]_q)``."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got n={n}, k={k}")
    xs = [poly.q_integer(i) for i in range(1, k + 1)]
    return poly.shift(_h(n - k, xs), k * (k - 1) // 2)


def qbell(n: int) -> IntPolynomial:
    total = poly.ZERO
    for p in table(n)[n]:
        total = poly.add(total, p)
    return total


@dataclass
class LogConcavityReport:
    n_max: int
    checked: int = 0
    failures: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def scan_log_concavity(
    n_max: int,
    on_row: Callable[[dict], None] | None = None,
    start: int = 1,
) -> LogConcavityReport:
    """Test every ``S_q(n, k)``, ``1 <= k <= n <= n_max``, for log-concavity.

    ``on_row`` receives one progress record per finished ``n``; ``start``
    skips the log-concavity test (not the table fill) for rows below it.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    report = LogConcavityReport(n_max)
    for n, row in enumerate(rows(n_max)):
        if n < max(start, 1):
            continue
        row_failures = []
        for k in range(1, n + 1):
            ok, witness = poly.is_log_concave(row[k])
            report.checked += 1
            if not ok:
                row_failures.append({"n": n, "k": k, "witness": witness})
        report.failures.extend(row_failures)
        if on_row is not None:
            on_row({
                "kind": "stirling_row",
                "n": n,
                "checked": n,
                "failures": len(row_failures),
                "max_degree": max(poly.degree(p) for p in row[1:]),
            })
    return report
