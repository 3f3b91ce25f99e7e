"""Dense univariate integer polynomials in ``q``.

A polynomial is a tuple of Python ints, lowest degree first, so that
``(1, 10, 5)`` stands for ``1 + 10*q + 5*q**2``.  Tuples are kept in
canonical form (no trailing zeros); the zero polynomial is ``()``.
Being plain tuples they are hashable and cheap to share between memo
entries.
"""
from __future__ import annotations

from collections.abc import Iterable, Sequence
import re

IntPolynomial = tuple[int, ...]

ZERO: IntPolynomial = ()
ONE: IntPolynomial = (1,)


class NegativeCoefficientError(ValueError):
    """A shape test was asked about a sequence with a negative entry."""


def normalize(coeffs: Iterable[int]) -> IntPolynomial:
    c = list(coeffs)
    n = len(c)
    while n and not c[n - 1]:
        n -= 1
    return tuple(c[:n])


def monomial(e: int, c: int = 1) -> IntPolynomial:
    if not c:
        return ZERO
    return (0,) * e + (c,)


def degree(p: IntPolynomial) -> int:
    """Degree of ``p``; -1 for the zero polynomial."""
    return len(p) - 1


def add(p: IntPolynomial, r: IntPolynomial) -> IntPolynomial:
    if len(p) < len(r):
        p, r = r, p
    if not r:
        return p
    out = list(p)
    for i, c in enumerate(r):
        out[i] += c
    if len(p) == len(r):
        return normalize(out)
    return tuple(out)


def sub(p: IntPolynomial, r: IntPolynomial) -> IntPolynomial:
    return add(p, tuple(-c for c in r))


def scale(p: IntPolynomial, c: int) -> IntPolynomial:
    if not c:
        return ZERO
    return tuple(c * a for a in p)


def shift(p: IntPolynomial, e: int) -> IntPolynomial:
    """Multiply by ``q**e``."""
    if e < 0:
        raise ValueError(f"shift exponent must be nonnegative, got {e}")
    if not p or not e:
        return p
    return (0,) * e + p


def mul(p: IntPolynomial, r: IntPolynomial) -> IntPolynomial:
    # schoolbook convolution; the degrees here are at most a few thousand
    if not p or not r:
        return ZERO
    if len(p) < len(r):
        p, r = r, p
    out = [0] * (len(p) + len(r) - 1)
    for j, b in enumerate(r):
        if not b:
            continue
        for i, a in enumerate(p):
            out[i + j] += a * b
    return tuple(out)


def power(p: IntPolynomial, n: int) -> IntPolynomial:
    result = ONE
    for _ in range(n):
        result = mul(result, p)
    return result


def q_integer(n: int) -> IntPolynomial:
    """``[n]_q = 1 + q + ... + q**(n-1)``; zero for ``n <= 0``."""
    if n <= 0:
        return ZERO
    return (1,) * n


def mul_q_integer(p: IntPolynomial, n: int) -> IntPolynomial:
    """``[n]_q * p`` via a sliding window sum; same result as ``mul``."""
    if n <= 0 or not p:
        return ZERO
    out = []
    window = 0
    m = len(p)
    for e in range(m + n - 1):
        if e < m:
            window += p[e]
        if e >= n:
            window -= p[e - n]
        out.append(window)
    return tuple(out)


def eval_at(p: IntPolynomial, x: int) -> int:
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def eval_at_one(p: IntPolynomial) -> int:
    return sum(p)


def _check_nonnegative(coeffs: Sequence[int]) -> None:
    for e, c in enumerate(coeffs):
        if c < 0:
            raise NegativeCoefficientError(
                f"coefficient of q^{e} is negative ({c})"
            )


def is_unimodal(p: Sequence[int]) -> tuple[bool, tuple[int, int, int] | None]:
    """Test the full coefficient vector (from exponent 0) for unimodality.

    Returns ``(True, None)`` or ``(False, (i, j, k))`` with exponents
    ``i < j < k`` such that ``p[i] > p[j] < p[k]``.  The witness is the
    first strict ascent ``k`` after a strict descent, the valley ``j = k-1``
    and the nearest ``i`` before it with a larger coefficient.
    """
    _check_nonnegative(p)
    descended = False
    for t in range(1, len(p)):
        if p[t] < p[t - 1]:
            descended = True
        elif p[t] > p[t - 1] and descended:
            j = t - 1
            i = j - 1
            while p[i] <= p[j]:
                i -= 1
            return False, (i, j, t)
    return True, None


def is_log_concave(p: Sequence[int]) -> tuple[bool, int | None]:
    """Log-concavity of the coefficients between the lowest and highest
    nonzero terms.

    An internal zero coefficient counts as a failure.  The witness is the
    exponent ``e`` of the first failing coefficient.
    """
    _check_nonnegative(p)
    lo = 0
    while lo < len(p) and not p[lo]:
        lo += 1
    hi = len(p) - 1
    while hi >= lo and not p[hi]:
        hi -= 1
    for e in range(lo + 1, hi):
        a = p[e]
        if not a or a * a < p[e - 1] * p[e + 1]:
            return False, e
    return True, None


# ---------------------------------------------------------------- rendering

def _term(c: int, e: int) -> str:
    if e == 0:
        return str(c)
    mono = "q" if e == 1 else f"q^{e}"
    if c == 1:
        return mono
    return f"{c}*{mono}"


def to_text(p: IntPolynomial) -> str:
    """Descending-power display, e.g. ``q^4 + 2*q^3 + q^2 + q``."""
    if not p:
        return "0"
    out = ""
    for e in range(len(p) - 1, -1, -1):
        c = p[e]
        if not c:
            continue
        if not out:
            out = _term(c, e) if c > 0 else "-" + _term(-c, e)
        elif c > 0:
            out += " + " + _term(c, e)
        else:
            out += " - " + _term(-c, e)
    return out


_TERM_RE = re.compile(r"^(?:(\d+)\*?)?(q(?:\^(\d+))?)?$")


def from_text(text: str) -> IntPolynomial:
    """Inverse of :func:`to_text`."""
    s = text.replace(" ", "")
    if s in ("", "0"):
        return ZERO
    if s[0] not in "+-":
        s = "+" + s
    coeffs: dict[int, int] = {}
    for sign, body in re.findall(r"([+-])([^+-]+)", s):
        m = _TERM_RE.match(body)
        if not m or (m.group(1) is None and m.group(2) is None):
            raise ValueError(f"cannot parse polynomial term {body!r}")
        c = int(m.group(1)) if m.group(1) is not None else 1
        if m.group(2) is None:
            e = 0
        else:
            e = int(m.group(3)) if m.group(3) is not None else 1
        coeffs[e] = coeffs.get(e, 0) + (c if sign == "+" else -c)
    if not coeffs:
        return ZERO
    return normalize(coeffs.get(e, 0) for e in range(max(coeffs) + 1))


def to_json(p: IntPolynomial) -> dict:
    # decimal strings keep big coefficients exact in any JSON reader
    return {"coeffs": [str(c) for c in p]}


def from_json(obj: dict) -> IntPolynomial:
    return normalize(int(c) for c in obj["coeffs"])
