"""Prime-power coding of finite sequences of naturals.

``encode`` maps (s0, ..., s_{k-1}) to q_0^(s0+1) * ... * q_{k-1}^(s_{k-1}+1)
over the primes q_0 = 2, q_1 = 3, q_2 = 5, ...; the empty sequence maps to 0.
``decode`` inverts by factorization and returns None for naturals whose
factorization skips a prime or does not start at 2.

Coded values grow violently once coded values are fed back in as entries:
three levels of nesting already produce numbers whose decimal expansion could
not be stored.  Any value whose estimated size exceeds MATERIALIZE_BITS is
therefore kept in factored form as a :class:`SymbolicCode`;
:func:`make_code_value` picks the representation canonically, so equality of
code values is structural everywhere in the package.
"""

from __future__ import annotations

import threading
from decimal import Decimal, localcontext
from typing import Iterable, Sequence

from .base import CapacityError

# Codes estimated above this many bits stay in factored form.
MATERIALIZE_BITS = 4096

# Fixed-point scale for base-2 log estimates of code sizes.
_LOG2_SCALE = 1 << 24

_lock = threading.RLock()
_primes: list[int] = [2, 3, 5, 7, 11, 13]
_log2q: list[int] = []          # round(log2(q_i) * _LOG2_SCALE)
_cum_log2q: list[int] = [0]     # prefix sums of _log2q


def _ensure_primes(count: int) -> None:
    """Grow the memoized prime table to at least ``count`` entries.

    Deterministic bounded sieve; the table behaves as if computed once (fills
    happen under a lock, and the finished list is swapped in by a single
    rebinding so concurrent readers only ever see a complete table).
    """
    global _primes
    if len(_primes) >= count:
        return
    with _lock:
        if len(_primes) >= count:
            return
        import math

        n = max(count, 16)
        bound = max(int(n * (math.log(n) + math.log(math.log(n)))) + 10, 100)
        while True:
            sieve = bytearray([1]) * (bound + 1)
            sieve[0:2] = b"\x00\x00"
            for p in range(2, int(bound**0.5) + 1):
                if sieve[p]:
                    sieve[p * p :: p] = b"\x00" * len(sieve[p * p :: p])
            found = [i for i in range(bound + 1) if sieve[i]]
            if len(found) >= count:
                _primes = found
                return
            bound *= 2


def nth_prime(n: int) -> int:
    """The (n+1)-th prime: nth_prime(0) = 2, nth_prime(1) = 3, ..."""
    if n < 0:
        raise ValueError("prime index must be a natural")
    if n >= len(_primes):
        _ensure_primes(n + 1)
    return _primes[n]


def _log2q_scaled(i: int) -> int:
    if i >= len(_log2q):
        with _lock:
            import math

            while len(_log2q) <= i:
                k = len(_log2q)
                v = round(math.log2(nth_prime(k)) * _LOG2_SCALE)
                _log2q.append(v)
                _cum_log2q.append(_cum_log2q[-1] + v)
    return _log2q[i]


def _cum_log2q_scaled(n: int) -> int:
    """Scaled sum of log2(q_i) for i < n."""
    if n >= len(_cum_log2q):
        _log2q_scaled(n)
    return _cum_log2q[n]


def encode(seq: Sequence[int]) -> int:
    """Code of a finite sequence of naturals; 0 for the empty sequence."""
    if not seq:
        return 0
    value = 1
    for i, entry in enumerate(seq):
        if not isinstance(entry, int):
            raise CapacityError(
                "entry too large to materialize; use make_code_value for the factored form"
            )
        if entry < 0:
            raise ValueError("entries must be naturals")
        value *= nth_prime(i) ** (entry + 1)
    return value


def decode(c) -> tuple | None:
    """Inverse of the coding; None when ``c`` is not a coded value.

    Accepts plain naturals and factored SymbolicCode values (whose defining
    sequence is returned directly).
    """
    if isinstance(c, SymbolicCode):
        return c.seq()
    if not isinstance(c, int) or c < 0:
        return None
    if c == 0:
        return ()
    if c == 1:
        return None  # the empty sequence codes to 0, nonempty ones to >= 2
    entries = []
    i = 0
    while c > 1:
        p = nth_prime(i)
        e = 0
        while c % p == 0:
            c //= p
            e += 1
        if e == 0:
            # factorization skips q_i: not contiguous, not a code
            return None
        entries.append(e - 1)
        i += 1
    return tuple(entries)


def is_code(n: int) -> bool:
    return decode(n) is not None


class SymbolicCode:
    """A code value kept in factored form: the code of ``seq``, with ``seq``
    stored sparsely (positions whose entry differs from 1).

    Only constructed (via make_code_value) for values whose materialized form
    would exceed MATERIALIZE_BITS bits, so an int never equals a SymbolicCode.
    """

    __slots__ = ("length", "items", "_bits_scaled", "_hash")

    def __init__(self, length: int, items: Iterable[tuple[int, object]]):
        object.__setattr__(self, "length", length)
        its = tuple(sorted((p, v) for p, v in items if v != 1))
        for p, v in its:
            if not 0 <= p < length:
                raise ValueError("item position outside the coded sequence")
        object.__setattr__(self, "items", its)
        object.__setattr__(self, "_bits_scaled", _seq_bits_scaled(length, its))
        object.__setattr__(self, "_hash", hash((length, its)))

    def entry(self, i: int):
        if not 0 <= i < self.length:
            raise IndexError(i)
        for p, v in self.items:
            if p == i:
                return v
        return 1

    def seq(self) -> tuple:
        out = [1] * self.length
        for p, v in self.items:
            out[p] = v
        return tuple(out)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SymbolicCode)
            and self.length == other.length
            and self.items == other.items
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"SymbolicCode({factored_str(self)})"

    def __setattr__(self, *a):
        raise AttributeError("SymbolicCode is immutable")


# Sequences longer than this skip the exact prime-log sum; each position
# contributes at least 2 bits, so the value is far past any cutoff and a
# lower bound decides every comparison against a materialized integer.
_EXACT_LENGTH_CAP = 100_000


def _seq_bits_scaled(length: int, items) -> int | None:
    """Scaled log2 of the code of a mostly-1 sequence (a lower bound once the
    sequence outgrows the exact-sum cap); None when some entry is itself
    non-materializable (the value is then astronomically large)."""
    coarse = length > _EXACT_LENGTH_CAP
    total = 2 * length * _LOG2_SCALE if coarse else 2 * _cum_log2q_scaled(length)
    for pos, v in items:
        if isinstance(v, SymbolicCode):
            return None
        total += (v - 1) * (_LOG2_SCALE if coarse else _log2q_scaled(pos))
    return total


def make_code_value(seq: Sequence) -> "int | SymbolicCode":
    """Canonical code value of ``seq``: int when small, factored form when not."""
    items = tuple((i, v) for i, v in enumerate(seq) if v != 1)
    return make_code_value_sparse(len(seq), items)


def make_code_value_sparse(length: int, items) -> "int | SymbolicCode":
    if length == 0:
        return 0
    bits = _seq_bits_scaled(length, items)
    if bits is not None and bits <= MATERIALIZE_BITS * _LOG2_SCALE:
        value = 1
        for i in range(length):
            value *= nth_prime(i) ** 2
        for pos, v in items:
            value *= nth_prime(pos) ** (v - 1)
        return value
    return SymbolicCode(length, items)


# --- exact ordering of code values -----------------------------------------

_LN_CACHE: dict[tuple[int, int], Decimal] = {}
_SLS_PRECISIONS = (50, 200, 1000, 5000, 30000, 120000)


def _ln_at(p: int, prec: int) -> Decimal:
    key = (p, prec)
    val = _LN_CACHE.get(key)
    if val is None:
        with localcontext() as ctx:
            ctx.prec = prec + 10
            val = Decimal(p).ln()
        _LN_CACHE[key] = val
    return val


def scaled_log_sign(terms: Iterable[tuple[int, int]]) -> int:
    """Sign of sum(c * ln(p) for (c, p) in terms), with exact int coefficients.

    Zero exactly when every aggregated coefficient vanishes (logarithms of
    distinct primes are linearly independent over the rationals); otherwise an
    escalating-precision interval evaluation resolves the sign.
    """
    agg: dict[int, int] = {}
    for c, p in terms:
        agg[p] = agg.get(p, 0) + c
    agg = {p: c for p, c in agg.items() if c}
    if not agg:
        return 0
    for prec in _SLS_PRECISIONS:
        with localcontext() as ctx:
            ctx.prec = prec
            total = Decimal(0)
            mag = Decimal(0)
            for p in sorted(agg):
                term = Decimal(agg[p]) * _ln_at(p, prec)
                total += term
                mag += abs(term)
            err = mag * Decimal(10) ** (8 - prec)
            if total > err:
                return 1
            if total < -err:
                return -1
    raise ArithmeticError("log comparison did not resolve at maximum precision")


def _int_factor_terms(v: SymbolicCode, sign: int) -> list | None:
    """(sign*(entry+1), prime) terms of a factored value; None when an entry is
    itself symbolic."""
    terms = []
    covered = set()
    for pos, e in v.items:
        if isinstance(e, SymbolicCode):
            return None
        terms.append((sign * (e + 1), nth_prime(pos)))
        covered.add(pos)
    for i in range(v.length):
        if i not in covered:
            terms.append((sign * 2, nth_prime(i)))
    return terms


def code_value_cmp(x, y) -> int:
    """Exact order of two code values (ints or factored forms).

    Raises CapacityError for pairs of factored values with non-materializable
    entries; callers at alphabet level 4 resolve those by dominance first.
    """
    if x == y:
        return 0
    if isinstance(x, int) and isinstance(y, int):
        return -1 if x < y else 1
    if isinstance(x, int) or isinstance(y, int):
        i, v, sign = (x, y, -1) if isinstance(x, int) else (y, x, 1)
        est = v._bits_scaled
        ibits = i.bit_length()
        if est is None or est > (ibits + 8) * _LOG2_SCALE:
            return sign
        if est < (ibits - 8) * _LOG2_SCALE:
            return -sign
        # near the integer's size the factored value is barely past the
        # canonical cutoff, so materializing it for an exact comparison is
        # cheap (the size estimate is accurate to well under a bit)
        value = 1
        for c, p in _int_factor_terms(v, 1):
            value *= p**c
        if value == i:
            return 0
        return sign if value > i else -sign
    tx = _int_factor_terms(x, 1)
    ty = _int_factor_terms(y, -1)
    if tx is None or ty is None:
        raise CapacityError("ordering of doubly-nested code values needs level context")
    return scaled_log_sign(tx + ty)


# --- rendering ---------------------------------------------------------------

_DECIMAL_PRINT_CAP = 4000  # digits


def factored_str(v) -> str:
    """q_0^a·q_1^b·... rendering of a code value; exponents that are themselves
    coded values render recursively in parentheses."""
    seq = decode(v)
    if seq is None:
        return str(v)
    if not seq:
        return "0"
    parts = []
    for i, e in enumerate(seq):
        if isinstance(e, SymbolicCode):
            exp = f"({factored_str(e)}+1)"
        else:
            exp = str(e + 1)
        parts.append(f"{nth_prime(i)}^{exp}")
    return "·".join(parts)


def render_value(v) -> str:
    """Stable human rendering: decimal and factored form when printable,
    factored form plus a size estimate otherwise."""
    if isinstance(v, int):
        s = str(v)
        if len(s) <= _DECIMAL_PRINT_CAP and is_code(v):
            return f"{s} = {factored_str(v)}"
        return s
    bits = v._bits_scaled
    if bits is None:
        size = "size beyond any usable estimate"
    else:
        digits = bits * 30103 // (_LOG2_SCALE * 100000) + 1
        if digits < 10**9:
            size = f"~{digits} digits"
        else:
            size = f"~10^{len(str(digits)) - 1} digits"
    return f"{factored_str(v)} ({size}, decimal suppressed)"
