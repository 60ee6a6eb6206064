"""Coordinate-rewriting partial homeomorphisms on the coded product space.

A branch is indexed by a pair (s, t) with |t| = |s| + 1.  Its clopen domain
demands coordinate 1 at the coded index of s⌈j ⌢ t⌈(j+1) for every j <= |s|
and a non-1 coordinate at the coded index of s⌈j ⌢ t⌈j ⌢ p for p < t(j).
The map rewrites exactly the must-be-1 indices q, replacing the 1 there with
the code of the input's length-(q+1) prefix; everything else is preserved.

For fixed s the branch domains over t are pairwise disjoint with dense union,
so the branches glue to one partial map per s; the family is enumerated by
ranking the s parts by their coded value (slot n of the enumeration is the
glued map for the n-th sequence in code order).
"""

from __future__ import annotations

import threading
from bisect import bisect_left
from dataclasses import dataclass
from functools import lru_cache

from .base import CapacityError, DomainError, HorizonError, Tri
from .alphabet import PointPrefix
from .prime_coding import (
    SymbolicCode,
    decode,
    encode,
    is_code,
    make_code_value_sparse,
    nth_prime,
)

DEFAULT_HORIZON = 10**6

# test-device fault switches; see the verifier's mutation harness
FAULT_REWRITE_OFF_BY_ONE = "rewrite-off-by-one"
FAULT_DROP_NON_ONES = "drop-non-ones"


@dataclass(frozen=True)
class BranchIndex:
    s: tuple[int, ...]
    t: tuple[int, ...]

    def __post_init__(self):
        if len(self.t) != len(self.s) + 1:
            raise ValueError("branch index needs |t| = |s| + 1")
        if any(e < 0 for e in self.s) or any(e < 0 for e in self.t):
            raise ValueError("branch entries must be naturals")

    def top_index(self) -> int:
        """Largest rewritten coordinate: the code of s ⌢ t."""
        return encode(self.s + self.t)

    def __repr__(self) -> str:
        return f"(s={list(self.s)}, t={list(self.t)})"


@dataclass(frozen=True)
class CylinderConstraint:
    """Clopen domain data: must-be-1 and must-not-be-1 coordinate index sets."""

    ones: tuple[int, ...]
    non_ones: tuple[int, ...]


@dataclass(frozen=True)
class RewriteMap:
    """The coordinates a branch rewrites, in increasing order; the value written
    at q is the code of (input prefix of length q) ⌢ 1."""

    modified: tuple[int, ...]


@lru_cache(maxsize=65536)
def constraints(b: BranchIndex, fault: str | None = None) -> CylinderConstraint:
    ones = []
    non_ones = []
    for j in range(len(b.s) + 1):
        base = b.s[:j] + b.t[:j]
        for p in range(b.t[j]):
            non_ones.append(encode(base + (p,)))
        ones.append(encode(base + (b.t[j],)))
    if fault == FAULT_DROP_NON_ONES:
        non_ones = []
    return CylinderConstraint(tuple(ones), tuple(sorted(non_ones)))


def rewrites(b: BranchIndex) -> RewriteMap:
    return RewriteMap(constraints(b).ones)


def in_domain(x: PointPrefix, b: BranchIndex, fault: str | None = None) -> Tri:
    """Domain membership on the decidable range: a readable violation is
    decisive (NO) even if other constrained indices are unreadable."""
    cons = constraints(b, fault=fault)
    unknown = False
    for q in cons.ones:
        v = x.coord(q)
        if v is Tri.UNKNOWN:
            unknown = True
        elif v != 1:
            return Tri.NO
    for q in cons.non_ones:
        v = x.coord(q)
        if v is Tri.UNKNOWN:
            unknown = True
        elif v == 1:
            return Tri.NO
    return Tri.UNKNOWN if unknown else Tri.YES


def apply(b: BranchIndex, x: PointPrefix, fault: str | None = None) -> PointPrefix:
    """Image of x under the branch map.

    Raises DomainError when x is decidably outside the domain and HorizonError
    (carrying the needed index) when the prefix is too short to decide or to
    read the rewritten values.
    """
    membership = in_domain(x, b, fault=fault)
    if membership is Tri.NO:
        raise DomainError(f"point is outside the domain of {b}")
    if membership is Tri.UNKNOWN:
        cons = constraints(b, fault=fault)
        needed = max(cons.ones + cons.non_ones)
        raise HorizonError(needed, f"prefix too short to decide membership in {b}")
    cons = constraints(b, fault=fault)
    new_items = list(x.overrides)
    for q in cons.ones:
        if not x.tail_ones and q >= x.length:
            raise HorizonError(q)
        below = tuple((p, v) for p, v in x.overrides if p < q)
        val = make_code_value_sparse(q + 1, below)
        if fault == FAULT_REWRITE_OFF_BY_ONE:
            if isinstance(val, int):
                val += 1
            else:
                # same corruption in factored form: final entry off by one
                val = SymbolicCode(val.length, val.items + ((val.length - 1, 2),))
        new_items.append((q, val))
    length = max(x.length, cons.ones[-1] + 1)
    return PointPrefix(length, new_items, tail_ones=x.tail_ones)


def apply_inverse(b: BranchIndex, y: PointPrefix) -> tuple[Tri, PointPrefix | None]:
    """Partial inverse: reconstructs x with 1 at every rewritten index, then
    checks that y carries exactly the rewritten values and that x satisfies
    the domain constraints."""
    cons = constraints(b)
    pre_items = [(p, v) for p, v in y.overrides if p not in set(cons.ones)]
    x = PointPrefix(y.length, pre_items, tail_ones=y.tail_ones)
    for q in cons.ones:
        got = y.coord(q)
        if got is Tri.UNKNOWN:
            return Tri.UNKNOWN, None
        below = tuple((p, v) for p, v in x.overrides if p < q)
        expected = make_code_value_sparse(q + 1, below)
        if got != expected:
            return Tri.NO, None
    membership = in_domain(x, b)
    if membership is not Tri.YES:
        return membership, None
    return Tri.YES, x


def find_branch(
    s: tuple[int, ...], x: PointPrefix, horizon: int = DEFAULT_HORIZON
) -> tuple[Tri, tuple[int, ...] | None]:
    """Greedy branch discovery: level by level, t(j) is the least p whose
    candidate index reads 1 at x.  When it succeeds the branch is the unique
    one at this s-level containing x (domains over t are pairwise disjoint).
    Never definitely fails: a finite prefix cannot refute every t, and a scan
    leaving the index horizon reports unknown."""
    t: list[int] = []
    for j in range(len(s) + 1):
        base = s[:j] + tuple(t)
        base_val = encode(base) if base else 1
        q_j = nth_prime(len(base))
        p = 0
        idx = base_val * q_j
        while True:
            if idx > horizon:
                return Tri.UNKNOWN, None
            v = x.coord(idx)
            if v is Tri.UNKNOWN:
                return Tri.UNKNOWN, None
            if v == 1:
                t.append(p)
                break
            p += 1
            idx *= q_j
    return Tri.YES, tuple(t)


# --- enumeration of sequences by coded value --------------------------------

_codes_lock = threading.RLock()
_codes: list[int] = [0]
_codes_limit = 1  # all codes < _codes_limit are present in _codes


def _ensure_codes(limit: int) -> None:
    global _codes, _codes_limit
    if limit <= _codes_limit:
        return
    with _codes_lock:
        if limit <= _codes_limit:
            return
        fresh = list(_codes)
        for n in range(_codes_limit + (_codes_limit & 1), limit, 2):
            # codes of nonempty sequences are even
            if n and is_code(n):
                fresh.append(n)
        fresh.sort()
        # single rebinding so concurrent readers see a complete sorted table
        _codes = fresh
        _codes_limit = limit


def e(n: int) -> tuple[int, ...]:
    """The n-th finite sequence in increasing code order; e(0) = ()."""
    if n < 0:
        raise ValueError("rank must be a natural")
    while len(_codes) <= n:
        _ensure_codes(max(_codes_limit * 2, 16))
    return decode(_codes[n])


def e_inv(s: tuple[int, ...]) -> int:
    """Rank of a sequence in code order; strictly grows under extension."""
    c = encode(s)
    if c > 10**8:
        raise CapacityError("sequence rank beyond the enumeration cap")
    _ensure_codes(c + 1)
    i = bisect_left(_codes, c)
    return i


def branches_within(horizon: int) -> list[BranchIndex]:
    """Every branch index whose top rewritten coordinate is < horizon,
    ordered by that coordinate.  Codes of odd length 2k+1 split into
    (first k entries, last k+1 entries)."""
    _ensure_codes(horizon)
    out = []
    for c in _codes:
        if c == 0 or c >= horizon:
            continue
        w = decode(c)
        if len(w) % 2 == 1:
            k = len(w) // 2
            out.append(BranchIndex(w[:k], w[k:]))
    return out


def glued_slot(n: int) -> tuple[int, ...]:
    """The s part served by slot n of the glued family (alias of e)."""
    return e(n)


def apply_fn(n: int, x: PointPrefix) -> tuple[Tri, PointPrefix | None]:
    """Glued map number n: greedy branch discovery for s = e(n), then apply.

    The no arm cannot fire for these glued domains: a finite prefix can
    confirm membership but never refute every branch.
    """
    outcome, t = find_branch(e(n), x)
    if outcome is not Tri.YES:
        return outcome, None
    return Tri.YES, apply(BranchIndex(e(n), t), x)


def branch_by_rank(n: int, p: int) -> BranchIndex:
    """Branch number (n, p): s = e(n), t the p-th tuple of length |s|+1 in
    increasing code order."""
    s = e(n)
    want = len(s) + 1
    found = 0
    limit = 64
    while True:
        _ensure_codes(limit)
        found = 0
        for c in _codes:
            w = decode(c)
            if len(w) == want:
                if found == p:
                    return BranchIndex(s, w)
                found += 1
        if limit > 10**8:
            raise CapacityError("branch rank beyond the enumeration cap")
        limit *= 4
