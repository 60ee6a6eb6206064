"""Executable checker for the metric cascade arithmetic on synthetic distances.

A sample assigns abstract 1-dimensional rational positions to the nodes of a
finite labelled subtree of the positive-integer sequences, standing for the
values of a family of maps at one fixed point; distances are the absolute
differences, so symmetry, vanishing diagonal and the triangle inequality hold
by construction.  The conditions checked are

  (d)  every node keeps positive distance to each of its strict ancestors, and
  (e)  d(child, parent) < eps(child), where eps(s⌢k) is the minimum of 2^-k,
       a quarter of every consecutive ancestor gap, and a quarter of every
       earlier-sibling gap,

and the derived inequality: whenever s and t first differ at level i with
s(i) < t(i), d(s, t) >= d(s|i+1, s|i) / 3.  All arithmetic is exact.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd


@dataclass(frozen=True)
class CascadeSample:
    """Finite family of tree nodes with synthetic distances.

    Either built from abstract positions (``values``: node -> Fraction, the
    generator's route, metric axioms automatic) or from an explicit symmetric
    table (hand-built checker sanity cases).
    """

    nodes: tuple
    values: dict | None = None
    table: dict | None = None

    @classmethod
    def from_values(cls, values: dict) -> "CascadeSample":
        ordered = tuple(sorted(values, key=lambda n: (len(n), n)))
        return cls(ordered, dict(values))

    @classmethod
    def from_table(cls, nodes, table: dict) -> "CascadeSample":
        full = {}
        for (a, b), v in table.items():
            v = Fraction(v)
            if v < 0:
                raise ValueError("distances must be nonnegative")
            full[(a, b)] = v
            full[(b, a)] = v
        ordered = tuple(sorted(nodes, key=lambda n: (len(n), n)))
        return cls(ordered, None, full)

    def d(self, y: tuple, z: tuple) -> Fraction:
        if y == z:
            return Fraction(0)
        if self.values is not None:
            return abs(self.values[y] - self.values[z])
        return self.table[(y, z)]


def epsilon(sample: CascadeSample, child: tuple) -> Fraction:
    """The admissible-radius minimum for a child node s⌢k.

    The ancestor chain of s must be covered by the sample (missing entries
    raise); sibling terms run over the labels below k that the sample holds,
    which in a complete family is every positive label below k.
    """
    if not child:
        raise ValueError("the root has no admissible radius")
    s, k = child[:-1], child[-1]
    present = set(sample.nodes)
    best = Fraction(1, 2**k)
    for i in range(len(s)):
        best = min(best, sample.d(s[: i + 1], s[:i]) / 4)
    for j in range(k):
        sib = s + (j,)
        if sib in present:
            best = min(best, sample.d(sib, s) / 4)
    return best


@dataclass(frozen=True)
class ConditionReport:
    ok: bool
    violations: tuple


def check_admissibility(sample: CascadeSample, strict: bool = True) -> ConditionReport:
    """Both admissibility conditions over every non-root node of the sample.

    ``strict=False`` relaxes the radius bound to <= (a deliberate fault mode
    used by the mutation harness; the genuine condition is strict)."""
    violations = []
    for node in sample.nodes:
        if not node:
            continue
        parent = node[:-1]
        eps = epsilon(sample, node)
        gap = sample.d(node, parent)
        if (gap >= eps) if strict else (gap > eps):
            violations.append(("radius", node, gap, eps))
        for i in range(len(node)):
            if sample.d(node, node[:i]) == 0:
                violations.append(("ancestor-collision", node, node[:i]))
    return ConditionReport(not violations, tuple(violations))


def check_separation(sample: CascadeSample, s: tuple, t: tuple, i: int) -> bool:
    """d(s, t) >= d(s|i+1, s|i)/3 for a first-divergence triple."""
    if not (i < min(len(s), len(t)) and s[:i] == t[:i] and s[i] < t[i]):
        raise ValueError("need s and t first differing at level i with s(i) < t(i)")
    return 3 * sample.d(s, t) >= sample.d(s[: i + 1], s[:i])


def _first_diff(a: tuple, b: tuple) -> int | None:
    for i in range(min(len(a), len(b))):
        if a[i] != b[i]:
            return i
    return None


def eligible_triples(sample: CascadeSample):
    """Every (s, t, i): neither node a prefix of the other, first difference at
    level i, oriented so the level-i label of s is smaller."""
    nodes = sample.nodes
    for x in range(len(nodes)):
        for y in range(x + 1, len(nodes)):
            a, b = nodes[x], nodes[y]
            i = _first_diff(a, b)
            if i is None:
                continue
            yield (a, b, i) if a[i] < b[i] else (b, a, i)


def check_separation_all(sample: CascadeSample) -> tuple[int, list]:
    """Exhaustive scan over the eligible triples; integer fast path when the
    sample carries positions (numerators at a common power-of-two scale)."""
    if sample.values is None:
        checked = 0
        bad = []
        for s, t, i in eligible_triples(sample):
            checked += 1
            if not check_separation(sample, s, t, i):
                bad.append((s, t, i))
        return checked, bad

    scale = 1
    for v in sample.values.values():
        scale = scale * v.denominator // gcd(scale, v.denominator)
    num = {n: int(v * scale) for n, v in sample.values.items()}

    children: dict[tuple, list] = {}
    for n in sample.nodes:
        if n:
            children.setdefault(n[:-1], []).append(n)

    subtree: dict[tuple, list] = {}

    def collect(n: tuple) -> list:
        out = [n]
        for c in sorted(children.get(n, ())):
            out.extend(collect(c))
        subtree[n] = out
        return out

    collect(())

    nums_of = {n: [num[m] for m in sub] for n, sub in subtree.items()}
    checked = 0
    hit = False
    for w in sample.nodes:
        kids = sorted(children.get(w, ()))
        nw = num[w]
        for x in range(len(kids)):
            ref = abs(num[kids[x]] - nw)  # the common right-hand side, times 3 below
            small_nums = nums_of[kids[x]]
            for y in range(x + 1, len(kids)):
                for tn in nums_of[kids[y]]:
                    for ns in small_nums:
                        checked += 1
                        if 3 * abs(ns - tn) < ref:
                            hit = True
    if not hit:
        return checked, []
    bad = [
        (s, t, i)
        for s, t, i in eligible_triples(sample)
        if not check_separation(sample, s, t, i)
    ]
    return checked, bad


def gen_cascade(seed: int, depth: int, branching: int) -> CascadeSample:
    """Deterministic-from-seed sample satisfying both admissibility conditions
    by construction: ancestor gaps drawn first, children placed strictly
    inside the admissible radius and off every ancestor position."""
    if depth < 0 or branching < 0:
        raise ValueError("depth and branching must be naturals")
    rng = random.Random(seed)
    values: dict[tuple, Fraction] = {(): Fraction(0)}

    def eps_of(node: tuple, child_label: int) -> Fraction:
        best = Fraction(1, 2**child_label)
        for i in range(len(node)):
            best = min(best, abs(values[node[: i + 1]] - values[node[:i]]) / 4)
        for j in range(1, child_label):
            best = min(best, abs(values[node + (j,)] - values[node]) / 4)
        return best

    def grow(node: tuple, level: int) -> None:
        if level == depth:
            return
        ancestors = {values[node[:i]] for i in range(len(node) + 1)}
        for k in range(1, branching + 1):
            eps = eps_of(node, k)
            while True:
                r = Fraction(rng.randrange(1, 128), 128)
                sign = 1 if rng.randrange(2) else -1
                pos = values[node] + sign * eps * r / 2
                if pos not in ancestors:
                    break
            values[node + (k,)] = pos
        for k in range(1, branching + 1):
            grow(node + (k,), level + 1)

    grow((), 0)
    return CascadeSample.from_values(values)


def tight_child_sample() -> CascadeSample:
    """Two-node boundary case: the single child sits exactly on its admissible
    radius, so the strict check must reject it (negative control)."""
    return CascadeSample.from_values({(): Fraction(0), (1,): Fraction(1, 2)})


def violating_sample() -> CascadeSample:
    """Radius condition deliberately broken; the derived inequality then fails
    on the colliding siblings."""
    return CascadeSample.from_values(
        {(): Fraction(0), (1,): Fraction(1, 4), (2,): Fraction(1, 4)}
    )
