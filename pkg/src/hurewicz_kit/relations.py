"""Relations between equal-depth nodes induced by the branch maps, and the
forest structure of their symmetric closure.

Two depth-L nodes satisfy s R t when some branch map carries a point of the
s-cylinder into the t-cylinder.  Only constraint indices below L matter:
every index is a code, so decoding the naturals below L yields a complete
finite witness basis, and constraints at indices >= L are always satisfiable
(set the must-be-1 coordinates to 1 and the others to any of the >= 1
remaining alphabet members).  An effective witness is the truncation of a
branch to the constraints below L.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .alphabet import DEFAULT_DEPTH_CAP, enumerate_nodes
from .departure import BranchIndex, e_inv
from .prime_coding import encode, make_code_value


@dataclass(frozen=True)
class EffectiveWitness:
    """Branch truncated to its constraints below the node length; ``cut`` is
    the first level whose rewritten index reaches past that length (one past
    the last level when every constraint is in range)."""

    branch: BranchIndex
    cut: int


@lru_cache(maxsize=65536)
def _expected_rewrite(prefix: tuple):
    return make_code_value(prefix + (1,))


def _witness_search(s: tuple, t: tuple) -> list[EffectiveWitness]:
    """All closed effective witnesses carrying the s-cylinder into the
    t-cylinder, shortest stems first."""
    L = len(s)
    remaining = []
    for q in range(L):
        if s[q] != t[q]:
            if s[q] != 1 or t[q] != _expected_rewrite(s[:q]):
                return []
            remaining.append(q)
    found: list[EffectiveWitness] = []

    def at_level(u: tuple, v: tuple, todo: frozenset) -> None:
        m = 0
        while True:
            idx = encode(u + v + (m,))
            if idx >= L:
                # cut point: this level's rewrite lands past the node, and all
                # scanned lower candidates were satisfied non-1 constraints
                if not todo:
                    found.append(EffectiveWitness(BranchIndex(u, v + (m,)), len(u)))
                return
            if s[idx] == 1:
                # only this m can rewrite here; larger m would demand a non-1
                if idx in todo:
                    rest = todo - {idx}
                    if not rest:
                        found.append(
                            EffectiveWitness(BranchIndex(u, v + (m,)), len(u) + 1)
                        )
                    else:
                        a = 0
                        while encode(u + (a,) + v + (m, 0)) < L:
                            at_level(u + (a,), v + (m,), rest)
                            a += 1
                return
            m += 1

    at_level((), (), frozenset(remaining))
    return found


def rel_R(s: tuple, t: tuple) -> bool:
    """Whether some branch map sends a point of the s-cylinder into the
    t-cylinder (equal lengths; forces s lexicographically <= t)."""
    if len(s) != len(t):
        raise ValueError("relation needs equal-length nodes")
    return bool(_witness_search(s, t))


def rel_witnesses(s: tuple, t: tuple) -> list[EffectiveWitness]:
    if len(s) != len(t):
        raise ValueError("relation needs equal-length nodes")
    return _witness_search(s, t)


@dataclass(frozen=True)
class PsiResult:
    rank: int | None
    witness: EffectiveWitness | None


def psi(s: tuple, t: tuple) -> PsiResult:
    """Least slot of the glued family relating s to t, with the witness stem.

    Every full branch witnessing the relation extends a closed witness stem,
    and the enumeration rank grows under extension, so the minimum is attained
    at a stem.
    """
    ws = rel_witnesses(s, t)
    if not ws:
        return PsiResult(None, None)
    best = min(ws, key=lambda w: e_inv(w.branch.s))
    return PsiResult(e_inv(best.branch.s), best)


def self_related_profile(s: tuple) -> bool:
    """Closed-form test for s R s: no entry 1 at a positive power of 2 below
    the node length."""
    k = 2
    while k < len(s):
        if s[k] == 1:
            return False
        k *= 2
    return True


@dataclass(frozen=True)
class RelationGraph:
    """Symmetric closure of the relation on depth-``length`` nodes.

    Edges are index pairs into ``nodes`` (i < j) with the relating slot rank;
    loops are kept apart; unique-chain verification ignores them.
    """

    length: int
    nodes: tuple
    edges: tuple  # (i, j, psi_rank)
    loops: tuple  # node indices with s R s

    def adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {i: [] for i in range(len(self.nodes))}
        for i, j, _ in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return adj


def t_graph(p: int, cap: int = DEFAULT_DEPTH_CAP) -> RelationGraph:
    """Complete relation graph over the depth-p nodes.

    The relation demands s <=_lex t, so an unordered pair carries at most one
    direction; nodes come enumerated in lexicographic order already.
    """
    nodes = enumerate_nodes(p, cap)
    loops = tuple(i for i, nd in enumerate(nodes) if rel_R(nd, nd))
    edges = []
    for i, j in itertools.combinations(range(len(nodes)), 2):
        ws = _witness_search(nodes[i], nodes[j])
        if ws:
            rank = min(e_inv(w.branch.s) for w in ws)
            edges.append((i, j, rank))
    return RelationGraph(p, tuple(nodes), tuple(edges), loops)


def t_chain(s: tuple, t: tuple, g: RelationGraph) -> list[tuple] | None:
    """The repetition-free chain from s to t in the symmetric closure, or None
    when they are not equivalent.  Unique when the graph is a forest; BFS
    returns it."""
    index = {nd: i for i, nd in enumerate(g.nodes)}
    if s not in index or t not in index:
        raise ValueError("nodes not in the graph")
    src, dst = index[s], index[t]
    if src == dst:
        return [s]
    adj = g.adjacency()
    prev: dict[int, int] = {src: src}
    frontier = [src]
    while frontier:
        nxt = []
        for u in frontier:
            for v in adj[u]:
                if v not in prev:
                    prev[v] = u
                    if v == dst:
                        path = [v]
                        while path[-1] != src:
                            path.append(prev[path[-1]])
                        return [g.nodes[i] for i in reversed(path)]
                    nxt.append(v)
        frontier = nxt
    return None


@dataclass(frozen=True)
class ForestReport:
    acyclic: bool
    node_count: int
    edge_count: int
    loop_count: int
    cycle: tuple | None  # nodes of a cycle when one exists


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        return True


def verify_forest(g: RelationGraph) -> ForestReport:
    """Acyclicity of the non-loop edge set via union-find; on failure the
    report carries one explicit cycle (path between the offending endpoints
    plus the closing edge)."""
    uf = _UnionFind(len(g.nodes))
    adj: dict[int, list[int]] = {i: [] for i in range(len(g.nodes))}
    for i, j, _ in g.edges:
        if not uf.union(i, j):
            path = _bfs_path(adj, i, j)
            cycle = tuple(g.nodes[k] for k in path + [i])
            return ForestReport(False, len(g.nodes), len(g.edges), len(g.loops), cycle)
        adj[i].append(j)
        adj[j].append(i)
    return ForestReport(True, len(g.nodes), len(g.edges), len(g.loops), None)


def _bfs_path(adj: dict[int, list[int]], src: int, dst: int) -> list[int]:
    prev = {src: src}
    frontier = [src]
    while frontier:
        nxt = []
        for u in frontier:
            for v in adj[u]:
                if v not in prev:
                    prev[v] = u
                    if v == dst:
                        path = [v]
                        while path[-1] != src:
                            path.append(prev[path[-1]])
                        return list(reversed(path))
                    nxt.append(v)
        frontier = nxt
    raise AssertionError("no path despite union-find merge")


def graph_from_edges(length: int, nodes, edges, loops=()) -> RelationGraph:
    """Assemble a graph from explicit data (checker sanity cases)."""
    return RelationGraph(length, tuple(nodes), tuple(edges), tuple(loops))
