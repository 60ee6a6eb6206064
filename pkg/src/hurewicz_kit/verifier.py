"""Batch verification suites over the finite-depth combinatorics.

Every suite is a pure function of its parameters (depth, horizon, sample
count, seed) and produces a report that serializes to byte-identical JSON on
repeated runs.  Limit statements are only ever checked as finite shadows with
explicit index bounds; an exhausted horizon counts as inconclusive, never as
a failure.  Deliberate fault switches let the test suite confirm that each
check actually bites.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

from .base import Tri
from . import alphabet as alph
from . import cascade as casc
from . import departure as dep
from . import good_sequence as good
from . import relations as rel
from .alphabet import PointPrefix, first_disagreement, member_cmp, member_valid
from .departure import (
    FAULT_DROP_NON_ONES,
    FAULT_REWRITE_OFF_BY_ONE,
    BranchIndex,
)
from .prime_coding import decode, make_code_value_sparse, render_value

FAULT_EPSILON_NONSTRICT = "epsilon-nonstrict"
ALL_FAULTS = (FAULT_REWRITE_OFF_BY_ONE, FAULT_DROP_NON_ONES, FAULT_EPSILON_NONSTRICT)

_COUNTEREXAMPLE_CAP = 5


@dataclass
class Check:
    name: str
    passed: int = 0
    failed: int = 0
    inconclusive: int = 0
    counterexamples: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def ok(self, n: int = 1) -> None:
        self.passed += n

    def fail(self, **payload) -> None:
        self.failed += 1
        if len(self.counterexamples) < _COUNTEREXAMPLE_CAP:
            self.counterexamples.append({k: _show(v) for k, v in payload.items()})

    def skip(self, n: int = 1) -> None:
        self.inconclusive += n

    def require(self, condition: bool, **payload) -> None:
        if condition:
            self.ok()
        else:
            self.fail(**payload)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "failed": self.failed,
            "inconclusive": self.inconclusive,
            "counterexamples": self.counterexamples,
            "notes": self.notes,
        }


def _show(v) -> object:
    if isinstance(v, (int, str, bool)) or v is None:
        return v
    if isinstance(v, tuple):
        return "(" + ",".join(str(_show(e)) for e in v) + ")"
    return repr(v)


@dataclass
class VerificationReport:
    suite: str
    params: dict
    checks: list

    @property
    def failed(self) -> int:
        return sum(c.failed for c in self.checks)

    @property
    def inconclusive(self) -> int:
        return sum(c.inconclusive for c in self.checks)

    def to_json_dict(self) -> dict:
        return {
            "schema": "hurewicz-kit/1",
            "suite": self.suite,
            "params": {k: _show(v) for k, v in sorted(self.params.items())},
            "checks": [c.as_dict() for c in self.checks],
            "summary": {
                "passed": sum(c.passed for c in self.checks),
                "failed": self.failed,
                "inconclusive": self.inconclusive,
            },
        }

    def to_json_bytes(self) -> bytes:
        return (
            json.dumps(self.to_json_dict(), indent=2, sort_keys=True, ensure_ascii=True)
            + "\n"
        ).encode()


# --- sampling helpers --------------------------------------------------------


def _noise_member(level: int, rng: random.Random):
    if level < 4:
        return rng.choice(alph.alphabet_at(level))
    return rng.choice(
        (1, make_code_value_sparse(level + 1, ()), make_code_value_sparse(level + 1, ((0, 4),)))
    )


def _non_one_member(level: int, rng: random.Random):
    if level < 4:
        return rng.choice(alph.alphabet_at(level)[1:])
    if rng.randrange(2):
        return make_code_value_sparse(level + 1, ())
    return make_code_value_sparse(level + 1, ((0, 4),))


def _sample_domain_point(cons: dep.CylinderConstraint, rng: random.Random) -> PointPrefix:
    top = cons.ones[-1]
    length = top + 1 + rng.randrange(3)
    overrides = {}
    for q in cons.non_ones:
        overrides[q] = _non_one_member(q, rng)
    blocked = set(cons.ones) | set(cons.non_ones)
    for _ in range(rng.randrange(4)):
        i = rng.randrange(length)
        if i in blocked:
            continue
        v = _noise_member(i, rng)
        if v != 1:
            overrides[i] = v
    return PointPrefix(length, overrides.items(), tail_ones=True)


def _in_domain_cons(x: PointPrefix, cons: dep.CylinderConstraint) -> Tri:
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


# --- departure suite ---------------------------------------------------------

_DEPARTURE_GROUPS = ("branch-axioms", "density", "relations")


def verify_departure(
    depth: int = 3,
    horizon: int = 10_000,
    samples: int = 50,
    seed: int = 0,
    fault: str | None = None,
    relations_depth: int | None = None,
    include: tuple = _DEPARTURE_GROUPS,
) -> VerificationReport:
    """Finite-depth checks of the branch-map axioms against the concrete family.

    Covers: well-formed constraint sets; strict lexicographic increase and
    coordinate stabilization beyond the top rewritten index; alphabet closure
    and injectivity of the rewrites; nested domains with the disagreement
    bound between a branch and its extensions; pairwise disjointness of
    same-level branch domains; density (greedy placement of every node in
    exactly one enumerated branch domain per stem); and the relation axioms
    delegated to the relation machinery.
    """
    if relations_depth is None:
        relations_depth = min(depth, 3)
    params = {
        "depth": depth,
        "horizon": horizon,
        "samples": samples,
        "seed": seed,
        "fault": fault,
        "relations_depth": relations_depth,
        "include": ",".join(include),
    }
    checks: list[Check] = []
    branches = dep.branches_within(horizon)
    cons_map = {b: dep.constraints(b, fault=fault) for b in branches}

    if "branch-axioms" in include:
        checks.extend(
            _branch_axiom_checks(branches, cons_map, samples, seed, fault)
        )
    if "density" in include:
        checks.append(_density_check(depth, horizon, branches, cons_map, fault))
    if "relations" in include:
        checks.extend(_relation_checks(relations_depth))
    return VerificationReport("departure", params, checks)


def _branch_axiom_checks(branches, cons_map, samples, seed, fault):
    wellformed = Check("constraint-wellformedness")
    lex = Check("lex-increase")
    stab = Check("stabilization-beyond-top")
    closure = Check("alphabet-closure")
    inject = Check("injectivity-on-samples")
    nested = Check("nested-domains")
    bound = Check("stability-bound")
    disjoint = Check("branch-disjointness")

    for b in branches:
        cons = cons_map[b]
        increasing = all(a < c for a, c in zip(cons.ones, cons.ones[1:]))
        wellformed.require(
            increasing and not (set(cons.ones) & set(cons.non_ones)),
            branch=b,
            ones=cons.ones,
            non_ones=cons.non_ones,
        )

        rng = random.Random(seed * 1_000_003 + b.top_index())
        seen: dict = {}
        for _ in range(samples):
            x = _sample_domain_point(cons, rng)
            y = dep.apply(b, x, fault=fault)
            fd = first_disagreement(x, y)
            lex.require(
                isinstance(fd, int)
                and fd == cons.ones[0]
                and member_cmp(fd, x.coord(fd), y.coord(fd)) < 0,
                branch=b,
                point=x,
                image=y,
                first_disagreement=fd,
            )
            top = cons.ones[-1]
            tail_positions = {p for p, _ in x.overrides} | {p for p, _ in y.overrides}
            stab.require(
                all(x.coord(p) == y.coord(p) for p in tail_positions if p > top),
                branch=b,
                point=x,
                image=y,
            )
            if all(y.coord(q) != 1 and member_valid(q, y.coord(q)) for q in cons.ones):
                closure.ok()
            else:
                closure.fail(
                    branch=b,
                    point=x,
                    rewrites=tuple(render_value(y.coord(q)) for q in cons.ones),
                )
            k = y.key()
            if k in seen and seen[k] != x.key():
                inject.fail(branch=b, image=y, point=x)
            else:
                seen[k] = x.key()
                inject.ok()

        # extensions of b inside the horizon: nested domains + disagreement bound
        parent = _parent_branch(b)
        if parent is not None:
            pcons = cons_map.get(parent)
            if pcons is None:
                pcons = dep.constraints(parent, fault=fault)
            nested.require(
                set(pcons.ones) <= set(cons.ones)
                and set(pcons.non_ones) <= set(cons.non_ones),
                child=b,
                parent=parent,
            )
            rng2 = random.Random(seed * 2_000_003 + b.top_index())
            for _ in range(samples):
                x = _sample_domain_point(cons, rng2)
                if _in_domain_cons(x, pcons) is not Tri.YES:
                    nested.fail(child=b, parent=parent, point=x)
                    continue
                fd = first_disagreement(
                    dep.apply(b, x, fault=fault), dep.apply(parent, x, fault=fault)
                )
                bound.require(
                    isinstance(fd, int) and fd >= b.top_index(),
                    child=b,
                    parent=parent,
                    point=x,
                    first_disagreement=fd,
                )

    by_stem: dict[tuple, list] = {}
    for b in branches:
        by_stem.setdefault(b.s, []).append(b)
    for stem, group in sorted(by_stem.items()):
        for i in range(len(group)):
            for j in range(i + 1, len(group)):
                c1, c2 = cons_map[group[i]], cons_map[group[j]]
                contradiction = bool(
                    set(c1.ones) & set(c2.non_ones) or set(c2.ones) & set(c1.non_ones)
                )
                disjoint.require(
                    contradiction, first=group[i], second=group[j], stem=stem
                )
    return [wellformed, lex, stab, closure, inject, nested, bound, disjoint]


def _parent_branch(b: BranchIndex) -> BranchIndex | None:
    if not b.s:
        return None
    return BranchIndex(b.s[:-1], b.t[:-1])


def _density_check(depth, horizon, branches, cons_map, fault) -> Check:
    """Every node of each depth up to ``depth``, completed by the all-ones
    tail, lands via greedy discovery in exactly one enumerated branch domain
    per stem with coded value below the horizon."""
    check = Check("density-unique-branch")
    dep._ensure_codes(horizon)
    stems = [decode(c) for c in dep._codes if c < horizon]
    by_stem: dict[tuple, list] = {}
    for b in branches:
        by_stem.setdefault(b.s, []).append(b)
    for p in range(depth + 1):
        for node in alph.enumerate_nodes(p):
            x = alph.point_from_node(node)
            for s in stems:
                # reads are decidable at any index under the tail convention
                outcome, t = dep.find_branch(s, x, horizon=10**15)
                if outcome is not Tri.YES:
                    check.fail(stem=s, node=node, outcome=outcome.value)
                    continue
                found = BranchIndex(s, t)
                if dep.in_domain(x, found, fault=fault) is not Tri.YES:
                    check.fail(stem=s, node=node, found=found)
                    continue
                expected = 1 if found.top_index() < horizon else 0
                hits = sum(
                    1
                    for b in by_stem.get(s, ())
                    if _in_domain_cons(x, cons_map[b]) is Tri.YES
                )
                check.require(
                    hits == expected,
                    stem=s,
                    node=node,
                    found=found,
                    domains_hit=hits,
                    expected=expected,
                )
    return check


def _relation_checks(relations_depth: int) -> list[Check]:
    self_rank = Check("self-relation-rank-zero")
    profile = Check("self-relation-profile")
    append = Check("append-preserves-rank")
    forest = Check("chain-forest")
    for p in range(relations_depth + 1):
        nodes = alph.enumerate_nodes(p)
        for nd in nodes:
            related = rel.rel_R(nd, nd)
            profile.require(
                related == rel.self_related_profile(nd), node=nd, related=related
            )
            if related:
                self_rank.require(rel.psi(nd, nd).rank == 0, node=nd)
        if p < relations_depth:
            labels = alph.alphabet_at(p)
            for ss in nodes:
                for tt in nodes:
                    base = rel.psi(ss, tt).rank
                    for j in labels:
                        child = rel.psi(ss + (j,), tt + (j,))
                        if child.rank is None:
                            continue
                        if child.rank == base:
                            append.ok()
                        else:
                            append.fail(
                                s=ss,
                                t=tt,
                                label=render_value(j) if j != 1 else 1,
                                child_rank=child.rank,
                                parent_rank=base,
                            )
        g = rel.t_graph(p)
        report = rel.verify_forest(g)
        forest.require(
            report.acyclic,
            length=p,
            edges=report.edge_count,
            cycle=report.cycle,
        )
    return [self_rank, profile, append, forest]


# --- accumulation-point suite ------------------------------------------------


def verify_no_isolated(
    depth: int = 2,
    horizon: int = 1000,
    samples: int = 20,
    seed: int = 0,
    extensions: int = 3,
    fault: str | None = None,
) -> VerificationReport:
    """Finite shadow of the no-isolated-image property: wherever a branch
    applies, extended branches apply too, and their images agree with the
    original image up to the extension's top rewritten index while differing
    beyond it.  Also bounds the number of distinct image prefixes across all
    applicable branches (equicontinuity shadow)."""
    params = {
        "depth": depth,
        "horizon": horizon,
        "samples": samples,
        "seed": seed,
        "extensions": extensions,
        "fault": fault,
    }
    approx = Check("extension-approximates")
    equi = Check("equicontinuity-shadow")
    rng = random.Random(seed)
    nodes = alph.enumerate_nodes(depth)
    picked = sorted(rng.sample(range(len(nodes)), min(samples, len(nodes))))
    points = [alph.ALL_ONES] + [alph.point_from_node(nodes[i]) for i in picked]
    branches = dep.branches_within(horizon)

    for x in points:
        applicable = [b for b in branches if dep.in_domain(x, b, fault=fault) is Tri.YES]
        prec = depth + 2
        prefixes = set()
        for b in applicable:
            y = dep.apply(b, x, fault=fault)
            prefixes.add(tuple(y.coord(i) for i in range(prec)))
            base_image = y
            for n in range(extensions):
                ext_s = b.s + (n,)
                outcome, t_ext = dep.find_branch(ext_s, x, horizon=10**15)
                if outcome is not Tri.YES:
                    approx.skip()
                    continue
                ext = BranchIndex(ext_s, t_ext)
                if ext.top_index() > 10**7:
                    approx.skip()
                    continue
                fd = first_disagreement(dep.apply(ext, x, fault=fault), base_image)
                approx.require(
                    isinstance(fd, int) and fd >= ext.top_index(),
                    base=b,
                    extension=ext,
                    point=x,
                    first_disagreement=fd,
                )
        ceiling = 1 + sum(
            1 for c in dep._codes if 0 < c < prec and len(decode(c)) % 2 == 1
        )
        equi.require(
            len(prefixes) <= ceiling,
            point=x,
            distinct_prefixes=len(prefixes),
            ceiling=ceiling,
        )
    return VerificationReport("no-isolated", params, [approx, equi])


# --- alternating-composition scan ---------------------------------------------


def verify_arrival_scan(
    depth: int = 2,
    horizon: int = 200,
    max_chain: int = 1,
    seed: int = 0,
) -> VerificationReport:
    """Exploratory scan for fixed points of alternating compositions
    f^{-1}∘f∘...∘f of distinct branches.  Reports which compositions have a
    nonempty domain on the sampled points and whether any acts as the
    identity there; findings are informational, not failures."""
    params = {"depth": depth, "horizon": horizon, "max_chain": max_chain, "seed": seed}
    scan = Check("alternating-compositions")
    branches = dep.branches_within(horizon)
    points = [alph.ALL_ONES] + [
        alph.point_from_node(nd) for nd in alph.enumerate_nodes(depth)
    ]
    # one extra point per branch from inside its image, so inverses get traffic
    rng = random.Random(seed)
    for b in branches:
        cons = dep.constraints(b)
        x = _sample_domain_point(cons, rng)
        points.append(dep.apply(b, x))

    findings = []

    def explore(word: list, states: list, position: int) -> None:
        if position < 0:
            survivors = [(i, cur) for i, cur in states]
            identities = [
                i for i, cur in survivors if first_disagreement(cur, points[i]) is None
            ]
            scan.ok()
            if survivors:
                findings.append(
                    {
                        "word": "[" + " ".join(repr(b) for b in word) + "]",
                        "nonempty_on_samples": len(survivors),
                        "identity_hits": len(identities),
                    }
                )
            return
        direct = position % 2 == 1
        for b in branches:
            if word and b == word[-1]:
                continue
            nxt = []
            for i, cur in states:
                if direct:
                    if dep.in_domain(cur, b) is Tri.YES:
                        nxt.append((i, dep.apply(b, cur)))
                else:
                    outcome, pre = dep.apply_inverse(b, cur)
                    if outcome is Tri.YES:
                        nxt.append((i, pre))
            if nxt:
                explore(word + [b], nxt, position - 1)
            else:
                scan.ok()

    for k in range(1, max_chain + 1):
        explore([], list(enumerate(points)), 2 * k - 1)
    identity_findings = [f for f in findings if f["identity_hits"]]
    scan.notes.append(f"compositions with nonempty sampled domain: {len(findings)}")
    scan.notes.append(f"identity occurrences: {len(identity_findings)}")
    for f in findings[:20]:
        scan.notes.append(
            f"{f['word']}: nonempty on {f['nonempty_on_samples']} samples, "
            f"{f['identity_hits']} identity hits"
        )
    return VerificationReport("arrival-scan", params, [scan])


# --- index-substitution suite ---------------------------------------------------


def verify_good_sequence(
    max_s_len: int = 3,
    max_entry: int = 4,
    horizon: int = 100_000,
    pair_max_len: int = 2,
    pair_max_entry: int = 3,
    max_u_len: int = 12,
) -> VerificationReport:
    """Index-map injectivity on an initial segment, the agreement horizon
    between a map and its extensions, and dense disagreement witnesses."""
    params = {
        "max_s_len": max_s_len,
        "max_entry": max_entry,
        "horizon": horizon,
        "pair_max_len": pair_max_len,
        "pair_max_entry": pair_max_entry,
        "max_u_len": max_u_len,
    }
    injective = Check("index-map-injective")
    fixes = Check("index-map-fixes-coprime")
    agree = Check("extension-agreement-horizon")
    witness = Check("disagreement-witness")

    for s in _index_family(max_s_len, max_entry):
        sig = good.IndexMap(s)
        seen: dict[int, int] = {}
        collision = None
        for k in range(horizon):
            v = sig(k)
            if v in seen:
                collision = (seen[v], k, v)
                break
            seen[v] = k
        injective.require(collision is None, s=s, collision=collision)
        divisors = good._divisors(s)
        bad = next(
            (
                k
                for k in range(min(horizon, 2000))
                if all((k + 1) % d for d in divisors) and sig(k) != k
            ),
            None,
        )
        fixes.require(bad is None, s=s, moved=bad)

    for s in _index_family(max_s_len - 1, max_entry):
        previous = None
        for k in range(1, max_entry + 1):
            b = good.convergence_bound(s, k)
            moved = good.agreement_below_bound(s, k, horizon)
            agree.require(moved is None, s=s, k=k, first_disagreement=moved)
            if previous is not None:
                agree.require(b > previous, s=s, k=k, bound=b, previous=previous)
            previous = b

    pairs = [
        (s, t)
        for s in _index_family(pair_max_len, pair_max_entry)
        for t in _index_family(pair_max_len, pair_max_entry)
        if s != t
    ]
    for s, t in pairs:
        for u in _all_words(max_u_len):
            x, k = good.disagreement_witness(s, t, u)
            a, b = good.h_eval(s, x, k), good.h_eval(t, x, k)
            okay = (
                a is not Tri.UNKNOWN
                and b is not Tri.UNKNOWN
                and a != b
                and x.bits[: len(u)] == u
            )
            if okay:
                witness.ok()
            else:
                witness.fail(s=s, t=t, u=u.hex(), k=k)
    return VerificationReport("good-suite", params, [injective, fixes, agree, witness])


def _index_family(max_len: int, max_entry: int):
    out = [()]
    frontier = [()]
    for _ in range(max_len):
        frontier = [s + (v,) for s in frontier for v in range(1, max_entry + 1)]
        out.extend(frontier)
    return out


def _all_words(max_len: int):
    for n in range(max_len + 1):
        for mask in range(1 << n):
            yield bytes((mask >> i) & 1 for i in range(n))


# --- cascade suite -------------------------------------------------------------


def verify_cascade(
    trials: int = 10_000,
    seed: int = 0,
    max_depth: int = 4,
    max_branching: int = 4,
    fault: str | None = None,
) -> VerificationReport:
    """Seeded cascade samples: admissibility by construction, then the derived
    separation inequality on every eligible triple, in exact arithmetic.
    Includes negative controls that the strict radius check must reject."""
    params = {
        "trials": trials,
        "seed": seed,
        "max_depth": max_depth,
        "max_branching": max_branching,
        "fault": fault,
    }
    strict = fault != FAULT_EPSILON_NONSTRICT
    valid = Check("generated-samples-admissible")
    implication = Check("admissible-implies-separation")
    boundary = Check("boundary-control-rejected")
    control = Check("violating-control-detected")

    triples_total = 0
    for t in range(trials):
        depth = 1 + t % max_depth
        branching = 1 + (t // max_depth) % max_branching
        sample = casc.gen_cascade(seed + t, depth, branching)
        report = casc.check_admissibility(sample, strict=strict)
        valid.require(
            report.ok, trial=t, depth=depth, branching=branching,
            violations=report.violations[:2],
        )
        if not report.ok:
            continue
        checked, bad = casc.check_separation_all(sample)
        triples_total += checked
        implication.require(
            not bad, trial=t, depth=depth, branching=branching, first=bad[:2]
        )
    implication.notes.append(f"eligible triples checked: {triples_total}")

    tight = casc.tight_child_sample()
    boundary.require(
        not casc.check_admissibility(tight, strict=strict).ok,
        sample="single child exactly on its admissible radius",
        strict=strict,
    )
    broken = casc.violating_sample()
    rep = casc.check_admissibility(broken, strict=strict)
    _, bad = casc.check_separation_all(broken)
    control.require(
        (not rep.ok) and bool(bad),
        conditions_ok=rep.ok,
        separation_violations=len(bad),
    )
    return VerificationReport("cascade", params, [valid, implication, boundary, control])


# --- mutation harness ----------------------------------------------------------


def mutation_report(seed: int = 0) -> VerificationReport:
    """Run each documented fault through a small suite and demand detection
    with a concrete counterexample."""
    params = {"seed": seed}
    checks = []
    runs = {
        # horizon 200 keeps every rewritten value materialized, which the
        # off-by-one corruption needs
        FAULT_REWRITE_OFF_BY_ONE: lambda: verify_departure(
            depth=2, horizon=200, samples=20, seed=seed,
            fault=FAULT_REWRITE_OFF_BY_ONE, include=("branch-axioms",),
        ),
        FAULT_DROP_NON_ONES: lambda: verify_departure(
            depth=2, horizon=200, samples=20, seed=seed,
            fault=FAULT_DROP_NON_ONES, include=("branch-axioms", "density"),
        ),
        FAULT_EPSILON_NONSTRICT: lambda: verify_cascade(
            trials=20, seed=seed, fault=FAULT_EPSILON_NONSTRICT
        ),
    }
    for fault, run in runs.items():
        report = run()
        detected = report.failed > 0
        witnesses = [
            {"check": c.name, "counterexample": c.counterexamples[0]}
            for c in report.checks
            if c.failed and c.counterexamples
        ]
        check = Check(f"detects-{fault}")
        check.require(
            detected and bool(witnesses),
            fault=fault,
            failed_checks=report.failed,
        )
        check.notes.extend(json.dumps(w, sort_keys=True) for w in witnesses[:3])
        checks.append(check)
    return VerificationReport("mutation", params, checks)


SUITES = {
    "departure": verify_departure,
    "no-isolated": verify_no_isolated,
    "arrival-scan": verify_arrival_scan,
    "good-suite": verify_good_sequence,
    "cascade": verify_cascade,
    "mutation": mutation_report,
}
