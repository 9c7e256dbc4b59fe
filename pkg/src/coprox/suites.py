"""Instance batteries reproducing consequences of the coproduct theorems.

Each suite returns a :class:`SuiteReport` listing every assertion it made,
how many instances it was checked on and the first counterexample found.
Reports are deterministic for a fixed seed.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from . import __version__
from .coproduct import Coproduct, CoproductPoint, TemplateCoproduct, _CoproductBase, disjoint_closure, inject
from .dimension import (DeltaCovering, DimensionCertificate, RefinementAssignment, brute_delta_dim,
                        dim_sup_check, first_fit_assignment, multiplicity, reindex_refinement,
                        validate_covering, verify_certificate)
from .germs import (atoms, classify_germ, coproduct_generators, enumerate_germs, extend_germ,
                    germ_components)
from .regions import NEG_INF, POS_INF, Interval, normalize, parse_region, random_region
from .spaces import (ALEKSANDROFF, METRIC, REAL_KINDS, STANDARD, STONECECH, Budget, FiniteSpace,
                     ProximitySpace, RealLine, verify_axioms)

DEFAULT_SEED = 20240101


@dataclass
class Assertion:
    name: str
    checked: int = 0
    failed: int = 0
    counterexample: Any = None

    @property
    def passed(self) -> bool:
        return self.failed == 0 and self.checked > 0

    def to_json(self) -> dict:
        return {"name": self.name, "checked": self.checked, "failed": self.failed,
                "passed": self.passed, "counterexample": self.counterexample}


@dataclass
class SuiteReport:
    suite: str
    seed: int
    instances: List[str] = field(default_factory=list)
    assertions: Dict[str, Assertion] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)
    version: str = __version__
    input_digest: str = "none"

    def check(self, name: str, ok: bool, counterexample: Any = None) -> bool:
        a = self.assertions.setdefault(name, Assertion(name))
        a.checked += 1
        if not ok:
            a.failed += 1
            if a.counterexample is None:
                a.counterexample = counterexample
        return ok

    @property
    def passed(self) -> bool:
        return bool(self.assertions) and all(a.passed for a in self.assertions.values())

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "version": self.version,
            "input_digest": self.input_digest,
            "passed": self.passed,
            "instances": self.instances,
            "assertions": [a.to_json() for a in self.assertions.values()],
            "notes": self.notes,
        }


# ---------------------------------------------------------------------------
# Instance generators


def partitions(items: Sequence) -> List[List[List]]:
    """All set partitions of ``items`` (restricted growth order)."""
    items = list(items)
    if not items:
        return [[]]
    first, rest = items[0], items[1:]
    out = []
    for p in partitions(rest):
        out.append([[first]] + [list(b) for b in p])
        for k in range(len(p)):
            q = [list(b) for b in p]
            q[k] = [first] + q[k]
            out.append(q)
    return out


def reflexive_symmetric_relations(points: Sequence) -> List[List[Tuple]]:
    pairs = list(itertools.combinations(points, 2))
    return [[p for p, bit in zip(pairs, bits) if bit]
            for bits in itertools.product((0, 1), repeat=len(pairs))]


def random_partition_space(rng: random.Random, max_points: int = 4, prefix: str = "p") -> FiniteSpace:
    n = rng.randint(1, max_points)
    pts = [f"{prefix}{i}" for i in range(n)]
    blocks: Dict[int, list] = {}
    for p in pts:
        blocks.setdefault(rng.randrange(n), []).append(p)
    return FiniteSpace.from_partition(list(blocks.values()))


def classes(space: FiniteSpace) -> List[frozenset]:
    seen, out = set(), []
    for p in space.points:
        if p not in seen:
            cls = space.neighbours[p]
            seen |= cls
            out.append(cls)
    return out


def default_generators(space: ProximitySpace, rng: Optional[random.Random] = None) -> list:
    """Closeness classes on finite equivalence spaces, singletons on other
    finite spaces, a couple of random regions on the line."""
    if isinstance(space, FiniteSpace):
        if space.is_equivalence():
            return classes(space)
        return [frozenset([p]) for p in space.points]
    rng = rng or random.Random(0)
    return [random_region(rng, max_intervals=2) for _ in range(rng.randint(0, 2))]


@dataclass
class CoproductInstance:
    label: str
    h: _CoproductBase
    component_gens: Dict[int, list]
    template: bool


def finite_coproduct_instances(seed: int, count: int = 24, max_atoms: int = 16) -> List[CoproductInstance]:
    rng = random.Random(seed)
    out = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        comps, gens = [], {}
        for i in range(1, rng.randint(2, 3) + 1):
            if rng.random() < 0.5:
                comp = random_partition_space(rng, 4, prefix=f"c{i}_")
                pool = list(comp.subsets())[1:]
                g = rng.sample(pool, min(len(pool), rng.randint(0, 2)))
            else:
                comp = RealLine(rng.choice(REAL_KINDS))
                g = [random_region(rng, max_intervals=2) for _ in range(rng.randint(0, 2))]
            comps.append(comp)
            gens[i] = g
        h = Coproduct(comps)
        sizes = [atoms(c, gens[i]).size for i, c in enumerate(comps, 1)]
        if sum(sizes) > max_atoms:
            continue
        out.append(CoproductInstance(f"finite#{len(out)}: {h}", h, gens, False))
    return out


def template_instances(ks: Sequence[int] = range(1, 7)) -> List[CoproductInstance]:
    out = []
    bases = [
        ("singleton", FiniteSpace(["p"]), lambda i: []),
        ("metricR", RealLine(METRIC), lambda i: []),
        ("metricR+[0,1]", RealLine(METRIC), lambda i: [parse_region("[0,1]")]),
        ("aleksandroffR+(-inf,0]", RealLine(ALEKSANDROFF), lambda i: [parse_region("(-inf,0]")]),
    ]
    for name, base, gen in bases:
        for k in ks:
            h = TemplateCoproduct(base)
            out.append(CoproductInstance(f"template[{name}] k={k}", h, {i: gen(i) for i in range(1, k + 1)}, True))
    return out


def instance_germs(inst: CoproductInstance, max_atoms: int = 16):
    """Component algebras, their germs, and the coproduct algebra with its germs."""
    h = inst.h
    comp = {}
    for i, g in inst.component_gens.items():
        alg = atoms(h.component(i), g)
        comp[i] = (alg, enumerate_germs(alg, max_atoms=max_atoms))
    calg = atoms(h, coproduct_generators(h, inst.component_gens), max_generators=64)
    return comp, calg, enumerate_germs(calg, max_atoms=max_atoms)


# ---------------------------------------------------------------------------
# Suites


def suite_axioms(seed: int = DEFAULT_SEED, triples: int = 10_000, pairs: int = 1_000) -> SuiteReport:
    rep = SuiteReport("axioms", seed)
    for kind in REAL_KINDS:
        space = RealLine(kind)
        rep.instances.append(str(space))
        ar = verify_axioms(space, Budget(triples=triples, pairs=pairs, seed=seed))
        for ax in (1, 2, 3, 4):
            fails = [f for f in ar.failures if f.axiom == ax]
            a = rep.assertions.setdefault(f"axiom {ax} [{kind}]", Assertion(f"axiom {ax} [{kind}]"))
            a.checked += ar.checked[ax]
            a.failed += len(fails)
            if fails and a.counterexample is None:
                a.counterexample = [space.format_set(s) for s in fails[0].sets]
        fails5 = [f for f in ar.failures if f.axiom == 5]
        a = rep.assertions.setdefault(f"axiom 5 witness [{kind}]", Assertion(f"axiom 5 witness [{kind}]"))
        a.checked += ar.checked[5]
        a.failed += len(fails5)
        if fails5:
            a.counterexample = [space.format_set(s) for s in fails5[0].sets]
        rep.check(f"axiom 5 pair budget [{kind}]", ar.checked[5] >= pairs, ar.checked[5])
        rep.check(f"axioms 1-4 triple budget [{kind}]", ar.checked[1] >= triples, ar.checked[1])
    return rep


def naive_is_proximity(n: int, related: Callable[[int, int], bool]) -> bool:
    """Independent brute force over all subsets of ``range(n)`` as bitmasks."""
    subsets = range(1 << n)

    def close(a: int, b: int) -> bool:
        return any(related(i, j) for i in range(n) if a >> i & 1 for j in range(n) if b >> j & 1)

    full = (1 << n) - 1
    table = [[close(a, b) for b in subsets] for a in subsets]
    for a in subsets:
        for b in subsets:
            ab = table[a][b]
            if ab != table[b][a]:
                return False
            if ab and (a == 0 or b == 0):
                return False
            if a & b and not ab:
                return False
            for c in subsets:
                if table[a][b | c] != (ab or table[a][c]):
                    return False
            if not ab and not any(not table[a][e] and not table[full & ~e][b] for e in subsets):
                return False
    return True


def suite_finite_characterization(seed: int = DEFAULT_SEED, max_points: int = 4) -> SuiteReport:
    rep = SuiteReport("finite-characterization", seed)
    for n in range(1, max_points + 1):
        pts = [chr(ord("a") + i) for i in range(n)]
        for rel in reflexive_symmetric_relations(pts):
            space = FiniteSpace(pts, rel)
            rep.instances.append(repr(space))
            verdict = verify_axioms(space).ok
            eq = space.is_equivalence()
            rs = {(pts.index(x), pts.index(y)) for x, y in rel}
            oracle = naive_is_proximity(n, lambda i, j: i == j or (i, j) in rs or (j, i) in rs)
            ce = {"points": pts, "close_pairs": [list(p) for p in rel]}
            rep.check("verify_axioms passes iff equivalence relation", verdict == eq, ce)
            rep.check("independent brute-force oracle agrees", verdict == oracle, ce)
    return rep


def _finite_catalogue() -> List[FiniteSpace]:
    out = []
    for n in (1, 2, 3):
        pts = [f"x{i}" for i in range(n)]
        for rel in reflexive_symmetric_relations(pts):
            sp = FiniteSpace(pts, rel)
            if sp.is_equivalence():
                key = sorted(len(c) for c in classes(sp))
                if key not in [sorted(len(c) for c in classes(o)) for o in out if len(o.points) == n]:
                    out.append(sp)
    return out


def _bitmask_tables(h: Coproduct):
    """Flattened adjacency and per-component slots for exhaustive checks."""
    flat = h.as_finite()
    pts = flat.points
    idx = flat.index
    nb = [sum(1 << idx[q] for q in flat.neighbours[p]) for p in pts]
    slots = {i: [idx[(i, p)] for p in c.points] for i, c in enumerate(h.components, 1)}
    return flat, nb, slots


def suite_coproduct_propositions(seed: int = DEFAULT_SEED, sample_api: int = 150) -> SuiteReport:
    rep = SuiteReport("coproduct-propositions", seed)
    rng = random.Random(seed)
    cat = _finite_catalogue()
    for r in (1, 2, 3):
        for combo in itertools.combinations_with_replacement(range(len(cat)), r):
            comps = [cat[k] for k in combo]
            h = Coproduct(comps)
            rep.instances.append(str(h))
            _check_propositions(rep, h, rng, sample_api)
    return rep


def _check_propositions(rep: SuiteReport, h: Coproduct, rng: random.Random, sample_api: int) -> None:
    comps = h.components
    # subspace recovery, exhaustive through the public API
    for i, c in enumerate(comps, 1):
        subs = list(c.subsets())
        for a in subs:
            for b in subs:
                rep.check("subspace recovery: inject(a) ~ inject(b) iff a ~ b",
                          h.close(inject(h, i, a), inject(h, i, b)) == c.close(a, b),
                          {"index": i, "a": sorted(a), "b": sorted(b)})
        for j in range(i + 1, len(comps) + 1):
            rep.check("distinct carriers are far", not h.close(h.carrier(i), h.carrier(j)), [i, j])
    # separated iff componentwise
    flat, nb, slots = _bitmask_tables(h)
    rep.check("separated iff every component separated",
              bool(h.separation()) == all(bool(c.separation()) for c in comps) == bool(flat.separation()),
              str(h))
    # axiom 5 via E = union of componentwise witnesses, exhaustive on bitmasks
    n = len(flat.points)
    full = (1 << n) - 1

    def close(a: int, b: int) -> bool:
        m = a
        while m:
            low = m & -m
            if nb[low.bit_length() - 1] & b:
                return True
            m ^= low
        return False

    wit = {}
    for i, c in enumerate(comps, 1):
        subs = list(c.subsets())
        for a in subs:
            for b in subs:
                if not c.close(a, b):
                    wit[(i, a, b)] = c.axiom5_witness(a, b)

    def to_mask(i, s):
        return sum(1 << flat.index[(i, p)] for p in s)

    def slice_of(i, mask):
        c = comps[i - 1]
        return frozenset(p for k, p in zip(slots[i], c.points) if mask >> k & 1)

    for a in range(1 << n):
        for b in range(1 << n):
            if close(a, b):
                continue
            e = 0
            for i in range(1, len(comps) + 1):
                ei = wit.get((i, slice_of(i, a), slice_of(i, b)))
                if ei is None:
                    e = None
                    break
                e |= to_mask(i, ei)
            ok = e is not None and not close(a, e) and not close(full & ~e, b)
            rep.check("axiom 5 via E = union of component witnesses (exhaustive)", ok, [a, b])
    # the same through the CoproductSet API on a sample
    for _ in range(sample_api):
        a, b = h.random_set(rng), h.random_set(rng)
        if h.close(a, b):
            continue
        e = h.axiom5_witness(a, b)
        ok = e is not None and not h.close(a, e) and not h.close(h.complement(e), b)
        rep.check("axiom 5 via CoproductSet witness (sampled)", ok, [h.format_set(a), h.format_set(b)])
    # induced topology is the disjoint union topology
    for m in range(1 << n):
        a = h.from_finite_set(frozenset(flat.points[k] for k in range(n) if m >> k & 1))
        prox_closure = h.make({i: frozenset(p for p in c.points if h.close(h.singleton((i, p)), a))
                               for i, c in enumerate(comps, 1)})
        rep.check("proximity closure equals disjoint-union closure",
                  prox_closure == disjoint_closure(h, a), h.format_set(a))


def suite_coproduct_additivity(seed: int = DEFAULT_SEED, count: int = 24,
                               spaces: Optional[Sequence[ProximitySpace]] = None) -> SuiteReport:
    rep = SuiteReport("coproduct-additivity", seed)
    if spaces:
        rng = random.Random(seed)
        h = Coproduct(list(spaces))
        insts = [CoproductInstance(f"given: {h}", h,
                                   {i: default_generators(c, rng) for i, c in enumerate(h.components, 1)}, False)]
    else:
        insts = finite_coproduct_instances(seed, count)
    for inst in insts:
        comp, calg, cgerms = instance_germs(inst)
        total = sum(len(g) for _, g in comp.values())
        rep.instances.append(f"{inst.label}: {total} component germs, {len(cgerms)} coproduct germs")
        rep.check("germ count = sum of component germ counts", len(cgerms) == total,
                  {"instance": inst.label, "coproduct": len(cgerms), "sum": total})
        images = []
        for i, (alg, gs) in comp.items():
            images.extend(extend_germ(alg, g, calg, i) for g in gs)
        supports = [g.support for g in images]
        rep.check("extend_germ is injective", len(set(supports)) == len(supports), inst.label)
        non_tail = {g.support for g in cgerms if classify_germ(calg, g).tag != "tail"}
        rep.check("extend_germ image = all non-tail germs", set(supports) == non_tail, inst.label)
    return rep


def suite_template_surplus(seed: int = DEFAULT_SEED) -> SuiteReport:
    rep = SuiteReport("template-surplus", seed)
    for inst in template_instances():
        comp, calg, cgerms = instance_germs(inst)
        total = sum(len(g) for _, g in comp.values())
        tails = [g for g in cgerms if classify_germ(calg, g).tag == "tail"]
        rep.instances.append(f"{inst.label}: {total} component germs, {len(cgerms)} coproduct germs")
        rep.check("germ count = sum of component counts + 1", len(cgerms) == total + 1,
                  {"instance": inst.label, "coproduct": len(cgerms), "sum": total})
        rep.check("exactly one tail germ", len(tails) == 1, inst.label)
        if len(tails) == 1:
            atom = calg.atoms[tails[0].indices[0]]
            rep.check("tail germ is supported on the cofinite remainder",
                      len(tails[0]) == 1 and atom.tail_full, inst.label)
            images = {extend_germ(alg, g, calg, i).support for i, (alg, gs) in comp.items() for g in gs}
            rep.check("tail germ is not an extension of a component germ",
                      tails[0].support not in images, inst.label)
    return rep


def suite_boundary_traces(seed: int = DEFAULT_SEED, count: int = 24) -> SuiteReport:
    rep = SuiteReport("boundary-traces", seed)
    for inst in finite_coproduct_instances(seed, count) + template_instances():
        _, calg, cgerms = instance_germs(inst)
        rep.instances.append(inst.label)
        classes_: Dict[Any, set] = {}
        for g in cgerms:
            touched = germ_components(calg, g)
            rep.check("no germ is supported at two components", len(touched) <= 1,
                      {"instance": inst.label, "support": g.indices})
            cls = classify_germ(calg, g)
            if cls.tag == "tail":
                rep.check("tail germs touch no component", not touched, inst.label)
            else:
                rep.check("component class matches support", touched == {cls.index}, inst.label)
            classes_.setdefault(str(cls), set()).add(g.support)
        non_tail = {g.support for g in cgerms if classify_germ(calg, g).tag != "tail"}
        blocks = [v for k, v in classes_.items() if k != "tail"]
        disjoint = all(not (x & y) for x, y in itertools.combinations(blocks, 2))
        covers = set().union(*blocks) == non_tail if blocks else not non_tail
        rep.check("support classes partition the non-tail germs", disjoint and covers, inst.label)
    return rep


def _standard_like(space: ProximitySpace) -> bool:
    if isinstance(space, FiniteSpace):
        return True
    return isinstance(space, RealLine) and space.kind in (STANDARD, STONECECH)


def _closures_meet(h, a, b) -> bool:
    return not h.is_empty(h.intersection(disjoint_closure(h, a), disjoint_closure(h, b)))


def suite_stonecech_iff(seed: int = DEFAULT_SEED, samples: int = 1_000,
                        spaces: Optional[Sequence[ProximitySpace]] = None) -> SuiteReport:
    rep = SuiteReport("stonecech-iff", seed)
    rng = random.Random(seed)
    if spaces:
        given = Coproduct(list(spaces))
        rep.instances.append(str(given))
        standard = all(_standard_like(c) for c in given.components)
        counter = _sample_equinormal(rep, given, rng, samples, "given coproduct", require=standard)
        if standard:
            return rep
        witness = _aleksandroff_witness(given)
        if witness is not None:
            rep.check("non-standard component exhibits close pair with disjoint closures", True)
            rep.notes.append("witness: " + json.dumps(witness, sort_keys=True))
        elif counter is not None:
            rep.check("non-standard component exhibits close pair with disjoint closures", True)
            rep.notes.append("witness: " + json.dumps(counter, sort_keys=True))
        else:
            rep.notes.append("no representable witness found (metric components need infinite discrete sets)")
        return rep
    insts = [Coproduct([RealLine(STANDARD), RealLine(STONECECH)]),
             Coproduct([RealLine(STANDARD), RealLine(STANDARD), RealLine(STONECECH)]),
             Coproduct([RealLine(STONECECH), FiniteSpace(["a", "b"])]),
             TemplateCoproduct(RealLine(STANDARD))]
    for h in insts:
        rep.instances.append(str(h))
        _sample_equinormal(rep, h, rng, samples, f"all-standard {h}", require=True)
    mixed = Coproduct([RealLine(STANDARD), RealLine(ALEKSANDROFF), RealLine(STONECECH)])
    rep.instances.append(str(mixed))
    w = _aleksandroff_witness(mixed)
    rep.check("aleksandroff component exhibits close pair with disjoint closures", w is not None, str(mixed))
    if w is not None:
        rep.notes.append("witness: " + json.dumps(w, sort_keys=True))
    return rep


def _sample_equinormal(rep, h, rng, samples, label, require=False):
    counter = None
    done = 0
    while done < samples:
        a, b = h.random_set(rng), h.random_set(rng)
        if h.is_empty(a) or h.is_empty(b):
            continue
        done += 1
        lhs = h.close(a, b)
        rhs = _closures_meet(h, a, b)
        if lhs != rhs and counter is None:
            counter = [h.format_set(a), h.format_set(b)]
        if require:
            rep.check(f"close iff closures intersect ({label})", lhs == rhs,
                      [h.format_set(a), h.format_set(b)])
    return counter


def _aleksandroff_witness(h: Coproduct):
    for i, c in enumerate(h.components, 1):
        if isinstance(c, RealLine) and c.kind == ALEKSANDROFF:
            a = inject(h, i, parse_region("[1,inf)"))
            b = inject(h, i, parse_region("(-inf,0]"))
            if h.close(a, b) and not _closures_meet(h, a, b):
                return {"component": i, "a": h.format_set(a), "b": h.format_set(b)}
    return None


def suite_discrete_d(seed: int = DEFAULT_SEED, size: int = 6) -> SuiteReport:
    rep = SuiteReport("discrete-D", seed)
    bases = [(RealLine(METRIC), lambda i: Fraction(i, 2)),
             (RealLine(ALEKSANDROFF), lambda i: Fraction(0)),
             (RealLine(STANDARD), lambda i: Fraction(-i)),
             (FiniteSpace(["p"]), lambda i: "p"),
             (FiniteSpace.from_partition([["u", "v"]]), lambda i: "u")]
    for base, choose in bases:
        h = TemplateCoproduct(base)
        d = [CoproductPoint(i, choose(i)) for i in range(1, size + 1)]
        rep.instances.append(f"{h}: D = one point from each of components 1..{size}")
        singles = [h.singleton(p) for p in d]
        for assign in itertools.product((0, 1, 2), repeat=size):
            a = h.union_all(s for s, t in zip(singles, assign) if t == 1)
            b = h.union_all(s for s, t in zip(singles, assign) if t == 2)
            rep.check("disjoint subsets of D are not close", not h.close(a, b),
                      [h.format_set(a), h.format_set(b)])
    return rep


def random_region_refinement(rng: random.Random, kind: str = STANDARD) -> RefinementAssignment:
    """Overlapping interval chain V_j with closed witnesses B_j, grouped into targets."""
    space = RealLine(kind)
    m = rng.randint(2, 6)
    cuts = sorted(rng.sample(range(-12, 13), m - 1))
    cuts = [Fraction(c, 2) for c in cuts]
    pairs = []
    for j in range(m):
        lo = cuts[j - 1] if j > 0 else NEG_INF
        hi = cuts[j] if j < m - 1 else POS_INF
        eps_lo = Fraction(rng.randint(1, 4), 8)
        eps_hi = Fraction(rng.randint(1, 4), 8)
        v = normalize([Interval(lo - eps_lo if lo != NEG_INF else NEG_INF,
                                hi + eps_hi if hi != POS_INF else POS_INF, False, False)])
        b = normalize([Interval(lo, hi, lo != NEG_INF, hi != POS_INF)])
        pairs.append((v, b))
    refinement = DeltaCovering(space, tuple(pairs))
    n = rng.randint(1, m)
    groups = [rng.randrange(n) for _ in range(m)]
    targets = []
    for i in range(n):
        members = [pairs[j][0] for j in range(m) if groups[j] == i]
        extra = random_region(rng, max_intervals=1) if rng.random() < 0.5 else space.empty()
        targets.append(space.union_all(members + [extra]))
    if rng.random() < 0.5:
        assign = first_fit_assignment(space, refinement.sets, targets)
    else:
        assign = tuple(groups)
    return RefinementAssignment(refinement, tuple(targets), assign)


def random_finite_refinement(rng: random.Random) -> RefinementAssignment:
    space = random_partition_space(rng, 6)
    cls = classes(space)
    pairs = []
    covered = frozenset()
    while covered != space.full() or rng.random() < 0.4:
        picks = rng.sample(cls, rng.randint(1, len(cls)))
        v = frozenset().union(*picks)
        if rng.random() < 0.3:
            v = v | frozenset(rng.sample(space.points, 1))
        b = space.core(v)
        pairs.append((v, b))
        covered |= b
    refinement = DeltaCovering(space, tuple(pairs))
    n = rng.randint(1, len(pairs))
    groups = [rng.randrange(n) for _ in pairs]
    targets = [frozenset().union(*[v for (v, _), g in zip(pairs, groups) if g == i] or [frozenset()])
               | frozenset(p for p in space.points if rng.random() < 0.2)
               for i in range(n)]
    assign = first_fit_assignment(space, refinement.sets, targets) if rng.random() < 0.5 else tuple(groups)
    return RefinementAssignment(refinement, tuple(targets), assign)


def suite_dimension_lemma(seed: int = DEFAULT_SEED, count: int = 120) -> SuiteReport:
    rep = SuiteReport("dimension-lemma", seed)
    rng = random.Random(seed)
    for k in range(count):
        r = random_region_refinement(rng, rng.choice((STANDARD, METRIC))) if k % 2 == 0 \
            else random_finite_refinement(rng)
        sp = r.refinement.space
        rep.instances.append(f"{sp}: {len(r.refinement)} refinement pairs onto {len(r.targets)} targets")
        rep.check("generated refinement is a valid delta-covering", validate_covering(r.refinement).ok, k)
        out = reindex_refinement(r)
        ce = {"instance": k, "targets": [sp.format_set(t) for t in r.targets]}
        rep.check("output passes validate_covering", validate_covering(out).ok, ce)
        rep.check("output refines the targets",
                  all(sp.is_subset(a, u) for a, u in zip(out.sets, r.targets)), ce)
        rep.check("output multiplicity <= refinement multiplicity",
                  multiplicity(sp, out.sets) <= multiplicity(sp, r.refinement.sets), ce)
        rep.check("output indexed like the targets", len(out) == len(r.targets), ce)
    return rep


TWO_COVER = (("(-inf,1)", "(-inf,1/2]"), ("(0,inf)", "[1/2,inf)"))


def two_cover_certificate() -> DimensionCertificate:
    space = RealLine(STANDARD)
    cov = DeltaCovering(space, tuple((parse_region(a), parse_region(b)) for a, b in TWO_COVER))
    return DimensionCertificate(space, cov, cov, 2)


def suite_dimension_sup(seed: int = DEFAULT_SEED, spaces: Optional[Sequence[FiniteSpace]] = None) -> SuiteReport:
    rep = SuiteReport("dimension-sup", seed)
    if spaces:
        r = dim_sup_check(list(spaces))
        rep.instances.append(str(Coproduct(list(spaces))))
        rep.check("coproduct dimension = max component dimension", r.ok,
                  {"components": [str(d) for d in r.component_dims], "coproduct": str(r.coproduct_dim)})
        return rep
    for n in range(1, 5):
        pts = [chr(ord("a") + i) for i in range(n)]
        for part in partitions(pts):
            sp = FiniteSpace.from_partition(part)
            rep.instances.append(repr(sp))
            d = brute_delta_dim(sp)
            rep.check("brute_delta_dim = 0 on valid finite proximity spaces", d == 0, repr(sp))
    comps = []
    for n in (1, 2):
        pts = [chr(ord("p") + i) for i in range(n)]
        comps.extend(FiniteSpace.from_partition(p) for p in partitions(pts))
    comps.append(FiniteSpace.from_partition([["a", "b"], ["c"]]))
    comps.append(FiniteSpace(["a", "b", "c"]))
    for x, y in itertools.combinations_with_replacement(range(len(comps)), 2):
        pair = [comps[x], comps[y]]
        if sum(len(c.points) for c in pair) > 4:
            continue
        r = dim_sup_check(pair)
        rep.instances.append(str(Coproduct(pair)))
        rep.check("dim_sup_check: coproduct dimension = max component dimension", r.ok,
                  {"components": [repr(c) for c in pair], "dims": [str(d) for d in r.component_dims],
                   "coproduct": str(r.coproduct_dim)})
    cert = verify_certificate(two_cover_certificate())
    rep.instances.append("standard R: 2-cover certificate")
    rep.check("region certificate for the 2-cover of R validates at multiplicity 2",
              cert.ok and cert.multiplicity == 2, cert.to_json())
    return rep


def naive_germs(space: ProximitySpace, atom_sets: Sequence) -> List[int]:
    """Nonempty atom subsets whose members are pairwise close, by double loop."""
    n = len(atom_sets)
    out = []
    for mask in range(1, 1 << n):
        idx = [i for i in range(n) if mask >> i & 1]
        if all(space.close(atom_sets[i], atom_sets[j]) for i in idx for j in idx):
            out.append(mask)
    return out


def suite_germ_oracle(seed: int = DEFAULT_SEED, count: int = 24, max_size: int = 4) -> SuiteReport:
    rep = SuiteReport("germ-oracle", seed)
    rng = random.Random(seed)
    algebras = []
    for inst in finite_coproduct_instances(seed, count) + template_instances():
        comp, calg, _ = instance_germs(inst)
        algebras.extend(alg for alg, _ in comp.values())
        algebras.append(calg)
    for kind in REAL_KINDS:
        for _ in range(40):
            algebras.append(atoms(RealLine(kind), [random_region(rng, 2) for _ in range(rng.randint(1, 2))]))
    for n in range(1, 4):
        pts = [chr(ord("a") + i) for i in range(n)]
        for rel in reflexive_symmetric_relations(pts):
            sp = FiniteSpace(pts, rel)
            algebras.append(atoms(sp, [frozenset([p]) for p in pts]))
    for alg in algebras:
        if alg.size > max_size:
            continue
        got = [g.support for g in enumerate_germs(alg)]
        want = naive_germs(alg.space, alg.atoms)
        rep.check("enumerate_germs(all) = naive pairwise-closeness filter", got == want,
                  {"space": str(alg.space), "atoms": [alg.space.format_set(a) for a in alg.atoms]})
    rep.instances.append(f"{sum(1 for a in algebras if a.size <= max_size)} algebras with <= {max_size} atoms")
    return rep


SUITES: Dict[str, Callable[..., SuiteReport]] = {
    "axioms": suite_axioms,
    "finite-characterization": suite_finite_characterization,
    "coproduct-propositions": suite_coproduct_propositions,
    "coproduct-additivity": suite_coproduct_additivity,
    "template-surplus": suite_template_surplus,
    "boundary-traces": suite_boundary_traces,
    "stonecech-iff": suite_stonecech_iff,
    "discrete-D": suite_discrete_d,
    "dimension-lemma": suite_dimension_lemma,
    "dimension-sup": suite_dimension_sup,
    "germ-oracle": suite_germ_oracle,
}

ACCEPTS_SPACES = {"coproduct-additivity", "stonecech-iff", "dimension-sup"}


def run_suite(suite_id: str, seed: int = DEFAULT_SEED, spaces: Optional[Sequence] = None) -> SuiteReport:
    if suite_id not in SUITES:
        raise KeyError(suite_id)
    fn = SUITES[suite_id]
    if spaces:
        if suite_id not in ACCEPTS_SPACES:
            raise ValueError(f"suite {suite_id!r} does not take spaces")
        return fn(seed=seed, spaces=spaces)
    return fn(seed=seed)
