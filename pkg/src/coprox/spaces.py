"""Proximity-space presentations with decidable closeness oracles.

Every space exposes the same small protocol: a boolean algebra of
representable sets (``full``/``empty``/``union``/``intersection``/
``complement``), a membership check, and the closeness oracle ``close``.
The germ and dimension code is written against this protocol only, so it
works unchanged for the real line, finite spaces, subspaces and coproducts.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple

from . import regions
from .regions import EMPTY, REALS, Region

DISCRETE = "discrete"
METRIC = "metric"
STANDARD = "standard"
ALEKSANDROFF = "aleksandroff"
STONECECH = "stonecech"
FINITE_RELATION = "finite-relation"

REAL_KINDS = (DISCRETE, METRIC, STANDARD, ALEKSANDROFF, STONECECH)
FINITE_KINDS = (DISCRETE, STANDARD, STONECECH, FINITE_RELATION)


class ProximitySpace:
    """Base class: generic derived operations over the set protocol."""

    kind: str = ""
    finite: bool = False

    # -- set algebra, overridden by subclasses ------------------------------
    def full(self):
        raise NotImplementedError

    def empty(self):
        raise NotImplementedError

    def union(self, a, b):
        raise NotImplementedError

    def intersection(self, a, b):
        raise NotImplementedError

    def complement(self, a):
        raise NotImplementedError

    def is_empty(self, a) -> bool:
        raise NotImplementedError

    def check(self, a):
        """Return ``a`` if it is a set of this space, else raise ValueError."""
        raise NotImplementedError

    def close(self, a, b) -> bool:
        raise NotImplementedError

    def singleton(self, x):
        raise NotImplementedError

    def contains(self, a, x) -> bool:
        raise NotImplementedError

    def sample_point(self, a):
        raise NotImplementedError

    def random_set(self, rng: random.Random):
        raise NotImplementedError

    def axiom5_witness(self, a, b):
        """A set E with ``a`` not close to E and X-E not close to ``b``, or None."""
        return None

    def separation(self) -> "Separation":
        raise NotImplementedError

    # -- derived ------------------------------------------------------------
    def difference(self, a, b):
        return self.intersection(a, self.complement(b))

    def union_all(self, sets: Iterable):
        out = self.empty()
        for s in sets:
            out = self.union(out, s)
        return out

    def is_subset(self, a, b) -> bool:
        return self.is_empty(self.difference(a, b))

    def strongly_inside(self, b, a) -> bool:
        return not self.close(b, self.complement(a))

    def format_set(self, a) -> Any:
        return str(a)


@dataclass(frozen=True)
class Separation:
    """Outcome of a separatedness query: the verdict plus how it was reached."""

    separated: bool
    rationale: str

    def __bool__(self) -> bool:
        return self.separated


# ---------------------------------------------------------------------------
# The real line


@dataclass(frozen=True)
class RealLine(ProximitySpace):
    kind: str = STANDARD
    finite = False

    def __post_init__(self):
        if self.kind not in REAL_KINDS:
            raise ValueError(f"kind {self.kind!r} is not available on the real line")

    def full(self) -> Region:
        return REALS

    def empty(self) -> Region:
        return EMPTY

    def union(self, a, b):
        return a.union(b)

    def intersection(self, a, b):
        return a.intersection(b)

    def complement(self, a):
        return a.complement()

    def difference(self, a, b):
        return a.difference(b)

    def is_empty(self, a) -> bool:
        return not a.intervals

    def check(self, a):
        if not isinstance(a, Region):
            raise ValueError(f"{a!r} is not a region of the real line")
        return a

    def close(self, a: Region, b: Region) -> bool:
        if not a.intervals or not b.intervals:
            return False
        kind = self.kind
        if kind == DISCRETE:
            return not a.intersection(b).is_empty
        if kind == METRIC:
            return regions.distance(a, b) == 0
        if kind == ALEKSANDROFF and not a.bounded and not b.bounded:
            return True
        # standard, stonecech (normal ground) and the closure clause of aleksandroff
        return not a.closure().intersection(b.closure()).is_empty

    def closure(self, a: Region) -> Region:
        if self.kind == DISCRETE:
            return a
        return a.closure()

    def singleton(self, x) -> Region:
        return regions.point(x)

    def contains(self, a: Region, x) -> bool:
        return x in a

    def sample_point(self, a: Region):
        return a.sample_point()

    def random_set(self, rng: random.Random) -> Region:
        return regions.random_region(rng)

    def axiom5_witness(self, a: Region, b: Region):
        if not a.intervals:
            return REALS
        if not b.intervals:
            return EMPTY
        kind = self.kind
        if kind == DISCRETE:
            return b
        if kind in (METRIC, STANDARD, STONECECH):
            gap = regions.distance(a, b)
            if gap == 0:
                return None
            return a.halo(gap / 2).complement()
        # aleksandroff: at least one side is bounded when the pair is not close
        gap = regions.distance(a.closure(), b.closure())
        if gap == 0:
            return None
        if a.bounded:
            return a.halo(gap / 2).complement()
        if b.bounded:
            return b.halo(gap / 2)
        return None

    def separation(self) -> Separation:
        return Separation(True, "builtin: singleton closeness reduces to point equality")

    def format_set(self, a: Region) -> str:
        return regions.format_region(a)

    def __str__(self) -> str:
        return f"R[{self.kind}]"


# ---------------------------------------------------------------------------
# Finite grounds


class FiniteSpace(ProximitySpace):
    """A finite ground set with a reflexive symmetric point relation.

    Closeness of sets is decided pointwise: ``a`` is close to ``b`` iff some
    point of ``a`` is related to some point of ``b``.  An optional point
    metric can be attached for :func:`coprox.coproduct.coproduct_metric`.
    """

    finite = True

    def __init__(self, points: Sequence[Hashable], close_pairs: Iterable[Tuple[Hashable, Hashable]] = (),
                 kind: str = FINITE_RELATION, metric: Optional[Mapping] = None):
        pts = tuple(points)
        if not pts:
            raise ValueError("empty ground sets are not supported")
        if len(set(pts)) != len(pts):
            raise ValueError("duplicate point labels")
        if kind not in FINITE_KINDS:
            raise ValueError(f"kind {kind!r} is not available on a finite ground")
        self.points = pts
        self.kind = kind
        self.index = {p: i for i, p in enumerate(pts)}
        nbr = {p: {p} for p in pts}
        if kind == FINITE_RELATION:
            for x, y in close_pairs:
                if x not in self.index or y not in self.index:
                    raise ValueError(f"close pair ({x!r}, {y!r}) outside the ground")
                nbr[x].add(y)
                nbr[y].add(x)
        elif close_pairs and any(x != y for x, y in close_pairs):
            raise ValueError(f"kind {kind!r} takes no close pairs")
        self.neighbours: Dict[Hashable, FrozenSet] = {p: frozenset(s) for p, s in nbr.items()}
        self.metric = dict(metric) if metric is not None else None
        self._full = frozenset(pts)

    def __eq__(self, other):
        return (isinstance(other, FiniteSpace) and self.points == other.points
                and self.kind == other.kind and self.neighbours == other.neighbours)

    def __hash__(self):
        return hash((self.points, self.kind))

    def __repr__(self):
        pairs = sorted((str(x), str(y)) for x, y in self.close_pairs())
        return f"FiniteSpace({list(self.points)!r}, {pairs!r})"

    __str__ = __repr__

    @classmethod
    def discrete(cls, points: Sequence[Hashable]) -> "FiniteSpace":
        return cls(points, (), kind=FINITE_RELATION)

    @classmethod
    def from_partition(cls, blocks: Sequence[Sequence[Hashable]]) -> "FiniteSpace":
        pts = [p for blk in blocks for p in blk]
        pairs = [(x, y) for blk in blocks for x, y in itertools.combinations(blk, 2)]
        return cls(pts, pairs)

    def close_pairs(self) -> List[Tuple[Hashable, Hashable]]:
        """Off-diagonal related pairs, each listed once in ground order."""
        out = []
        for i, x in enumerate(self.points):
            for y in self.points[i + 1:]:
                if y in self.neighbours[x]:
                    out.append((x, y))
        return out

    def related(self, x, y) -> bool:
        return y in self.neighbours[x]

    def is_equivalence(self) -> bool:
        return all(self.neighbours[y] == self.neighbours[x]
                   for x in self.points for y in self.neighbours[x])

    # -- set protocol ---------------------------------------------------------
    def full(self) -> FrozenSet:
        return self._full

    def empty(self) -> FrozenSet:
        return frozenset()

    def union(self, a, b):
        return a | b

    def intersection(self, a, b):
        return a & b

    def complement(self, a):
        return self._full - a

    def difference(self, a, b):
        return a - b

    def is_empty(self, a) -> bool:
        return not a

    def is_subset(self, a, b) -> bool:
        return a <= b

    def check(self, a):
        if not isinstance(a, frozenset):
            if isinstance(a, (set, list, tuple)):
                a = frozenset(a)
            else:
                raise ValueError(f"{a!r} is not a subset of a finite ground")
        extra = a - self._full
        if extra:
            raise ValueError(f"points {sorted(map(str, extra))} are outside the ground")
        return a

    def close(self, a, b) -> bool:
        if not a or not b:
            return False
        nb = self.neighbours
        return any(not nb[x].isdisjoint(b) for x in a)

    def closure(self, a):
        return frozenset(y for x in a for y in self.neighbours[x])

    def core(self, a):
        """Largest B with B strongly inside ``a``: points not close to X - a."""
        rest = self._full - a
        return frozenset(x for x in a if self.neighbours[x].isdisjoint(rest))

    def singleton(self, x):
        if x not in self.index:
            raise ValueError(f"point {x!r} outside the ground")
        return frozenset((x,))

    def contains(self, a, x) -> bool:
        return x in a

    def sample_point(self, a):
        if not a:
            raise ValueError("empty set has no points")
        return min(a, key=self.index.__getitem__)

    def random_set(self, rng: random.Random):
        return frozenset(p for p in self.points if rng.random() < 0.5)

    def subsets(self) -> Iterable[FrozenSet]:
        pts = self.points
        for mask in range(1 << len(pts)):
            yield frozenset(pts[i] for i in range(len(pts)) if mask >> i & 1)

    def axiom5_witness(self, a, b):
        if len(self.points) > 16:
            return None
        for e in self.subsets():
            if not self.close(a, e) and not self.close(self._full - e, b):
                return e
        return None

    def separation(self) -> Separation:
        ok = all(len(self.neighbours[p]) == 1 for p in self.points)
        return Separation(ok, "decided: exact check of the point relation")

    def format_set(self, a) -> List[str]:
        return [str(p) for p in sorted(a, key=self.index.__getitem__)]


# ---------------------------------------------------------------------------
# Subspaces


@dataclass(frozen=True)
class Subspace(ProximitySpace):
    parent: ProximitySpace
    carrier: Any

    def __post_init__(self):
        self.parent.check(self.carrier)
        if self.parent.is_empty(self.carrier):
            raise ValueError("subspace carrier must be nonempty")

    @property
    def kind(self):
        return self.parent.kind

    @property
    def finite(self):
        return self.parent.finite

    def full(self):
        return self.carrier

    def empty(self):
        return self.parent.empty()

    def union(self, a, b):
        return self.parent.union(a, b)

    def intersection(self, a, b):
        return self.parent.intersection(a, b)

    def complement(self, a):
        return self.parent.difference(self.carrier, a)

    def is_empty(self, a) -> bool:
        return self.parent.is_empty(a)

    def check(self, a):
        a = self.parent.check(a)
        if not self.parent.is_subset(a, self.carrier):
            raise ValueError("set is not contained in the subspace carrier")
        return a

    def close(self, a, b) -> bool:
        return self.parent.close(a, b)

    def closure(self, a):
        return self.parent.intersection(self.parent.closure(a), self.carrier)

    def singleton(self, x):
        s = self.parent.singleton(x)
        if not self.parent.is_subset(s, self.carrier):
            raise ValueError(f"point {x!r} outside the subspace")
        return s

    def contains(self, a, x) -> bool:
        return self.parent.contains(a, x)

    def sample_point(self, a):
        return self.parent.sample_point(a)

    def random_set(self, rng):
        return self.parent.intersection(self.parent.random_set(rng), self.carrier)

    def axiom5_witness(self, a, b):
        e = self.parent.axiom5_witness(a, b)
        if e is None:
            return None
        return self.parent.intersection(e, self.carrier)

    def separation(self) -> Separation:
        sep = self.parent.separation()
        return Separation(sep.separated, "inherited from parent: " + sep.rationale)

    def format_set(self, a):
        return self.parent.format_set(a)


# ---------------------------------------------------------------------------
# Module-level operations


def close(space: ProximitySpace, a, b) -> bool:
    return space.close(space.check(a), space.check(b))


def strong_inclusion(space: ProximitySpace, b, a) -> bool:
    """``b << a``: ``b`` is not close to the complement of ``a``."""
    b, a = space.check(b), space.check(a)
    return not space.close(b, space.complement(a))


def is_separated(space: ProximitySpace) -> Separation:
    return space.separation()


def subspace(space: ProximitySpace, carrier) -> Subspace:
    return Subspace(space, space.check(carrier))


def proximity_map_check(f: Mapping, s: FiniteSpace, t: FiniteSpace) -> bool:
    """True iff ``f`` sends related points of ``s`` to related points of ``t``.

    Checking point pairs suffices: closeness of finite sets is decided by
    its point pairs.
    """
    if not (isinstance(s, FiniteSpace) and isinstance(t, FiniteSpace)):
        raise TypeError("proximity maps are only checked between finite spaces")
    missing = [x for x in s.points if x not in f]
    if missing:
        raise ValueError(f"map is not total: no image for {missing}")
    for x in s.points:
        if f[x] not in t.index:
            raise ValueError(f"image {f[x]!r} of {x!r} is outside the target")
    return all(t.related(f[x], f[y]) for x in s.points for y in s.neighbours[x])


def map_violations(f: Mapping, s: FiniteSpace, t: FiniteSpace) -> List[Tuple]:
    return [(x, y) for x, y in s.close_pairs() if not t.related(f[x], f[y])]


# ---------------------------------------------------------------------------
# Axiom verification


@dataclass
class Budget:
    triples: int = 1000
    pairs: int = 200
    seed: int = 0
    exhaustive_limit: int = 5
    max_draws: int = 200000


@dataclass
class AxiomFailure:
    axiom: int
    sets: Tuple
    detail: str


@dataclass
class AxiomReport:
    space: str
    exhaustive: bool
    checked: Dict[int, int] = field(default_factory=lambda: {k: 0 for k in range(1, 6)})
    failures: List[AxiomFailure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def failed_axioms(self) -> List[int]:
        return sorted({f.axiom for f in self.failures})

    def to_json(self, space: ProximitySpace) -> dict:
        return {
            "space": self.space,
            "exhaustive": self.exhaustive,
            "checked": {str(k): v for k, v in sorted(self.checked.items())},
            "ok": self.ok,
            "failures": [
                {"axiom": f.axiom, "sets": [space.format_set(s) for s in f.sets], "detail": f.detail}
                for f in self.failures
            ],
        }


def check_triple(space: ProximitySpace, a, b, c, report: AxiomReport) -> None:
    """Axioms (1)-(4) on one triple, recording failures into ``report``."""
    ab = space.close(a, b)
    if ab != space.close(b, a):
        report.failures.append(AxiomFailure(1, (a, b), "closeness is not symmetric"))
    if ab and (space.is_empty(a) or space.is_empty(b)):
        report.failures.append(AxiomFailure(2, (a, b), "empty set is close to something"))
    if not space.is_empty(space.intersection(a, b)) and not ab:
        report.failures.append(AxiomFailure(3, (a, b), "intersecting sets are not close"))
    lhs = space.close(a, space.union(b, c))
    if lhs != (ab or space.close(a, c)):
        report.failures.append(AxiomFailure(4, (a, b, c), "union rule violated"))
    for k in (1, 2, 3, 4):
        report.checked[k] += 1


def check_axiom5(space: ProximitySpace, a, b, report: AxiomReport) -> None:
    if space.close(a, b):
        return
    report.checked[5] += 1
    e = space.axiom5_witness(a, b)
    if e is None:
        report.failures.append(AxiomFailure(5, (a, b), "no separating set E exists"))
        return
    if space.close(a, e) or space.close(space.complement(e), b):
        report.failures.append(AxiomFailure(5, (a, b, e), "constructed witness E is invalid"))


def verify_axioms(space: ProximitySpace, budget: Optional[Budget] = None) -> AxiomReport:
    """Check the five proximity axioms.

    Finite grounds up to ``budget.exhaustive_limit`` points are checked on
    every triple of subsets; anything else on random sets.  Axiom (5) is
    checked by building a separating set and validating it.
    """
    budget = budget or Budget()
    if isinstance(space, FiniteSpace) and len(space.points) <= budget.exhaustive_limit:
        report = AxiomReport(str(space), exhaustive=True)
        subsets = list(space.subsets())
        for a in subsets:
            for b in subsets:
                for c in subsets:
                    check_triple(space, a, b, c, report)
                check_axiom5(space, a, b, report)
        return report

    rng = random.Random(budget.seed)
    report = AxiomReport(str(space), exhaustive=False)
    for _ in range(budget.triples):
        check_triple(space, space.random_set(rng), space.random_set(rng), space.random_set(rng), report)
    found = draws = 0
    while found < budget.pairs and draws < budget.max_draws:
        draws += 1
        a, b = space.random_set(rng), space.random_set(rng)
        if space.close(a, b):
            continue
        found += 1
        check_axiom5(space, a, b, report)
    return report
