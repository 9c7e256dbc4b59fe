"""Coproducts of proximity spaces.

Two presentations are supported:

* :class:`Coproduct` -- a finite list of component spaces, indexed 1..n;
* :class:`TemplateCoproduct` -- countably many copies of one base space,
  indexed by the positive integers.

A set of a coproduct is a :class:`CoproductSet`: finitely many explicit
per-index entries plus a tail flag saying whether every other index holds
the empty set or the whole component.  The tail flag is what lets the
cofinite filter ("contains all but finitely many components") be written
down at all.

Two sets are close iff their slices at some common index are close in that
component.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Hashable, List, Mapping, Sequence, Tuple

from .spaces import METRIC, FiniteSpace, ProximitySpace, RealLine, Separation, map_violations, proximity_map_check


@dataclass(frozen=True)
class CoproductSet:
    """Explicit entries ``(index, set)`` sorted by index, plus the tail flag.

    Instances are only meaningful relative to a coproduct handle; build them
    through :meth:`Coproduct.make`, :func:`inject` or the handle's boolean
    operations so that they stay in normal form.
    """

    explicit: Tuple[Tuple[int, Any], ...] = ()
    tail_full: bool = False

    @property
    def tail(self) -> str:
        return "full" if self.tail_full else "empty"

    def keys(self) -> List[int]:
        return [i for i, _ in self.explicit]

    def entries(self) -> Dict[int, Any]:
        return dict(self.explicit)


@dataclass(frozen=True)
class CoproductPoint:
    index: int
    point: Any


class _CoproductBase(ProximitySpace):
    """Operations shared by finite and template coproducts."""

    def component(self, i: int) -> ProximitySpace:
        raise NotImplementedError

    def _implied(self, i: int, tail_full: bool):
        comp = self.component(i)
        return comp.full() if tail_full else comp.empty()

    def slice(self, a: CoproductSet, i: int):
        for j, v in a.explicit:
            if j == i:
                return v
        return self._implied(i, a.tail_full)

    def make(self, explicit: Mapping[int, Any] = None, tail_full: bool = False) -> CoproductSet:
        """Normalize: drop entries equal to what the tail already implies."""
        items = []
        for i, v in sorted((explicit or {}).items()):
            self._check_index(i)
            if v != self._implied(i, tail_full):
                items.append((i, v))
        return CoproductSet(tuple(items), tail_full)

    def _check_index(self, i: int) -> None:
        raise NotImplementedError

    def _combine(self, a: CoproductSet, b: CoproductSet, op, tail_op) -> CoproductSet:
        keys = sorted(set(a.keys()) | set(b.keys()))
        vals = {i: op(self.component(i), self.slice(a, i), self.slice(b, i)) for i in keys}
        return self.make(vals, tail_op(a.tail_full, b.tail_full))

    def union(self, a, b):
        return self._combine(a, b, lambda c, x, y: c.union(x, y), lambda s, t: s or t)

    def intersection(self, a, b):
        return self._combine(a, b, lambda c, x, y: c.intersection(x, y), lambda s, t: s and t)

    def difference(self, a, b):
        return self._combine(a, b, lambda c, x, y: c.difference(x, y), lambda s, t: s and not t)

    def is_empty(self, a: CoproductSet) -> bool:
        return not a.explicit and not a.tail_full

    def carrier(self, i: int) -> CoproductSet:
        """The copy ``X_i`` of component ``i``."""
        return self.make({i: self.component(i).full()})

    def check(self, a):
        if not isinstance(a, CoproductSet):
            raise ValueError(f"{a!r} is not a coproduct set")
        vals = {}
        for i, v in a.explicit:
            self._check_index(i)
            if i in vals:
                raise ValueError(f"index {i} listed twice")
            vals[i] = self.component(i).check(v)
        return self.make(vals, a.tail_full)

    def close(self, a: CoproductSet, b: CoproductSet) -> bool:
        for i in sorted(set(a.keys()) | set(b.keys())):
            if self.component(i).close(self.slice(a, i), self.slice(b, i)):
                return True
        return self._tail_close(a, b)

    def _tail_close(self, a, b) -> bool:
        return False

    def closure(self, a: CoproductSet) -> CoproductSet:
        return self.make({i: self.component(i).closure(v) for i, v in a.explicit}, a.tail_full)

    def singleton(self, x) -> CoproductSet:
        i, p = _as_point(x)
        self._check_index(i)
        return self.make({i: self.component(i).singleton(p)})

    def contains(self, a, x) -> bool:
        i, p = _as_point(x)
        return self.component(i).contains(self.slice(a, i), p)

    def axiom5_witness(self, a, b):
        """Assemble E from componentwise witnesses, one per explicit index."""
        if a.tail_full and b.tail_full:
            return None
        parts = {}
        for i in self._witness_indices(a, b):
            e = self.component(i).axiom5_witness(self.slice(a, i), self.slice(b, i))
            if e is None:
                return None
            parts[i] = e
        # beyond the explicit indices each slice pair is (0, 0), (0, X) or (X, 0)
        return self.make(parts, tail_full=not a.tail_full)

    def _witness_indices(self, a, b):
        return sorted(set(a.keys()) | set(b.keys()))

    def format_set(self, a: CoproductSet) -> dict:
        return {
            "explicit": {str(i): self.component(i).format_set(v) for i, v in a.explicit},
            "tail": a.tail,
        }


def _as_point(x) -> Tuple[int, Any]:
    if isinstance(x, CoproductPoint):
        return x.index, x.point
    i, p = x
    return i, p


class Coproduct(_CoproductBase):
    """Finite coproduct; components are indexed from 1.  Nested finite
    coproducts are flattened."""

    def __init__(self, components: Sequence[ProximitySpace]):
        flat: List[ProximitySpace] = []
        for c in components:
            if isinstance(c, Coproduct):
                flat.extend(c.components)
            elif isinstance(c, TemplateCoproduct):
                raise ValueError("a template coproduct cannot be a component of a finite coproduct")
            else:
                flat.append(c)
        if not flat:
            raise ValueError("a coproduct needs at least one component")
        self.components: Tuple[ProximitySpace, ...] = tuple(flat)

    def __repr__(self):
        return "Coproduct(%s)" % ", ".join(str(c) for c in self.components)

    __str__ = __repr__

    def __eq__(self, other):
        return isinstance(other, Coproduct) and self.components == other.components

    def __hash__(self):
        return hash(self.components)

    @property
    def kind(self):
        return "coproduct"

    @property
    def finite(self):
        return all(c.finite for c in self.components)

    @property
    def indices(self) -> range:
        return range(1, len(self.components) + 1)

    def component(self, i: int) -> ProximitySpace:
        self._check_index(i)
        return self.components[i - 1]

    def _check_index(self, i: int) -> None:
        if not isinstance(i, int) or not 1 <= i <= len(self.components):
            raise ValueError(f"component index {i!r} outside 1..{len(self.components)}")

    def make(self, explicit=None, tail_full: bool = False) -> CoproductSet:
        if tail_full:
            raise ValueError("finite coproduct sets have no tail")
        return super().make(explicit, False)

    def axiom5_witness(self, a, b):
        # no tail: every index is explicit, E_i = X_i where A_i is empty
        parts = {}
        for i in self.indices:
            e = self.component(i).axiom5_witness(self.slice(a, i), self.slice(b, i))
            if e is None:
                return None
            parts[i] = e
        return self.make(parts)

    def full(self):
        return self.make({i: c.full() for i, c in enumerate(self.components, 1)})

    def empty(self):
        return CoproductSet()

    def complement(self, a):
        return self.make({i: self.component(i).complement(self.slice(a, i)) for i in self.indices})

    def check(self, a):
        if isinstance(a, CoproductSet) and a.tail_full:
            raise ValueError("finite coproduct sets have no tail")
        return super().check(a)

    def sample_point(self, a):
        if not a.explicit:
            raise ValueError("empty set has no points")
        i, v = a.explicit[0]
        return CoproductPoint(i, self.component(i).sample_point(v))

    def random_set(self, rng: random.Random):
        return self.make({i: c.random_set(rng) for i, c in enumerate(self.components, 1)})

    def separation(self) -> Separation:
        parts = [c.separation() for c in self.components]
        return Separation(all(parts), "conjunction over components")

    def as_finite(self) -> FiniteSpace:
        """Flatten a coproduct of finite spaces to one finite space with
        points ``(index, label)``."""
        if not all(isinstance(c, FiniteSpace) for c in self.components):
            raise ValueError("as_finite needs finite components")
        pts, pairs = [], []
        for i, c in enumerate(self.components, 1):
            pts.extend((i, p) for p in c.points)
            pairs.extend(((i, x), (i, y)) for x, y in c.close_pairs())
        return FiniteSpace(pts, pairs)

    def to_finite_set(self, a: CoproductSet) -> frozenset:
        return frozenset((i, p) for i, v in a.explicit for p in v)

    def from_finite_set(self, s) -> CoproductSet:
        parts: Dict[int, set] = {}
        for i, p in s:
            parts.setdefault(i, set()).add(p)
        return self.make({i: frozenset(v) for i, v in parts.items()})


class TemplateCoproduct(_CoproductBase):
    """Countably many copies of ``base``, indexed 1, 2, 3, ..."""

    def __init__(self, base: ProximitySpace):
        if isinstance(base, _CoproductBase):
            raise ValueError("template base must not itself be a coproduct")
        self.base = base

    def __repr__(self):
        return f"TemplateCoproduct({self.base})"

    __str__ = __repr__

    def __eq__(self, other):
        return isinstance(other, TemplateCoproduct) and self.base == other.base

    def __hash__(self):
        return hash(("template", self.base))

    @property
    def kind(self):
        return "coproduct-template"

    def component(self, i: int) -> ProximitySpace:
        self._check_index(i)
        return self.base

    def _check_index(self, i: int) -> None:
        if not isinstance(i, int) or isinstance(i, bool) or i < 1:
            raise ValueError(f"template index {i!r} must be a positive integer")

    def full(self):
        return CoproductSet((), True)

    def empty(self):
        return CoproductSet((), False)

    def complement(self, a):
        return self.make({i: self.base.complement(v) for i, v in a.explicit}, not a.tail_full)

    def _tail_close(self, a, b) -> bool:
        # infinitely many indices carry (X_i, X_i)
        return a.tail_full and b.tail_full and self.base.close(self.base.full(), self.base.full())

    def sample_point(self, a):
        if a.explicit:
            i, v = a.explicit[0]
            return CoproductPoint(i, self.base.sample_point(v))
        if a.tail_full:
            return CoproductPoint(1, self.base.sample_point(self.base.full()))
        raise ValueError("empty set has no points")

    def first_free_index(self, a: CoproductSet) -> int:
        return max(a.keys(), default=0) + 1

    def random_set(self, rng: random.Random, window: int = 4):
        vals = {i: self.base.random_set(rng) for i in range(1, window + 1) if rng.random() < 0.7}
        return self.make(vals, rng.random() < 0.5)

    def separation(self) -> Separation:
        sep = self.base.separation()
        return Separation(sep.separated, "every component is the base: " + sep.rationale)


# ---------------------------------------------------------------------------


def coproduct_close(h: _CoproductBase, a: CoproductSet, b: CoproductSet) -> bool:
    return h.close(h.check(a), h.check(b))


def inject(h: _CoproductBase, index: int, a) -> CoproductSet:
    comp = h.component(index)
    return h.make({index: comp.check(a)})


def disjoint_closure(h: _CoproductBase, a: CoproductSet) -> CoproductSet:
    for i, _ in a.explicit:
        if not hasattr(h.component(i), "closure"):
            raise ValueError(f"component {i} does not support closure")
    return h.closure(h.check(a))


def _point_distance(space: ProximitySpace, x, y) -> Fraction:
    if isinstance(space, RealLine):
        if space.kind != METRIC:
            raise ValueError("real-line components need the metric kind")
        return abs(Fraction(x) - Fraction(y))
    if isinstance(space, FiniteSpace):
        if space.metric is None:
            raise ValueError("finite component has no declared point metric")
        if x == y:
            return Fraction(0)
        d = space.metric.get((x, y), space.metric.get((y, x)))
        if d is None:
            raise ValueError(f"metric table has no entry for ({x!r}, {y!r})")
        return Fraction(d)
    raise ValueError(f"component {space} has no point metric")


def coproduct_metric(h: _CoproductBase, x, y, basepoints: Mapping[int, Any]) -> Fraction:
    """Distance within a component, or ``d(x, x_a) + d(x_b, y) + 1`` across
    components, where ``x_a``, ``x_b`` are the chosen basepoints."""
    (i, p), (j, q) = _as_point(x), _as_point(y)
    if i == j:
        return _point_distance(h.component(i), p, q)
    for k in (i, j):
        if k not in basepoints:
            raise ValueError(f"missing basepoint for component {k}")
    return (_point_distance(h.component(i), p, basepoints[i])
            + _point_distance(h.component(j), basepoints[j], q) + 1)


@dataclass
class UniversalPropertyReport:
    h: Dict[Tuple[int, Hashable], Hashable]
    commutes: bool
    h_is_map: bool
    component_maps: Dict[int, bool]
    failing_components: List[int] = field(default_factory=list)
    h_violations: List[Tuple] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return self.commutes and self.h_is_map == all(self.component_maps.values())


def universal_property_check(components: Sequence[FiniteSpace], target: FiniteSpace,
                             maps: Sequence[Mapping]) -> UniversalPropertyReport:
    """Glue ``maps[i]`` into ``h`` on the coproduct and compare the proximity
    map property of ``h`` with that of each component map."""
    if not all(isinstance(c, FiniteSpace) for c in components) or not isinstance(target, FiniteSpace):
        raise ValueError("universal property check needs finite components and target")
    if len(maps) != len(components):
        raise ValueError("one map per component is required")
    cop = Coproduct(components)
    flat = cop.as_finite()
    h = {(i, p): maps[i - 1][p] for i, c in enumerate(components, 1) for p in c.points
         if p in maps[i - 1]}
    comp_ok = {i: proximity_map_check(maps[i - 1], c, target) for i, c in enumerate(components, 1)}
    h_ok = proximity_map_check(h, flat, target)
    commutes = all(h[(i, p)] == maps[i - 1][p] for i, c in enumerate(components, 1) for p in c.points)
    return UniversalPropertyReport(
        h=h,
        commutes=commutes,
        h_is_map=h_ok,
        component_maps=comp_ok,
        failing_components=[i for i, ok in comp_ok.items() if not ok],
        h_violations=map_violations(h, flat, target),
    )
