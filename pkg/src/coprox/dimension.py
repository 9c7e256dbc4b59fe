"""Delta-coverings, multiplicity, refinement and proximity dimension.

A delta-covering is a finite family of pairs ``(A_i, B_i)`` with the ``B_i``
covering the carrier and each ``B_i`` strongly inside ``A_i``.  Witnesses
are carried explicitly so that any claimed covering can be rechecked in a
single pass.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from .coproduct import Coproduct
from .spaces import FiniteSpace, ProximitySpace

MAX_EXHAUSTIVE_POINTS = 4


@dataclass(frozen=True)
class DeltaCovering:
    space: ProximitySpace
    pairs: Tuple[Tuple[Any, Any], ...]

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple((a, b) for a, b in self.pairs))

    @property
    def sets(self) -> list:
        return [a for a, _ in self.pairs]

    @property
    def witnesses(self) -> list:
        return [b for _, b in self.pairs]

    def __len__(self) -> int:
        return len(self.pairs)


@dataclass
class CoveringReport:
    ok: bool
    violations: List[dict] = field(default_factory=list)


def validate_covering(c: DeltaCovering) -> CoveringReport:
    sp = c.space
    violations = []
    if not c.pairs:
        violations.append({"kind": "empty-family"})
    covered = sp.union_all(c.witnesses)
    gap = sp.difference(sp.full(), covered)
    if not sp.is_empty(gap):
        violations.append({"kind": "coverage-gap", "gap": sp.format_set(gap)})
    for i, (a, b) in enumerate(c.pairs):
        if not sp.strongly_inside(b, a):
            violations.append({"kind": "not-strongly-inside", "index": i,
                               "a": sp.format_set(a), "b": sp.format_set(b)})
    return CoveringReport(not violations, violations)


def _split(space: ProximitySpace, sets: Sequence, max_atoms: int) -> List[Tuple[Any, int]]:
    cells = [(space.full(), 0)]
    for k, g in enumerate(sets):
        nxt = []
        for s, sig in cells:
            inside = space.intersection(s, g)
            outside = space.difference(s, g)
            if not space.is_empty(inside):
                nxt.append((inside, sig | (1 << k)))
            if not space.is_empty(outside):
                nxt.append((outside, sig))
        if len(nxt) > max_atoms:
            raise ValueError(f"more than {max_atoms} atoms")
        cells = nxt
    return cells


def multiplicity(space: ProximitySpace, sets: Sequence, max_atoms: int = 4096) -> int:
    """Largest number of members of ``sets`` sharing a point.

    Duplicates count separately.  Computed exactly over the atoms generated
    by ``sets``; every member is a union of those atoms.
    """
    if not sets:
        raise ValueError("multiplicity of an empty family")
    if isinstance(space, FiniteSpace):
        return max(sum(1 for s in sets if p in s) for p in space.points)
    return max(bin(sig).count("1") for _, sig in _split(space, list(sets), max_atoms))


# ---------------------------------------------------------------------------
# Refinement re-indexing


@dataclass(frozen=True)
class RefinementAssignment:
    refinement: DeltaCovering
    targets: Tuple[Any, ...]
    assign: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(self.targets))
        object.__setattr__(self, "assign", tuple(self.assign))


def first_fit_assignment(space: ProximitySpace, sets: Sequence, targets: Sequence) -> Tuple[int, ...]:
    """Send each set to the first target containing it."""
    out = []
    for j, v in enumerate(sets):
        for i, u in enumerate(targets):
            if space.is_subset(v, u):
                out.append(i)
                break
        else:
            raise ValueError(f"refinement set {j} lies in no target")
    return tuple(out)


def reindex_refinement(r: RefinementAssignment) -> DeltaCovering:
    """Collapse a refinement onto the targets' indexing.

    ``A_i`` is the union of the refinement sets assigned to target ``i`` and
    ``C_i`` the union of their witnesses; targets with nothing assigned get
    the empty pair.
    """
    sp = r.refinement.space
    if len(r.assign) != len(r.refinement.pairs):
        raise ValueError("assignment must cover every refinement pair")
    groups: Dict[int, List[int]] = {i: [] for i in range(len(r.targets))}
    for j, i in enumerate(r.assign):
        if i not in groups:
            raise ValueError(f"pair {j} assigned to unknown target {i}")
        v = r.refinement.pairs[j][0]
        if not sp.is_subset(v, r.targets[i]):
            raise ValueError(f"refinement set {j} is not contained in target {i}")
        groups[i].append(j)
    pairs = []
    for i in range(len(r.targets)):
        js = groups[i]
        pairs.append((sp.union_all(r.refinement.pairs[j][0] for j in js),
                      sp.union_all(r.refinement.pairs[j][1] for j in js)))
    return DeltaCovering(sp, tuple(pairs))


def refines(space: ProximitySpace, sets: Sequence, targets: Sequence) -> bool:
    return all(any(space.is_subset(v, u) for u in targets) for v in sets)


# ---------------------------------------------------------------------------
# Exhaustive proximity dimension of small finite spaces


@dataclass(frozen=True)
class AtLeast:
    """Lower bound returned when the dimension reaches the cap."""

    value: int

    def __str__(self) -> str:
        return f">= {self.value}"


def _as_finite(space) -> FiniteSpace:
    if isinstance(space, FiniteSpace):
        return space
    if isinstance(space, Coproduct):
        return space.as_finite()
    raise ValueError("exhaustive dimension needs a finite space")


class _FiniteTables:
    def __init__(self, space: FiniteSpace):
        n = len(space.points)
        idx = space.index
        self.n = n
        self.full = (1 << n) - 1
        nb = [0] * n
        for p in space.points:
            for q in space.neighbours[p]:
                nb[idx[p]] |= 1 << idx[q]
        self.core = []
        for s in range(1 << n):
            rest = self.full & ~s
            self.core.append(sum(1 << i for i in range(n) if s >> i & 1 and not nb[i] & rest))
        self.down = []
        for s in range(1 << n):
            m = 0
            sub = s
            while True:
                m |= 1 << sub
                if sub == 0:
                    break
                sub = (sub - 1) & s
            self.down.append(m)
        self._memo: Dict[int, int] = {}

    def min_refinement_multiplicity(self, down: int) -> int:
        """Least multiplicity of a delta-covering whose members all lie in
        the down-set ``down`` (a bitmask over subsets)."""
        if down in self._memo:
            return self._memo[down]
        cand = [s for s in range(1, 1 << self.n) if down >> s & 1 and self.core[s]]
        for t in range(1, len(cand) + 1):
            if self._feasible(cand, t):
                self._memo[down] = t
                return t
        raise ValueError("down-set admits no delta-covering")

    def _feasible(self, cand: List[int], t: int) -> bool:
        n, full, core = self.n, self.full, self.core

        def go(covered: int, counts: List[int], used: int) -> bool:
            if covered == full:
                return True
            x = (full & ~covered) & -(full & ~covered)
            for k, s in enumerate(cand):
                if used >> k & 1 or not core[s] & x:
                    continue
                if any(counts[i] >= t for i in range(n) if s >> i & 1):
                    continue
                nxt = [c + (s >> i & 1) for i, c in enumerate(counts)]
                if go(covered | core[s], nxt, used | (1 << k)):
                    return True
            return False

        return go(0, [0] * n, 0)


def brute_delta_dim(space, cap: Optional[int] = None,
                    max_points: int = MAX_EXHAUSTIVE_POINTS) -> Union[int, AtLeast]:
    """Proximity dimension of a finite space by exhaustive search.

    Every family of subsets is enumerated; families whose best witnesses
    cover the ground are delta-coverings.  A family's refinements are the
    families inside its down-set, so the refinement search is shared between
    families with the same down-set.
    """
    fs = _as_finite(space)
    if len(fs.points) > max_points:
        raise ValueError(f"exhaustive mode supports at most {max_points} points, got {len(fs.points)}")
    tb = _FiniteTables(fs)
    nsub = 1 << tb.n
    cov = [0] * (1 << nsub)
    down = [0] * (1 << nsub)
    worst = 1
    seen = set()
    for fam in range(1, 1 << nsub):
        low = fam & -fam
        s = low.bit_length() - 1
        rest = fam ^ low
        cov[fam] = cov[rest] | tb.core[s]
        down[fam] = down[rest] | tb.down[s]
        if cov[fam] == tb.full and down[fam] not in seen:
            seen.add(down[fam])
            worst = max(worst, tb.min_refinement_multiplicity(down[fam]))
    dim = worst - 1
    if cap is not None and dim >= cap:
        return AtLeast(cap)
    return dim


@dataclass
class DimSupReport:
    component_dims: List[Union[int, AtLeast]]
    coproduct_dim: Union[int, AtLeast]

    @property
    def ok(self) -> bool:
        dims = self.component_dims
        if any(isinstance(d, AtLeast) for d in dims + [self.coproduct_dim]):
            return False
        return self.coproduct_dim == max(dims)


def dim_sup_check(components: Sequence[FiniteSpace], max_points: int = MAX_EXHAUSTIVE_POINTS) -> DimSupReport:
    """Compare the coproduct's dimension with the largest component dimension."""
    comps = [brute_delta_dim(c, max_points=max_points) for c in components]
    whole = brute_delta_dim(Coproduct(list(components)), max_points=max_points)
    return DimSupReport(comps, whole)


# ---------------------------------------------------------------------------
# Certificates


@dataclass
class DimensionCertificate:
    space: ProximitySpace
    covering: DeltaCovering
    refinement: DeltaCovering
    claimed_multiplicity: int


@dataclass
class CertificateReport:
    ok: bool
    covering: CoveringReport
    refinement: CoveringReport
    refines: bool
    multiplicity: int
    claimed_multiplicity: int

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "covering_valid": self.covering.ok,
            "covering_violations": self.covering.violations,
            "refinement_valid": self.refinement.ok,
            "refinement_violations": self.refinement.violations,
            "refines": self.refines,
            "multiplicity": self.multiplicity,
            "claimed_multiplicity": self.claimed_multiplicity,
        }


def verify_certificate(cert: DimensionCertificate) -> CertificateReport:
    sp = cert.space
    cov = validate_covering(cert.covering)
    ref = validate_covering(cert.refinement)
    ok_ref = refines(sp, cert.refinement.sets, cert.covering.sets)
    mult = multiplicity(sp, cert.refinement.sets) if cert.refinement.pairs else 0
    ok = cov.ok and ref.ok and ok_ref and mult <= cert.claimed_multiplicity
    return CertificateReport(ok, cov, ref, ok_ref, mult, cert.claimed_multiplicity)


def search_refinement(space: ProximitySpace, covering: DeltaCovering, pool: Sequence,
                      target_multiplicity: int, max_union: int = 2,
                      node_limit: int = 200000) -> Optional[DimensionCertificate]:
    """Look for a refinement of ``covering`` with multiplicity at most
    ``target_multiplicity``, built from unions of at most ``max_union`` pool
    sets.  Witnesses are the finite core when available, otherwise other
    pool unions strongly inside the candidate.

    ``None`` only means the bounded search failed; it proves nothing about
    the dimension.
    """
    pool = [space.check(p) for p in pool]
    unions = []
    for k in range(1, max_union + 1):
        for combo in combinations(pool, k):
            u = space.union_all(combo)
            if not space.is_empty(u) and u not in unions:
                unions.append(u)
    targets = covering.sets
    sets = [u for u in unions if any(space.is_subset(u, a) for a in targets)]
    cand: List[Tuple[Any, Any]] = []
    for v in sets:
        if isinstance(space, FiniteSpace):
            w = space.core(v)
            if w:
                cand.append((v, w))
            continue
        for w in unions:
            if space.is_subset(w, v) and space.strongly_inside(w, v):
                cand.append((v, w))

    nodes = 0
    full = space.full()

    def go(chosen: List[int], covered) -> Optional[List[int]]:
        nonlocal nodes
        nodes += 1
        if nodes > node_limit:
            return None
        rest = space.difference(full, covered)
        if space.is_empty(rest):
            return chosen
        x = space.sample_point(rest)
        for k, (v, w) in enumerate(cand):
            if k in chosen or not space.contains(w, x):
                continue
            trial = chosen + [k]
            if multiplicity(space, [cand[j][0] for j in trial]) > target_multiplicity:
                continue
            found = go(trial, space.union(covered, w))
            if found is not None:
                return found
        return None

    picked = go([], space.empty())
    if picked is None:
        return None
    refinement = DeltaCovering(space, tuple(cand[k] for k in picked))
    return DimensionCertificate(space, covering, refinement, target_multiplicity)
