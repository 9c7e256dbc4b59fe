"""Atoms of finite subalgebras and the germs living on them.

Fix finitely many generator sets.  The nonempty boolean combinations of the
generators (the *atoms*) partition the carrier, and every element of the
generated subalgebra is a union of atoms, so it is named by a bitmask over
atom indices.  A *germ* is a nonempty set of pairwise close atoms: the trace
any cluster leaves on the subalgebra is of this form, with the trace itself
being every element that meets the germ's support.

Atoms are ordered by their generator signature and germs by their support
bitmask, so every listing is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from .coproduct import CoproductSet, _CoproductBase, inject
from .spaces import ProximitySpace

MAX_GENERATORS = 12
MAX_ATOMS = 16


class BoundError(ValueError):
    """A configured enumeration bound was exceeded."""


def _bits(mask: int):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


@dataclass(eq=False)
class Subalgebra:
    space: ProximitySpace
    generators: tuple
    atoms: list
    signatures: list
    _adj: Optional[list] = field(default=None, repr=False)

    @property
    def size(self) -> int:
        return len(self.atoms)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.atoms)) - 1

    @property
    def adjacency(self) -> list:
        """``adjacency[i]``: bitmask of atoms close to atom ``i``."""
        if self._adj is None:
            n = len(self.atoms)
            adj = [0] * n
            for i in range(n):
                adj[i] |= 1 << i
                for j in range(i + 1, n):
                    if self.space.close(self.atoms[i], self.atoms[j]):
                        adj[i] |= 1 << j
                        adj[j] |= 1 << i
            self._adj = adj
        return self._adj

    def element(self, mask: int):
        """Union of the atoms in ``mask``."""
        return self.space.union_all(self.atoms[i] for i in _bits(mask))

    def mask_of(self, a) -> int:
        """Atom mask of an algebra element; raises if ``a`` is not a union of atoms."""
        sp = self.space
        mask = 0
        for i, atom in enumerate(self.atoms):
            meet = sp.intersection(atom, a)
            if sp.is_empty(meet):
                continue
            if not sp.is_empty(sp.difference(atom, a)):
                raise ValueError("set is not a union of atoms of this algebra")
            mask |= 1 << i
        return mask

    def atoms_close(self, mask_a: int, mask_b: int) -> bool:
        """Closeness of two algebra elements, decided atom by atom."""
        adj = self.adjacency
        return any(adj[i] & mask_b for i in _bits(mask_a))


def atoms(space: ProximitySpace, generators: Sequence, max_generators: int = MAX_GENERATORS) -> Subalgebra:
    gens = tuple(space.check(g) for g in generators)
    if len(gens) > max_generators:
        raise BoundError(f"{len(gens)} generators exceed the bound of {max_generators}")
    cells = [(space.full(), 0)]
    for k, g in enumerate(gens):
        nxt = []
        for s, sig in cells:
            inside = space.intersection(s, g)
            outside = space.difference(s, g)
            if not space.is_empty(inside):
                nxt.append((inside, sig | (1 << k)))
            if not space.is_empty(outside):
                nxt.append((outside, sig))
        cells = nxt
    cells.sort(key=lambda c: c[1])
    return Subalgebra(space, gens, [c[0] for c in cells], [c[1] for c in cells])


@dataclass(frozen=True)
class Germ:
    algebra: Subalgebra = field(compare=False, hash=False, repr=False)
    support: int

    @property
    def indices(self) -> List[int]:
        return list(_bits(self.support))

    def __len__(self) -> int:
        return bin(self.support).count("1")

    def contains(self, mask: int) -> bool:
        """Whether the algebra element with atom mask ``mask`` is in the trace."""
        return bool(mask & self.support)

    def __eq__(self, other):
        return (isinstance(other, Germ) and other.algebra is self.algebra
                and other.support == self.support)

    def __hash__(self):
        return hash((id(self.algebra), self.support))


def cliques(adj: Sequence[int]) -> List[int]:
    """All nonempty pairwise-adjacent subsets of ``range(len(adj))``, as
    ascending bitmasks.  ``adj[i]`` must contain bit ``i``."""
    n = len(adj)
    ok = bytearray(1 << n)
    ok[0] = 1
    out = []
    for mask in range(1, 1 << n):
        low = mask & -mask
        rest = mask ^ low
        i = low.bit_length() - 1
        if ok[rest] and (mask & adj[i]) == mask:
            ok[mask] = 1
            out.append(mask)
    return out


def enumerate_germs(alg: Subalgebra, mode: str = "all", max_atoms: int = MAX_ATOMS) -> List[Germ]:
    if alg.size > max_atoms:
        raise BoundError(f"{alg.size} atoms exceed the bound of {max_atoms}")
    if mode not in ("all", "maximal"):
        raise ValueError(f"unknown mode {mode!r}")
    adj = alg.adjacency
    found = cliques(adj)
    if mode == "maximal":
        n = alg.size
        found = [c for c in found
                 if not any((c & adj[j]) == c for j in range(n) if not c >> j & 1)]
    return [Germ(alg, c) for c in found]


def point_germ(alg: Subalgebra, x) -> Germ:
    sp = alg.space
    if not sp.contains(sp.full(), x):
        raise ValueError(f"point {x!r} is outside the carrier")
    pt = sp.singleton(x)
    support = 0
    for i, atom in enumerate(alg.atoms):
        if sp.close(atom, pt):
            support |= 1 << i
    return Germ(alg, support)


def _same_algebra(alg: Subalgebra, germs: Sequence[Germ]) -> None:
    for g in germs:
        if g.algebra is not alg:
            raise ValueError("germ belongs to a different algebra")


def absorbs(alg: Subalgebra, a, germs: Sequence[Germ]) -> bool:
    """``a`` lies in the trace of every germ in ``germs``."""
    _same_algebra(alg, germs)
    mask = alg.mask_of(alg.space.check(a))
    return all(mask & g.support for g in germs)


def star_close(alg: Subalgebra, first: Sequence[Germ], second: Sequence[Germ]) -> bool:
    """Every absorber of ``first`` is close to every absorber of ``second``.

    Absorption is upward closed and closeness is monotone, so a far pair
    exists iff some absorber A of ``first`` leaves an absorber of ``second``
    among the atoms not close to A; the largest candidate is the set of all
    such atoms.  This keeps the exhaustive check at 2^n steps instead of 4^n.
    """
    if not first or not second:
        raise ValueError("germ lists must be nonempty")
    _same_algebra(alg, first)
    _same_algebra(alg, second)
    n = alg.size
    adj = alg.adjacency
    full = alg.full_mask
    sup_a = [g.support for g in first]
    sup_b = [g.support for g in second]
    reach = [0] * (1 << n)
    for mask in range(1, 1 << n):
        low = mask & -mask
        reach[mask] = reach[mask ^ low] | adj[low.bit_length() - 1]
        if all(mask & s for s in sup_a):
            far = full & ~reach[mask]
            if all(far & s for s in sup_b):
                return False
    return True


# ---------------------------------------------------------------------------
# Coproduct germs


@dataclass(frozen=True)
class GermClass:
    tag: str  # "component" or "tail"
    index: Optional[int] = None

    def __str__(self) -> str:
        return f"component:{self.index}" if self.tag == "component" else "tail"


TAIL = GermClass("tail")


def atom_component(h: _CoproductBase, atom: CoproductSet) -> Optional[int]:
    """Index ``i`` if ``atom`` lies inside ``X_i``, else None."""
    if atom.tail_full or len(atom.explicit) != 1:
        return None
    return atom.explicit[0][0]


def classify_germ(coproduct_alg: Subalgebra, g: Germ) -> GermClass:
    h = coproduct_alg.space
    for i in g.indices:
        k = atom_component(h, coproduct_alg.atoms[i])
        if k is not None:
            return GermClass("component", k)
    return TAIL


def germ_components(coproduct_alg: Subalgebra, g: Germ) -> set:
    """Every component index some support atom of ``g`` lies in."""
    h = coproduct_alg.space
    out = set()
    for i in g.indices:
        k = atom_component(h, coproduct_alg.atoms[i])
        if k is not None:
            out.add(k)
    return out


def extend_germ(component_alg: Subalgebra, g: Germ, coproduct_alg: Subalgebra, index: int) -> Germ:
    """Push a germ of component ``index`` into the coproduct algebra."""
    _same_algebra(component_alg, [g])
    h = coproduct_alg.space
    lookup = {atom: k for k, atom in enumerate(coproduct_alg.atoms)}
    support = 0
    for i in g.indices:
        image = inject(h, index, component_alg.atoms[i])
        k = lookup.get(image)
        if k is None:
            raise ValueError(f"component atom {i} is not an atom of the coproduct algebra")
        support |= 1 << k
    return Germ(coproduct_alg, support)


def coproduct_generators(h: _CoproductBase, component_generators: dict) -> list:
    """Carriers ``X_i`` plus the injected component generators, in index order."""
    gens = []
    for i in sorted(component_generators):
        gens.append(h.carrier(i))
        gens.extend(inject(h, i, g) for g in component_generators[i])
    return gens
