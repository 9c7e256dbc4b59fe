import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from coprox.coproduct import (Coproduct, CoproductPoint, CoproductSet, TemplateCoproduct, coproduct_close,
                              coproduct_metric, disjoint_closure, inject, universal_property_check)
from coprox.regions import parse_region
from coprox.spaces import ALEKSANDROFF, METRIC, REAL_KINDS, STANDARD, STONECECH, FiniteSpace, RealLine

R = parse_region
STD2 = Coproduct([RealLine(STANDARD), RealLine(STANDARD)])
SINGLETONS = TemplateCoproduct(FiniteSpace(["p"]))
MIXED = [
    Coproduct([RealLine(METRIC), FiniteSpace.from_partition([["a", "b"], ["c"]]), RealLine(ALEKSANDROFF)]),
    TemplateCoproduct(RealLine(METRIC)),
    TemplateCoproduct(FiniteSpace.from_partition([["a", "b"]])),
]
seeds = st.integers(0, 2**32 - 1)


def draw_sets(h, seed, k):
    rng = random.Random(seed)
    return [h.random_set(rng) for _ in range(k)]


def test_close_examples():
    assert coproduct_close(STD2, inject(STD2, 1, R("[0,1]")), inject(STD2, 1, R("[1,2]")))
    assert not coproduct_close(STD2, inject(STD2, 1, R("[0,1]")), inject(STD2, 2, R("[0,1]")))
    a = SINGLETONS.difference(SINGLETONS.full(), SINGLETONS.carrier(1))
    assert not coproduct_close(SINGLETONS, a, SINGLETONS.carrier(1))
    # two full tails share infinitely many indices
    assert SINGLETONS.close(SINGLETONS.full(), a)


def test_boolean_examples():
    h = SINGLETONS
    a = h.make({3: frozenset()}, tail_full=True)
    assert h.complement(a) == h.make({3: frozenset(["p"])}, tail_full=False)
    assert h.complement(a).tail == "empty"
    assert STD2.union(inject(STD2, 1, R("[0,1]")), inject(STD2, 1, R("[1,2]"))) == inject(STD2, 1, R("[0,2]"))


def test_inject():
    a = inject(STD2, 1, R("[0,1]"))
    assert a == CoproductSet(((1, R("[0,1]")),), False)
    assert a.tail == "empty"
    with pytest.raises(ValueError):
        inject(STD2, 3, R("[0,1]"))
    with pytest.raises(ValueError):
        inject(STD2, 0, R("[0,1]"))


def test_normal_form_drops_implied_entries():
    h = SINGLETONS
    assert h.make({2: frozenset(["p"])}, tail_full=True) == h.full()
    assert h.make({2: frozenset()}) == h.empty()


def test_coproduct_metric_examples():
    h = Coproduct([RealLine(METRIC), RealLine(METRIC)])
    base = {1: 0, 2: 0}
    assert coproduct_metric(h, (1, 0), (2, 0), base) == 1
    assert coproduct_metric(h, (1, 2), (2, 3), base) == 6
    assert coproduct_metric(h, (1, 2), (1, 5), base) == 3
    with pytest.raises(ValueError):
        coproduct_metric(h, (1, 2), (2, 5), {1: 0})


@given(st.lists(st.tuples(st.integers(1, 3), st.integers(-8, 8)), min_size=3, max_size=3),
       st.tuples(st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4)))
def test_coproduct_metric_axioms(pts, base):
    h = Coproduct([RealLine(METRIC)] * 3)
    bp = {i + 1: Fraction(b) for i, b in enumerate(base)}
    x, y, z = pts
    d = lambda u, v: coproduct_metric(h, u, v, bp)
    assert d(x, x) == 0
    assert d(x, y) == d(y, x)
    assert d(x, z) <= d(x, y) + d(y, z)
    if x[0] != y[0]:
        assert d(x, y) >= 1
    elif x != y:
        assert d(x, y) > 0


def test_universal_property_examples():
    one = FiniteSpace(["p"])
    target = FiniteSpace(["u", "v"])
    rep = universal_property_check([one, one], target, [{"p": "u"}, {"p": "v"}])
    assert rep.h_is_map and rep.consistent
    glued = FiniteSpace.from_partition([["a", "b"]])
    rep = universal_property_check([glued, one], target, [{"a": "u", "b": "v"}, {"p": "u"}])
    assert not rep.h_is_map and rep.failing_components == [1] and rep.consistent
    rep = universal_property_check([glued, one], target, [{"a": "v", "b": "v"}, {"p": "v"}])
    assert rep.h_is_map


def test_disjoint_closure_examples():
    h = Coproduct([RealLine(STANDARD), RealLine(METRIC)])
    assert disjoint_closure(h, inject(h, 1, R("(0,1)"))) == inject(h, 1, R("[0,1]"))
    t = TemplateCoproduct(RealLine(STANDARD))
    assert disjoint_closure(t, t.full()) == t.full()
    a = h.union(inject(h, 1, R("(0,1)")), inject(h, 2, R("(2,3) u (3,4)")))
    assert disjoint_closure(h, a) == h.union(inject(h, 1, R("[0,1]")), inject(h, 2, R("[2,4]")))


def test_nested_coproducts_flatten():
    inner = Coproduct([RealLine(METRIC), FiniteSpace(["a"])])
    h = Coproduct([inner, RealLine(STANDARD)])
    assert len(h.components) == 3
    with pytest.raises(ValueError):
        Coproduct([SINGLETONS])
    with pytest.raises(ValueError):
        TemplateCoproduct(inner)


def test_carriers_pairwise_far():
    for h in MIXED:
        for i in range(1, 4):
            for j in range(1, 4):
                if i != j:
                    assert not h.close(h.carrier(i), h.carrier(j))


def test_template_tail_rule():
    h = SINGLETONS
    rest = h.complement(h.carrier(1))
    assert h.close(rest, h.complement(h.carrier(2)))
    assert not h.close(rest, h.carrier(1))


@pytest.mark.parametrize("h", MIXED, ids=str)
@given(seed=seeds)
def test_symmetry_and_union_rule(h, seed):
    a, b, c = draw_sets(h, seed, 3)
    assert h.close(a, b) == h.close(b, a)
    assert h.close(a, h.union(b, c)) == (h.close(a, b) or h.close(a, c))
    if not h.is_empty(h.intersection(a, b)):
        assert h.close(a, b)
    assert not h.close(h.empty(), a)


@pytest.mark.parametrize("h", MIXED, ids=str)
@given(seed=seeds)
def test_axiom5_via_componentwise_witness(h, seed):
    a, b = draw_sets(h, seed, 2)
    if h.close(a, b) or h.is_empty(a) or h.is_empty(b):
        return
    e = h.axiom5_witness(a, b)
    assert e is not None
    assert not h.close(a, e)
    assert not h.close(h.complement(e), b)


@pytest.mark.parametrize("h", MIXED, ids=str)
@given(seed=seeds)
def test_boolean_algebra_on_coproduct_sets(h, seed):
    a, b = draw_sets(h, seed, 2)
    comp = h.complement
    assert comp(comp(a)) == a
    assert comp(h.union(a, b)) == h.intersection(comp(a), comp(b))
    assert h.is_empty(h.intersection(a, comp(a)))
    assert h.union(a, comp(a)) == h.full()


@given(st.sampled_from(REAL_KINDS), seeds)
def test_subspace_recovery_on_regions(kind, seed):
    h = Coproduct([RealLine(kind), RealLine(STANDARD)])
    comp = h.component(1)
    rng = random.Random(seed)
    a, b = comp.random_set(rng), comp.random_set(rng)
    assert h.close(inject(h, 1, a), inject(h, 1, b)) == comp.close(a, b)


@given(seeds)
def test_equinormal_when_all_standard(seed):
    h = Coproduct([RealLine(STANDARD), RealLine(STONECECH), FiniteSpace(["a", "b"])])
    a, b = draw_sets(h, seed, 2)
    meet = h.intersection(disjoint_closure(h, a), disjoint_closure(h, b))
    assert h.close(a, b) == (not h.is_empty(meet))


def test_aleksandroff_component_breaks_equinormality():
    h = Coproduct([RealLine(STANDARD), RealLine(ALEKSANDROFF)])
    a, b = inject(h, 2, R("[1,inf)")), inject(h, 2, R("(-inf,0]"))
    assert h.close(a, b)
    assert h.is_empty(h.intersection(disjoint_closure(h, a), disjoint_closure(h, b)))


def test_points_and_membership():
    h = TemplateCoproduct(RealLine(METRIC))
    x = CoproductPoint(7, Fraction(1, 2))
    assert h.contains(h.full(), x)
    assert not h.contains(h.complement(h.carrier(7)), x)
    assert h.contains(h.singleton(x), (7, Fraction(1, 2)))
