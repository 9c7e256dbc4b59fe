import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from coprox.coproduct import Coproduct, TemplateCoproduct
from coprox.germs import (TAIL, BoundError, Germ, absorbs, atoms, classify_germ, cliques, coproduct_generators,
                          enumerate_germs, extend_germ, germ_components, point_germ, star_close)
from coprox.regions import REALS, parse_region, point, random_region
from coprox.spaces import METRIC, REAL_KINDS, FiniteSpace, RealLine
from coprox.suites import naive_germs

R = parse_region
METRIC_R = RealLine(METRIC)


@pytest.fixture
def three():
    """Metric line cut at 0 and 1: atoms M=(0,1), L=(-inf,0], R=[1,inf)."""
    alg = atoms(METRIC_R, [R("(-inf,0]"), R("[1,inf)")])
    m, l, r = 1, 2, 4
    return alg, m, l, r


def test_atoms_of_two_rays(three):
    alg, m, l, r = three
    assert alg.atoms == [R("(0,1)"), R("(-inf,0]"), R("[1,inf)")]
    assert METRIC_R.union_all(alg.atoms) == REALS


def test_single_full_generator_gives_one_atom():
    assert atoms(METRIC_R, [REALS]).atoms == [REALS]


def test_template_atoms_include_tail_remainder():
    h = TemplateCoproduct(FiniteSpace(["p"]))
    alg = atoms(h, [h.carrier(1), h.carrier(2)])
    assert h.complement(h.union(h.carrier(1), h.carrier(2))) in alg.atoms
    assert h.carrier(1) in alg.atoms and h.carrier(2) in alg.atoms
    assert len(alg.atoms) == 3


def test_five_germs_on_three_atoms(three):
    alg, m, l, r = three
    got = {g.support for g in enumerate_germs(alg)}
    assert got == {l, m, r, l | m, m | r}
    maximal = {g.support for g in enumerate_germs(alg, "maximal")}
    assert maximal == {l | m, m | r}


def test_discrete_pair_has_two_germs():
    sp = FiniteSpace(["a", "b"])
    assert len(enumerate_germs(atoms(sp, [frozenset("a"), frozenset("b")]))) == 2


@pytest.mark.parametrize("k", range(1, 7))
def test_singleton_template_has_k_plus_one_germs(k):
    h = TemplateCoproduct(FiniteSpace(["p"]))
    alg = atoms(h, [h.carrier(i) for i in range(1, k + 1)])
    germs = enumerate_germs(alg)
    assert len(germs) == k + 1
    assert all(len(g) == 1 for g in germs)
    assert [classify_germ(alg, g) for g in germs].count(TAIL) == 1


def test_point_germs(three):
    alg, m, l, r = three
    assert point_germ(alg, Fraction(1, 2)).support == m
    assert point_germ(alg, 0).support == l | m
    assert point_germ(alg, 5).support == r
    h = Coproduct([FiniteSpace(["a"])])
    with pytest.raises(ValueError):
        point_germ(atoms(h, []), (1, "z"))


def test_absorbs_examples(three):
    alg, m, l, r = three
    gl, gm = Germ(alg, l), Germ(alg, m)
    assert absorbs(alg, REALS, [gl, gm])
    assert absorbs(alg, R("(-inf,0]"), [gl])
    assert not absorbs(alg, R("(-inf,0]"), [gm])
    assert not absorbs(alg, METRIC_R.empty(), [gl])
    with pytest.raises(ValueError):
        absorbs(alg, R("[0,1/2]"), [gl])


def test_star_close_examples(three):
    alg, m, l, r = three
    gl, gm, gr, glm = (Germ(alg, s) for s in (l, m, r, l | m))
    assert star_close(alg, [gm], [gm])
    assert not star_close(alg, [gl], [gr])
    assert star_close(alg, [gl], [glm])
    other = atoms(METRIC_R, [R("[0,1]")])
    with pytest.raises(ValueError):
        star_close(alg, [gl], [Germ(other, 1)])


def test_bounds_are_enforced():
    gens = [point(i) for i in range(13)]
    with pytest.raises(BoundError):
        atoms(METRIC_R, gens)
    alg = atoms(METRIC_R, gens[:9], max_generators=12)
    with pytest.raises(BoundError):
        enumerate_germs(alg, max_atoms=8)


def test_extend_germ_examples():
    h = TemplateCoproduct(FiniteSpace(["p"]))
    comp = atoms(h.component(1), [])
    calg = atoms(h, coproduct_generators(h, {1: [], 2: []}))
    g = enumerate_germs(comp)[0]
    e1 = extend_germ(comp, g, calg, 1)
    assert calg.atoms[e1.indices[0]] == h.carrier(1)
    assert classify_germ(calg, e1).index == 1
    e2 = extend_germ(comp, g, calg, 2)
    assert e1 != e2
    tail = [x for x in enumerate_germs(calg) if classify_germ(calg, x) == TAIL]
    assert len(tail) == 1 and tail[0] not in (e1, e2)


def test_germ_components_on_finite_coproduct():
    h = Coproduct([METRIC_R, FiniteSpace.from_partition([["a", "b"]])])
    calg = atoms(h, coproduct_generators(h, {1: [R("[0,1]")], 2: [frozenset("a")]}))
    for g in enumerate_germs(calg):
        assert len(germ_components(calg, g)) == 1
        assert classify_germ(calg, g).index in (1, 2)


def naive_star_close(alg, first, second):
    """Every pair of absorbers is close, checked over all element pairs."""
    n = alg.size
    masks = range(1 << n)
    abs_a = [x for x in masks if all(x & g.support for g in first)]
    abs_b = [y for y in masks if all(y & g.support for g in second)]
    sp = alg.space
    return all(sp.close(alg.element(x), alg.element(y)) for x in abs_a for y in abs_b)


algebra_seeds = st.tuples(st.sampled_from(REAL_KINDS), st.integers(0, 10**6))


def random_algebra(kind, seed):
    rng = random.Random(seed)
    return atoms(RealLine(kind), [random_region(rng, max_intervals=2) for _ in range(rng.randint(1, 2))])


@given(algebra_seeds)
def test_star_close_matches_naive_oracle(params):
    alg = random_algebra(*params)
    if alg.size > 4:
        return
    germs = enumerate_germs(alg)
    for g, h in itertools.product(germs, repeat=2):
        assert star_close(alg, [g], [h]) == naive_star_close(alg, [g], [h])


@given(algebra_seeds)
def test_germs_match_naive_filter(params):
    alg = random_algebra(*params)
    if alg.size > 4:
        return
    assert [g.support for g in enumerate_germs(alg)] == naive_germs(alg.space, alg.atoms)


@given(algebra_seeds)
def test_trace_laws(params):
    alg = random_algebra(*params)
    full = alg.full_mask
    for g in enumerate_germs(alg):
        for a in range(1 << alg.size):
            # dichotomy
            assert g.contains(a) or g.contains(full & ~a)
            # upward closure
            for b in range(1 << alg.size):
                if a & b == a and g.contains(a):
                    assert g.contains(b)
                if g.contains(a | b):
                    assert g.contains(a) or g.contains(b)


@given(algebra_seeds, st.integers(-16, 16))
def test_point_germ_soundness(params, n):
    alg = random_algebra(*params)
    x = Fraction(n, 4)
    g = point_germ(alg, x)
    sp = alg.space
    assert g.support in cliques(alg.adjacency)
    for mask in range(1, 1 << alg.size):
        if sp.close(sp.singleton(x), alg.element(mask)):
            assert g.contains(mask)


def test_cliques_are_pairwise_adjacent():
    adj = [0b011, 0b111, 0b110]
    assert cliques(adj) == [0b001, 0b010, 0b011, 0b100, 0b110]
