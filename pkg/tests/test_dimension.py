import random

import pytest
from hypothesis import given, strategies as st

from coprox.coproduct import Coproduct
from coprox.dimension import (AtLeast, DeltaCovering, DimensionCertificate, RefinementAssignment, brute_delta_dim,
                              dim_sup_check, multiplicity, refines, reindex_refinement, search_refinement,
                              validate_covering, verify_certificate)
from coprox.regions import REALS, parse_region
from coprox.spaces import REAL_KINDS, STANDARD, FiniteSpace, RealLine, strong_inclusion
from coprox.suites import (partitions, random_finite_refinement, random_region_refinement,
                           two_cover_certificate)

from conftest import regions

R = parse_region
STD = RealLine(STANDARD)


def cov(space, *pairs):
    return DeltaCovering(space, tuple((R(a), R(b)) for a, b in pairs))


def test_two_interval_covering_needs_overlapping_witnesses():
    bad = cov(STD, ("(-inf,1)", "(-inf,1/2]"), ("(0,inf)", "[3/5,inf)"))
    rep = validate_covering(bad)
    assert not rep.ok
    assert rep.violations == [{"kind": "coverage-gap", "gap": "(1/2,3/5)"}]
    good = cov(STD, ("(-inf,1)", "(-inf,1/2]"), ("(0,inf)", "[1/2,inf)"))
    assert validate_covering(good).ok


def test_coverage_gap_reported():
    rep = validate_covering(cov(STD, ("(-inf,1)", "(-inf,1/2]"), ("(0,inf)", "[2,inf)")))
    assert {"kind": "coverage-gap", "gap": "(1/2,2)"} in rep.violations


def test_witness_not_strongly_inside():
    rep = validate_covering(cov(STD, ("(-inf,1)", "(-inf,1]"), ("(0,inf)", "[1/2,inf)")))
    assert [v["kind"] for v in rep.violations] == ["not-strongly-inside"]
    assert not validate_covering(DeltaCovering(STD, ())).ok


def test_partition_classes_cover():
    sp = FiniteSpace.from_partition([["a", "b"], ["c"]])
    classes = [frozenset("ab"), frozenset("c")]
    assert validate_covering(DeltaCovering(sp, tuple((c, c) for c in classes))).ok
    assert multiplicity(sp, classes) == 1


def test_multiplicity_examples():
    assert multiplicity(STD, [R("(-inf,1)"), R("(0,inf)")]) == 2
    assert multiplicity(STD, [REALS] * 3) == 3
    assert multiplicity(STD, [R("[0,1]"), R("(1,2]")]) == 1
    with pytest.raises(ValueError):
        multiplicity(STD, [])


def test_reindex_identity_preserves_covering():
    c = two_cover_certificate().covering
    r = RefinementAssignment(c, tuple(c.sets), (0, 1))
    out = reindex_refinement(r)
    assert out.pairs == c.pairs
    assert multiplicity(STD, out.sets) == 2


def test_reindex_merges_pairs_sent_to_one_target():
    c = cov(STD, ("(-inf,1)", "(-inf,1/2]"), ("(0,3)", "[1/2,2]"), ("(1,inf)", "[2,inf)"))
    assert validate_covering(c).ok
    targets = (R("(-inf,3)"), R("(1,inf)"))
    out = reindex_refinement(RefinementAssignment(c, targets, (0, 0, 1)))
    assert out.pairs[0] == (R("(-inf,3)"), R("(-inf,2]"))
    assert validate_covering(out).ok and refines(STD, out.sets, targets)


def test_reindex_disjoint_sets_keep_multiplicity_one():
    sp = FiniteSpace.from_partition([["a"], ["b", "c"], ["d"]])
    pairs = tuple((frozenset(s), frozenset(s)) for s in ("a", "bc", "d"))
    out = reindex_refinement(RefinementAssignment(DeltaCovering(sp, pairs), (frozenset("abc"), frozenset("d")),
                                                  (0, 0, 1)))
    assert multiplicity(sp, out.sets) == 1 and validate_covering(out).ok


def test_reindex_rejects_containment_failure():
    c = two_cover_certificate().covering
    with pytest.raises(ValueError):
        reindex_refinement(RefinementAssignment(c, (R("(-inf,0)"), R("(0,inf)")), (0, 1)))


@pytest.mark.parametrize("blocks,expected", [
    ([["a"], ["b"], ["c"]], 0),
    ([["a", "b"], ["c"]], 0),
    ([["a", "b", "c", "d"]], 0),
])
def test_brute_dim_examples(blocks, expected):
    assert brute_delta_dim(FiniteSpace.from_partition(blocks)) == expected


def test_brute_dim_on_non_proximity_relation():
    # the 4-point path is not a proximity; its covering dimension is still computable
    path = FiniteSpace("abcd", [("a", "b"), ("b", "c"), ("c", "d")])
    assert brute_delta_dim(path) == 1
    assert brute_delta_dim(path, cap=1) == AtLeast(1)
    with pytest.raises(ValueError):
        brute_delta_dim(FiniteSpace("abcde"))
    with pytest.raises(ValueError):
        brute_delta_dim(STD)


def test_every_proximity_on_four_points_has_dim_zero():
    for n in range(1, 5):
        for part in partitions("abcd"[:n]):
            assert brute_delta_dim(FiniteSpace.from_partition(part)) == 0


def test_dim_sup_examples():
    ident = FiniteSpace(["a", "b"])
    part = FiniteSpace.from_partition([["x", "y"]])
    assert dim_sup_check([ident, FiniteSpace(["c"])]).ok
    assert dim_sup_check([part, ident]).ok
    assert dim_sup_check([part]).ok


def test_certificate_for_two_cover():
    rep = verify_certificate(two_cover_certificate())
    assert rep.ok and rep.multiplicity == 2
    cert = two_cover_certificate()
    low = DimensionCertificate(cert.space, cert.covering, cert.refinement, 1)
    assert not verify_certificate(low).ok


def test_search_refinement_examples():
    c = two_cover_certificate().covering
    pool = [R(f"({a},{b})") for a, b in [("-inf", "1"), ("0", "inf"), ("-inf", "1/2"), ("1/2", "inf"),
                                         ("1/4", "3/4")]]
    found = search_refinement(STD, c, pool, 2)
    assert found is not None and verify_certificate(found).ok
    assert search_refinement(STD, c, pool, 1) is None
    sp = FiniteSpace.from_partition([["a", "b"], ["c"]])
    classes = [frozenset("ab"), frozenset("c")]
    whole = DeltaCovering(sp, ((sp.full(), sp.full()),))
    cert = search_refinement(sp, whole, classes, 1)
    assert cert is not None and verify_certificate(cert).ok


kinds = st.sampled_from(REAL_KINDS)


@given(kinds, regions, regions, regions, regions)
def test_finite_union_of_strong_inclusions(kind, b1, a1, b2, a2):
    sp = RealLine(kind)
    if strong_inclusion(sp, b1, a1) and strong_inclusion(sp, b2, a2):
        assert strong_inclusion(sp, b1 | b2, a1 | a2)


@given(st.integers(0, 10**6))
def test_reindex_on_random_region_assignments(seed):
    r = random_region_refinement(random.Random(seed))
    out = reindex_refinement(r)
    sp = r.refinement.space
    assert validate_covering(out).ok
    assert all(sp.is_subset(a, u) for a, u in zip(out.sets, r.targets))
    assert multiplicity(sp, out.sets) <= multiplicity(sp, r.refinement.sets)


@given(st.integers(0, 10**6))
def test_reindex_on_random_finite_assignments(seed):
    r = random_finite_refinement(random.Random(seed))
    out = reindex_refinement(r)
    sp = r.refinement.space
    assert validate_covering(out).ok
    assert multiplicity(sp, out.sets) <= multiplicity(sp, r.refinement.sets)


@given(st.permutations(range(4)), st.integers(0, 3))
def test_multiplicity_counts_duplicates_and_ignores_order(perm, dup):
    sets = [R("(-inf,1)"), R("(0,2)"), R("(1,inf)"), R("[5,6]")]
    shuffled = [sets[i] for i in perm]
    assert multiplicity(STD, shuffled) == multiplicity(STD, sets) == 2
    assert multiplicity(STD, sets + [sets[dup]]) >= multiplicity(STD, sets)


def test_covering_restricts_to_components():
    comps = [FiniteSpace.from_partition([["a", "b"]]), FiniteSpace(["c", "d"])]
    h = Coproduct(comps)
    flat = h.as_finite()
    subsets = list(flat.subsets())
    rng = random.Random(7)
    checked = 0
    for _ in range(300):
        fam = rng.sample(subsets, rng.randint(1, 3))
        pairs = tuple((a, flat.core(a)) for a in fam)
        if not validate_covering(DeltaCovering(flat, pairs)).ok:
            continue
        checked += 1
        for i, comp in enumerate(comps, 1):
            restricted = tuple((h.slice(h.from_finite_set(a), i), h.slice(h.from_finite_set(b), i))
                               for a, b in pairs)
            assert validate_covering(DeltaCovering(comp, restricted)).ok
    assert checked > 20
