import pytest

from nestedpart.checks import local_self_maps, sample_endomorphisms
from nestedpart.elementary import bracket
from nestedpart.partition import Endomorphism, PartitionType, endo_from_local_maps
from nestedpart.predicates import (
    UnsupportedConstruction,
    check_primitive,
    conjugator_h,
    pred_level,
    predicate,
    step_witness,
    stratum,
)


def test_pred_identity():
    pt = PartitionType((2, 3, 2))
    assert all(pred_level(Endomorphism.identity(pt), j) for j in (1, 2, 3))
    with pytest.raises(ValueError):
        pred_level(Endomorphism.identity(pt), 0)


def test_constant_top_fails_every_level():
    pt = PartitionType((2, 2))
    f = endo_from_local_maps(pt, {(): (2, 2), (1,): (1, 2), (2,): (2, 1)})
    assert not pred_level(f, 1) and not pred_level(f, 2)
    assert stratum(f) == 0


def test_stratum_examples():
    pt = PartitionType((2, 2))
    assert stratum(Endomorphism.identity(pt)) == 2
    f = endo_from_local_maps(pt, {(): (2, 1), (1,): (1, 1), (2,): (1, 2)})
    assert stratum(f) == 1


@pytest.mark.parametrize("levels", [(1,), (2,), (1, 2), (2, 2)])
@pytest.mark.parametrize("which", ["1", "2", "12"])
def test_primitive_exhaustive(levels, which):
    pt = PartitionType(levels)
    js = tuple(int(c) for c in which if int(c) <= pt.depth)
    if not js:
        pytest.skip("level not present")
    from nestedpart.partition import enumerate_endomorphisms

    assert check_primitive(js, enumerate_endomorphisms(pt)) is None


def test_check_primitive_finds_counterexample(p22):
    # "level 2 map is non-invertible" is not primitive
    bad = check_primitive(lambda f: not pred_level(f, 2), p22)
    assert bad is not None
    a, b = bad
    assert (not pred_level(a * b, 2)) != ((not pred_level(a, 2)) and (not pred_level(b, 2)))


def test_multiplicativity_and_chain(p22):
    for f in p22:
        for g in p22:
            for j in (1, 2):
                assert pred_level(f * g, j) == (pred_level(f, j) and pred_level(g, j))
        assert not pred_level(f, 2) or pred_level(f, 1)


def test_chain_random_33():
    for f in sample_endomorphisms(PartitionType((3, 3)), 2000, seed=3):
        assert not pred_level(f, 2) or pred_level(f, 1)
        s = stratum(f)
        assert all(pred_level(f, j) == (j <= s) for j in (1, 2))


def test_subsemigroups_closed(p22):
    for js in [(1,), (2,), (1, 2)]:
        p = predicate(js)
        sub = [f for f in p22 if p(f)]
        assert all(p(a * b) for a in sub for b in sub)


@pytest.mark.parametrize("levels", [(2, 2), (3, 3)])
def test_bracket_in_group_iff_invertible(levels):
    pt = PartitionType(levels)
    for j in range(1, pt.depth + 1):
        for v in pt.points(j - 1):
            for g in local_self_maps(pt.n(j)):
                f = bracket(pt, g, v)
                invertible = len(set(g)) == len(g)
                assert pred_level(f, j) == invertible
                assert (stratum(f) == pt.depth) == invertible


def test_step_witness_22():
    pt = PartitionType((2, 2))
    w = step_witness(pt, 1)
    assert w.local(()) == (2, 2)
    assert w.local((1,)) == (1, 2) and w.local((2,)) == (1, 2)
    assert [stratum(step_witness(pt, j)) for j in (1, 2)] == [0, 1]


def test_step_witness_33_leaf_map():
    pt = PartitionType((3, 3))
    w = step_witness(pt, 2)
    moved = {p: q for p, q in w.level_map(2).items() if p != q}
    assert moved == {(1, 1): (1, 2)}
    assert stratum(w) == 1


def test_step_witness_needs_two():
    with pytest.raises(UnsupportedConstruction) as e:
        step_witness(PartitionType((2, 1)), 2)
    assert e.value.level == 2


def test_conjugator_trivial_anchor():
    pt = PartitionType((3, 3))
    assert conjugator_h(pt, 2, (1,)) == Endomorphism.identity(pt)
    assert conjugator_h(pt, 1, ()) == Endomorphism.identity(pt)


def test_conjugator_swaps_blocks():
    pt = PartitionType((2, 2))
    h = conjugator_h(pt, 2, (2,))
    assert h.level_map(2) == {(1, 1): (2, 1), (1, 2): (2, 2), (2, 1): (1, 1), (2, 2): (1, 2)}
    assert h * h == Endomorphism.identity(pt)


@pytest.mark.parametrize("levels", [(2, 2), (3, 3), (2, 2, 2), (3, 2, 2), (2, 3, 3)])
def test_conjugation_identity(levels):
    pt = PartitionType(levels)
    ident = Endomorphism.identity(pt)
    for j in range(1, pt.depth + 1):
        tau_u = step_witness(pt, j)
        tau = tau_u.local((1,) * (j - 1))
        for v in pt.points(j - 1):
            h = conjugator_h(pt, j, v)
            assert h * h == ident
            assert h * tau_u * h == bracket(pt, tau, v)


def test_conjugator_level_mismatch():
    with pytest.raises(ValueError):
        conjugator_h(PartitionType((2, 2)), 2, (1, 1))
