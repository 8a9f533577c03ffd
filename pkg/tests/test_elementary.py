import itertools

import hypothesis.strategies as st
import pytest
from hypothesis import given, settings

from nestedpart.checks import local_self_maps, sample_endomorphisms
from nestedpart.elementary import bracket, decompose, recompose, recompose_top_first, t_level
from nestedpart.partition import Endomorphism, PartitionType, endo_from_local_maps


def ident(pt):
    return Endomorphism.identity(pt)


def test_bracket_identity_map_is_identity():
    pt = PartitionType((2, 3))
    for v in pt.points(1):
        assert bracket(pt, (1, 2, 3), v) == ident(pt)


def test_bracket_swap_leaf_map():
    pt = PartitionType((2, 2))
    f = bracket(pt, (2, 1), (1,))
    assert f.level_map(2) == {(1, 1): (1, 2), (1, 2): (1, 1), (2, 1): (2, 1), (2, 2): (2, 2)}


def test_bracket_errors():
    pt = PartitionType((2, 2))
    with pytest.raises(ValueError):
        bracket(pt, (1, 2, 3), (1,))
    with pytest.raises(ValueError):
        bracket(pt, (1, 2), (1, 1))
    with pytest.raises(ValueError):
        bracket(pt, (1, 2), (3,))


@pytest.mark.parametrize("levels", [(2, 2), (2, 3, 2)])
def test_bracket_trivial_below_anchor(levels):
    pt = PartitionType(levels)
    for j in range(1, pt.depth + 1):
        for v in pt.points(j - 1):
            for g in local_self_maps(pt.n(j)):
                f = bracket(pt, g, v)
                for s in range(j):
                    assert f.level_indices(s) == list(range(pt.sizes[s]))


def test_t_level_identity():
    pt = PartitionType((2, 2))
    assert all(t_level(ident(pt), j) == ident(pt) for j in (1, 2))
    with pytest.raises(ValueError):
        t_level(ident(pt), 3)


def test_t_level_example():
    pt = PartitionType((2, 2))
    f = endo_from_local_maps(pt, {(): (2, 2), (1,): (1, 2), (2,): (2, 1)})
    t2 = t_level(f, 2)
    assert t2.local(()) == (1, 2)
    assert t2.local((1,)) == (1, 2) and t2.local((2,)) == (2, 1)
    t1 = t_level(f, 1)
    assert t1.local(()) == (2, 2) and t1.local((2,)) == (1, 2)


def test_t_level_is_product_of_brackets_in_any_order(p22):
    pt = p22[0].ptype
    for f in p22:
        for j in (1, 2):
            factors = [bracket(pt, f.local(v), v) for v in pt.points(j - 1)]
            for order in itertools.permutations(factors):
                prod = ident(pt)
                for b in order:
                    prod = prod * b
                assert prod == t_level(f, j)


def test_t_level_trivial_below(p22):
    for f in p22:
        for j in (1, 2):
            t = t_level(f, j)
            assert all(t.level_indices(s) == list(range(t.ptype.sizes[s])) for s in range(j))


def test_decompose_identity():
    pt = PartitionType((3, 2, 2))
    assert decompose(ident(pt)) == [ident(pt)] * 3


def test_decompose_recovers_every_element(p22):
    for f in p22:
        factors = decompose(f)
        assert recompose(factors) == f
        # oracle: leaf maps, t_k applied first
        leaf = list(range(4))
        for t in reversed(factors):
            tl = t.leaf_indices()
            leaf = [tl[x] for x in leaf]
        assert leaf == f.leaf_indices()


def test_top_first_order_is_not_a_factorisation(p22):
    pt = p22[0].ptype
    f = endo_from_local_maps(pt, {(): (2, 1), (1,): (1, 1), (2,): (1, 2)})
    t1, t2 = decompose(f)
    assert (t2 * t1)((1, 2)) == (2, 2)
    assert f((1, 2)) == (2, 1)
    assert recompose_top_first([t1, t2]) != f
    assert sum(recompose_top_first(decompose(g)) == g for g in p22) == 28


def test_decompose_random_33():
    for f in sample_endomorphisms(PartitionType((3, 3)), 1000, seed=1):
        assert recompose(decompose(f)) == f


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([(2, 2, 2), (3, 2, 2), (2, 4)]), st.integers(0, 2**32))
def test_decompose_property(levels, seed):
    (f,) = sample_endomorphisms(PartitionType(levels), 1, seed=seed)
    assert recompose(decompose(f)) == f


def test_decompose_bracket_single_factor():
    pt = PartitionType((2, 3))
    f = bracket(pt, (3, 1, 1), (2,))
    factors = decompose(f)
    assert [t == ident(pt) for t in factors] == [True, False]


@pytest.mark.parametrize("levels", [(2,), (3,), (2, 2), (3, 3)])
def test_same_anchor_product(levels):
    pt = PartitionType(levels)
    for j in range(1, pt.depth + 1):
        maps = local_self_maps(pt.n(j))
        for v in pt.points(j - 1):
            for g1, g2 in itertools.product(maps, repeat=2):
                g12 = tuple(g1[x - 1] for x in g2)  # g1 after g2
                assert bracket(pt, g1, v) * bracket(pt, g2, v) == bracket(pt, g12, v)


@pytest.mark.parametrize("levels", [(2, 2), (3, 3)])
def test_distinct_anchors_commute(levels):
    pt = PartitionType(levels)
    for j in range(1, pt.depth + 1):
        maps = local_self_maps(pt.n(j))
        for v1, v2 in itertools.permutations(pt.points(j - 1), 2):
            for g, h in itertools.product(maps, repeat=2):
                a, b = bracket(pt, g, v1), bracket(pt, h, v2)
                assert a * b == b * a
