import random
from fractions import Fraction

import pytest

from cayley_abels.camodel import FinitePermModel, build_ca_construction1
from cayley_abels.errors import Inconclusive, ValidationError
from cayley_abels.localdata import (RationalSubgroup, extract_local_data, local_prime_content_bound,
                                    local_prime_content_exact, min_valency_bound, modular_along_path,
                                    modular_image, orbit_ratio, prime_factors, random_key_pairs)
from cayley_abels.perm import Perm, PermGroup
from cayley_abels.trees import OrientedTreeModel, UFModel, end_stabilizer


def test_end_stabilizer_local_data():
    ld = extract_local_data(end_stabilizer(3, depth=8))
    assert [(o.m_out, o.m_in) for o in ld.orbits] == [(1, 2), (2, 1)]
    assert ld.d_values() == [Fraction(1, 2), Fraction(2)]
    assert ld.valency == 3 and not ld.unimodular
    image = modular_image(ld)
    assert image.generator() == 2
    assert min_valency_bound(image) == 3


def test_full_tree_is_unimodular():
    ld = extract_local_data(UFModel.full(3, depth=8))
    assert ld.unimodular
    assert modular_image(ld).is_trivial and min_valency_bound(modular_image(ld)) is None


@pytest.mark.parametrize("p,q", [(2, 1), (3, 1), (3, 2), (2, 3)])
def test_oriented_bound_is_p_plus_q(p, q):
    image = modular_image(extract_local_data(OrientedTreeModel(p, q, depth=6)))
    assert image.generator() == Fraction(max(p, q), min(p, q))
    assert min_valency_bound(image) == p + q


def test_biregular_bound_formula():
    # an end stabilizer of the (d, d')-biregular tree reduces to orbit sizes d-1 and d'-1
    d, dd = 3, 2
    image = RationalSubgroup.generated_by([Fraction((d - 1) * (dd - 1))])
    assert min_valency_bound(image) == (d - 1) * (dd - 1) + 1


def test_finite_models_are_unimodular():
    m = FinitePermModel(PermGroup.dihedral(8), 0)
    g = build_ca_construction1(m, [Perm.parse("(1 2 3 4 5 6 7 8)", 8)])
    ld = extract_local_data((m, g))
    assert ld.unimodular
    assert modular_along_path((m, g), [1, 2, 3, 4]) == 1


def test_path_validation():
    m = end_stabilizer(3, depth=8)
    with pytest.raises(ValidationError):
        modular_along_path(m, [(), ("F1",), ()])
    assert modular_along_path(m, [(), ("F1",), ()], allow_walk=True) == 1


@pytest.mark.parametrize("model", [end_stabilizer(3, depth=12), OrientedTreeModel(2, 1, depth=12)])
def test_path_product_matches_index_ratio_and_walks(model):
    rng = random.Random(7)
    for u, v in random_key_pairs(model, 5, 40, seed=3):
        value = modular_along_path(model, model.geodesic(u, v))
        assert value == orbit_ratio(model, u, v)
        # detour through a random vertex: a walk u -> w -> v gives the same product
        w = rng.choice(model.ball_keys((), 5))
        walk = model.geodesic(u, w) + model.geodesic(w, v)[1:]
        assert modular_along_path(model, walk, allow_walk=True) == value


def test_end_stabilizer_moving_away_from_end():
    m = end_stabilizer(3, depth=8)
    assert modular_along_path(m, [(), ("B1",), ("B1", "B2")]) == 4


def test_rational_subgroups():
    assert prime_factors(360) == {2: 3, 3: 2, 5: 1}
    h = RationalSubgroup.generated_by([Fraction(4), Fraction(1, 8)])
    assert h.is_cyclic and h.generator() == 2
    assert RationalSubgroup.generated_by([Fraction(9, 4), Fraction(2, 3)]).generator() == Fraction(3, 2)
    nc = RationalSubgroup.generated_by([2, 3])
    assert not nc.is_cyclic and nc.generator() is None and min_valency_bound(nc) is None
    with pytest.raises(ValidationError):
        RationalSubgroup.generated_by([0])


def test_prime_content_bounds():
    assert local_prime_content_bound(PermGroup.symmetric(5)) == [2, 3]
    assert local_prime_content_bound(PermGroup.cyclic(3)) == []
    assert local_prime_content_bound(PermGroup.symmetric(3)) == [2]


def test_prime_content_exact():
    full = local_prime_content_exact(UFModel.full(3, depth=10), 8)
    assert full.primes == (2,)
    disc = local_prime_content_exact(UFModel(PermGroup.parse(3, ["(1 2 3)"]), depth=10), 8)
    assert disc.primes == ()
    sym4 = UFModel.full(4, depth=8)
    assert set(local_prime_content_exact(sym4, 6).primes) <= set(local_prime_content_bound(sym4.local_group))


def test_prime_content_needs_depth():
    with pytest.raises(Inconclusive):
        local_prime_content_exact(UFModel.full(3, depth=10), 2)


def test_simple_paths_in_finite_models_agree():
    import networkx as nx
    from conftest import invariant_graphs, small_transitive_groups
    for G in small_transitive_groups(max_order=12, max_degree=6, trials=5):
        m = FinitePermModel(G, 0)
        for g in invariant_graphs(m):
            nxg = nx.Graph(list(g.edges()))
            for u in g.vertices:
                for v in g.vertices:
                    values = {modular_along_path((m, g), p) for p in nx.all_simple_paths(nxg, u, v, cutoff=6)}
                    assert len(values) <= 1


@pytest.mark.parametrize("model", [end_stabilizer(3, depth=12), OrientedTreeModel(3, 2, depth=12)])
def test_products_are_multiplicative_and_reversal_inverts(model):
    ld = extract_local_data(model)
    for o in ld.orbits:
        assert o.d_value * ld.orbits[o.reverse].d_value == 1
    for u, v in random_key_pairs(model, 4, 20, seed=1):
        w = model.walk(v, ["F1"])
        first = modular_along_path(model, model.geodesic(u, v))
        second = modular_along_path(model, model.geodesic(v, w))
        whole = model.geodesic(u, v) + model.geodesic(v, w)[1:]
        assert modular_along_path(model, whole, allow_walk=True) == first * second


@pytest.mark.parametrize("d", [2, 3, 4])
def test_full_tree_d_values(d):
    ld = extract_local_data(UFModel.full(d, depth=6))
    assert ld.d_values() == [1] and ld.unimodular and modular_image(ld).is_trivial


@pytest.mark.parametrize("model", [UFModel.full(3, 8), UFModel(PermGroup.parse(3, ["(1 2 3)"]), 8),
                                   OrientedTreeModel(2, 1, 8), OrientedTreeModel(2, 2, 8)])
def test_unimodular_iff_trivial_image(model):
    ld = extract_local_data(model)
    assert ld.unimodular == all(v == 1 for v in ld.d_values()) == modular_image(ld).is_trivial


@pytest.mark.parametrize("model", [UFModel.full(3, 10), UFModel(PermGroup.dihedral(4), 10),
                                   OrientedTreeModel(2, 1, 10)])
def test_exact_prime_content_within_bound(model):
    exact = local_prime_content_exact(model, 8)
    assert set(exact.primes) <= set(local_prime_content_bound(model.local_group))
