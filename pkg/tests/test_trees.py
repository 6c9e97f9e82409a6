import random

import pytest

from cayley_abels.errors import DepthExceeded, HypothesisUnmet, Inconclusive, SpecError, ValidationError
from cayley_abels.perm import Perm, PermGroup
from cayley_abels.trees import (Elliptic, Hyperbolic, Inversion, OrientedTreeModel, TreePortrait, UFModel,
                                classify_element, end_stabilizer, is_tidy_up_to, make_colored_tree,
                                oriented_path_transitivity, rigid_portrait, scale_coprime, translation,
                                validate_coloring, vertex_generator_portrait)


def local_groups(d):
    out = {"trivial": PermGroup.trivial(d), "cycle": PermGroup.cyclic(d), "sym": PermGroup.symmetric(d)}
    if d >= 3:
        out["dihedral"] = PermGroup.dihedral(d)
    return out


def test_keys_reduce():
    m = UFModel.full(3)
    assert m.walk((), [1, 2, 2, 3]) == (1, 3)
    assert m.is_key((1, 2, 1)) and not m.is_key((1, 1))
    o = OrientedTreeModel(2, 1)
    assert o.walk((), ["F1", "B1"]) == ()
    assert o.walk((), ["B1", "F2"]) == ("B1", "F2")
    assert not o.is_key(("B1", "F1"))


@pytest.mark.parametrize("d", [2, 3, 4])
def test_ball_sizes_of_regular_tree(d):
    m = UFModel.full(d)
    for r in range(5):
        expected = 1 + sum(d * (d - 1) ** (k - 1) for k in range(1, r + 1))
        assert len(m.ball_keys((), r)) == expected


@pytest.mark.parametrize("d,name", [(d, name) for d in (2, 3, 4) for name in local_groups(d)])
def test_orbit_sizes_match_generator_bfs(d, name):
    m = UFModel(local_groups(d)[name], depth=6)
    for n in range(1, 4):
        for key in m.ball_keys((), n):
            if len(key) == n:
                assert m.stabilizer_orbit_size(key) == len(m.generator_orbit(key, n - 1))


def test_oriented_orbit_sizes_match_generator_bfs():
    m = OrientedTreeModel(2, 2, depth=6)
    for key in m.ball_keys((), 3):
        if len(key) == 3:
            assert m.stabilizer_orbit_size(key) == len(m.generator_orbit(key, 2))


def test_truncated_orders_of_full_tree():
    m = UFModel.full(3, depth=8)
    orders = [m.truncated_stabilizer_order(n) for n in range(6)]
    assert orders[0] == 1
    assert orders[1:] == [6 * 2 ** (3 * (2 ** (n - 1) - 1)) for n in range(1, 6)]
    for n in range(1, 5):
        assert orders[n + 1] == orders[n] * m.ball_index(n)


def test_discrete_universal_group_has_constant_order():
    m = UFModel(PermGroup.parse(3, ["(1 2 3)"]), depth=8)
    assert [m.truncated_stabilizer_order(n) for n in range(1, 6)] == [3] * 5


def test_depth_is_enforced():
    m = UFModel.full(3, depth=4)
    with pytest.raises(DepthExceeded):
        m.ball_index(4)


def test_colored_tree():
    t = make_colored_tree(3, 3)
    assert t.graph.num_vertices == 22
    bad = dict(t.coloring)
    a, b = next(iter(t.graph.arcs()))
    bad[(a, b)] = 3 if bad[(a, b)] != 3 else 2
    with pytest.raises(ValidationError):
        validate_coloring(t.graph, bad, 3)


def test_rigid_portrait_and_local_permutations():
    m = UFModel.full(3, depth=8)
    f = Perm.parse("(1 2)", 3)
    p = rigid_portrait(m, f, 3)
    p.check()
    assert all(p.local_permutation(k) == f for k in m.ball_keys((), 2))
    with pytest.raises(DepthExceeded):
        p.local_permutation((1, 2, 1))
    assert p.in_local_group()
    assert not p.in_local_group(PermGroup.parse(3, ["(1 2 3)"]))


def test_portrait_algebra():
    m = UFModel.full(3, depth=8)
    g = translation(m, (1, 2), 1).portrait(5)
    ident = TreePortrait.identity(m, 5)
    assert (g * ident).same_on_common_domain(g)
    inv = g.inverse()
    assert inv.depth == 4
    assert (g * inv).same_on_common_domain(TreePortrait.identity(m, 3))
    g2 = translation(m, (1, 2), 2).portrait(3)
    assert (g * g).same_on_common_domain(g2)


def test_portrait_text_round_trip(tmp_path):
    m = UFModel.full(3, depth=8)
    p = vertex_generator_portrait(m, (1,), Perm.parse("(2 3)", 3), 3)
    q = TreePortrait.from_text(m, p.to_text())
    assert q.mapping == p.mapping and q.depth == 3
    with pytest.raises(SpecError):
        TreePortrait.from_text(m, "depth 1\n- -> 1\n")


def test_classification():
    m = UFModel.full(3, depth=8)
    t = translation(m, (1, 2), 1)
    c = classify_element(t.portrait(3))
    assert isinstance(c, Hyperbolic) and c.length == 1
    c2 = classify_element(translation(m, (1, 2), 2).portrait(4))
    assert isinstance(c2, Hyperbolic) and c2.length == 2
    e = classify_element(rigid_portrait(m, Perm.parse("(1 2)", 3), 2))
    assert isinstance(e, Elliptic) and e.fixed_vertex == ()
    inv = TreePortrait.from_function(m, 3, lambda k: m.walk((1,), k))
    i = classify_element(inv)
    assert isinstance(i, Inversion) and i.edge == ((), (1,))
    with pytest.raises(Inconclusive):
        classify_element(translation(m, (1, 2), 4).portrait(2))


def test_translation_needs_shift_in_local_group():
    m = UFModel(PermGroup.parse(3, ["(1 2 3)"]), depth=8)
    with pytest.raises(HypothesisUnmet):
        translation(m, (1, 2), 1)
    assert translation(m, (1, 2, 3), 1).pi == Perm.parse("(1 2 3)", 3)


@pytest.mark.parametrize("p,q", [(2, 1), (3, 1), (3, 2)])
def test_scale_on_oriented_trees(p, q):
    m = OrientedTreeModel(p, q, depth=10)
    g = translation(m, ("F1",), 1)
    res = scale_coprime(m, g, 5)
    assert res.scale == p
    assert res.tidy.verified and res.tidy.indices == tuple(p ** n for n in range(1, 6))


def test_scale_refuses_non_coprime():
    m = UFModel.full(3, depth=10)
    with pytest.raises(HypothesisUnmet):
        scale_coprime(m, translation(m, (1, 2), 1))


def test_vertex_stabilizer_of_full_tree_is_not_tidy_for_translation():
    m = UFModel.full(3, depth=10)
    res = is_tidy_up_to(m, translation(m, (1, 2), 1), 4)
    assert not res.verified and res.n == 2 and res.indices == (3, 6)


def test_small_ball_fixator_is_tidy_in_discrete_group():
    m = UFModel(PermGroup.parse(3, ["(1 2 3)"]), depth=10)
    res = is_tidy_up_to(m, translation(m, (1, 2, 3), 1), 4, radius=1)
    assert res.verified and res.indices == (1, 1, 1, 1)


def test_oriented_paths():
    rep = oriented_path_transitivity(OrientedTreeModel(2, 1, depth=6), 3)
    assert rep.transitive and rep.descendants_form_tree
    assert rep.descendants == 15
    with pytest.raises(HypothesisUnmet):
        oriented_path_transitivity(OrientedTreeModel(2, 2), 2)


def test_end_stabilizer_shape():
    m = end_stabilizer(3)
    assert (m.p, m.q) == (1, 2) and m.degree == 3


def test_local_group_portraits_closed_under_products():
    m = UFModel(PermGroup.dihedral(4), depth=8)
    rng = random.Random(2)
    gens = [(v, f) for v in m.ball_keys((), 2) for f in m.vertex_generators(v)]
    for _ in range(10):
        (v1, f1), (v2, f2) = rng.sample(gens, 2)
        a = vertex_generator_portrait(m, v1, f1, 5)
        b = vertex_generator_portrait(m, v2, f2, 5)
        assert a.in_local_group() and b.in_local_group()
        assert (a * b).in_local_group() and a.inverse().in_local_group()
    assert not rigid_portrait(m, Perm.parse("(1 2)", 4), 3).in_local_group()


def test_classification_is_conjugation_invariant():
    m = UFModel.full(3, depth=10)
    rng = random.Random(4)
    elements = [translation(m, (1, 2), 1).portrait(6), translation(m, (1, 2, 3, 2), 2).portrait(6),
                rigid_portrait(m, Perm.parse("(1 2 3)", 3), 6)]
    for g in elements:
        base = classify_element(g)
        for _ in range(5):
            v = rng.choice(m.ball_keys((), 2))
            f = rng.choice(m.vertex_generators(v))
            h = vertex_generator_portrait(m, v, f, 6)
            c = classify_element(h * g * h.inverse())
            assert c.kind == base.kind
            if base.kind == "hyperbolic":
                assert c.length == base.length
