import math

import pytest

from cayley_abels import asymptotics as A
from cayley_abels.errors import SpecError, ValidationError
from cayley_abels.graph import build_graph


def test_ball_sizes_closed_forms():
    assert A.ball_sizes(A.line(), 6) == [2 * n + 1 for n in range(7)]
    assert A.ball_sizes(A.grid(), 6) == [2 * n * n + 2 * n + 1 for n in range(7)]
    assert A.ball_sizes(A.regular_tree(3), 6) == [3 * 2 ** n - 2 for n in range(7)]
    assert A.ball_sizes(A.free_group(2), 4) == A.ball_sizes(A.regular_tree(4), 4)
    assert A.ball_sizes(A.free_abelian(3), 2) == [1, 7, 25]


def test_free_product_of_two_involutions_is_a_line():
    assert A.ball_sizes(A.free_product([2, 2]), 5) == A.ball_sizes(A.line(), 5)


def test_asymmetric_expansion_is_rejected():
    lazy = A.LazyGraph(lambda v: [v + 1], 0, "ray")
    with pytest.raises(ValidationError):
        A.ball_sizes(lazy, 3)


def test_growth_classes():
    grid = A.growth_class(A.ball_sizes(A.grid(), 30))
    assert grid.kind == "polynomial" and abs(grid.degree - 2.0) <= 0.2
    tree = A.growth_class(A.ball_sizes(A.regular_tree(3), 16))
    assert tree.kind == "exponential" and abs(tree.rate - math.log(2)) <= 0.1 * math.log(2)
    assert A.growth_class([5] * 12).kind == "polynomial"
    assert A.growth_class([1, 3]).kind == "inconclusive"


def test_end_classification_fixtures():
    finite = A.LazyGraph.from_graph(build_graph(range(4), [(0, 1), (1, 2), (2, 3)]), 0)
    assert A.end_classification(finite).classification == "zero"
    assert A.end_classification(A.line()).classification == "two"
    assert A.end_classification(A.grid()).classification == "one"
    t3 = A.end_classification(A.regular_tree(3))
    assert t3.classification == "cantor" and t3.r_checked == 8
    assert t3.counts == tuple(3 * 2 ** (r - 1) for r in range(1, 9))


def test_budget_limits_radius():
    rep = A.end_classification(A.regular_tree(3), r_max=8, max_vertices=2000)
    assert rep.r_checked < 8 and rep.classification == "cantor"
    tiny = A.end_classification(A.regular_tree(3), r_max=8, max_vertices=20)
    assert tiny.classification == "inconclusive"


def test_min_separators():
    assert [A.min_separator(A.line(), r) for r in range(1, 4)] == [2, 2, 2]
    assert [A.min_separator(A.regular_tree(3), r) for r in range(1, 4)] == [6, 12, 24]
    assert [A.min_separator(A.grid(), r) for r in range(1, 4)] == [12, 20, 28]


def test_from_spec():
    assert A.ball_sizes(A.from_spec({"family": "tree", "d": 3}), 2) == [1, 4, 10]
    with pytest.raises(SpecError):
        A.from_spec({"family": "tree"})
    with pytest.raises(SpecError):
        A.from_spec({"family": "moebius"})


@pytest.mark.parametrize("lazy,maxval", [(A.line(), 2), (A.grid(), 4), (A.regular_tree(3), 3),
                                         (A.free_product([2, 3]), 3)])
def test_ball_size_consistency(lazy, maxval):
    sizes = A.ball_sizes(lazy, 8)
    assert all(b <= a * (1 + maxval) for a, b in zip(sizes, sizes[1:]))


def test_growth_class_is_scale_invariant():
    for seq in (A.ball_sizes(A.grid(), 30), A.ball_sizes(A.regular_tree(3), 14), A.ball_sizes(A.line(), 20)):
        base = A.growth_class(seq)
        for c in (0.5, 3, 1000):
            assert A.growth_class([c * x for x in seq]).kind == base.kind


def test_line_separator_up_to_ten():
    assert all(A.min_separator(A.line(), r) == 2 for r in range(1, 11))


def test_four_regular_tree_within_budget():
    rep = A.end_classification(A.regular_tree(4), r_max=8)
    assert rep.classification == "cantor"
    # a radius-2r ball of the 4-regular tree passes the vertex budget after r = 5
    assert rep.r_checked == 5 and rep.counts == tuple(4 * 3 ** (r - 1) for r in range(1, 6))
