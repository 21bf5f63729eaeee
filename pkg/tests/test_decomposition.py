import pytest
from hypothesis import given, settings, strategies as st

from cfguard.decomposition import (
    FORGET,
    INTRODUCE,
    LEAF,
    TreeDecomposition,
    dump_nice,
    exact_treewidth,
    make_nice,
    min_fill_decomposition,
    validate,
    validate_nice,
)
from cfguard.errors import InstanceTooLargeError
from cfguard.graph import Graph, random_graph


def graphs(max_n=9):
    return st.tuples(
        st.integers(1, max_n), st.integers(0, 10), st.integers(0, 10**6)
    ).map(lambda t: random_graph(t[0], t[1] / 10, t[2]))


class TestMinFill:
    @settings(max_examples=60, deadline=None)
    @given(graphs())
    def test_decomposition_is_valid(self, g):
        td = min_fill_decomposition(g)
        assert validate(g, td) is None

    def test_tree_width_one(self):
        g = Graph(5, [(0, 1), (1, 2), (1, 3), (3, 4)])
        assert min_fill_decomposition(g).width == 1

    def test_cycle_width_two(self):
        g = Graph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)])
        assert min_fill_decomposition(g).width == 2

    def test_empty_graph(self):
        td = min_fill_decomposition(Graph(0))
        assert validate(Graph(0), td) is None


class TestValidate:
    def test_detects_missing_vertex(self):
        td = TreeDecomposition(((0,),), frozenset())
        assert validate(Graph(2), td) == ("vertex-coverage", 1)

    def test_detects_missing_edge(self):
        td = TreeDecomposition(((0,), (1,)), frozenset({(0, 1)}))
        assert validate(Graph(2, [(0, 1)]), td) == ("edge-coverage", (0, 1))

    def test_detects_broken_connectivity(self):
        td = TreeDecomposition(((0, 1), (1,), (0,)), frozenset({(0, 1), (1, 2)}))
        g = Graph(2, [(0, 1)])
        assert validate(g, td) == ("connectivity", 0)


class TestMakeNice:
    def test_single_vertex_shape(self):
        ntd = make_nice(Graph(1), min_fill_decomposition(Graph(1)))
        kinds = [ntd.nodes[i].kind for i in ntd.postorder()]
        assert kinds == [LEAF, INTRODUCE, FORGET]
        assert ntd.nodes[ntd.root].bag == ()

    @settings(max_examples=60, deadline=None)
    @given(graphs())
    def test_nice_invariants(self, g):
        ntd = make_nice(g, min_fill_decomposition(g))
        assert validate_nice(g, ntd) is None

    @settings(max_examples=30, deadline=None)
    @given(graphs())
    def test_width_preserved(self, g):
        td = min_fill_decomposition(g)
        assert make_nice(g, td).width == td.width

    def test_rejects_invalid_input(self):
        with pytest.raises(ValueError):
            make_nice(Graph(2, [(0, 1)]), TreeDecomposition(((0,), (1,)), frozenset({(0, 1)})))

    def test_dump_round_shape(self):
        g = Graph(2, [(0, 1)])
        text = dump_nice(make_nice(g, min_fill_decomposition(g)))
        lines = text.strip().splitlines()
        assert all(line.startswith("node ") for line in lines)
        assert sum(" introduce_edge " in line for line in lines) == 1


class TestExactTreewidth:
    def test_known_values(self):
        assert exact_treewidth(Graph(1)) == 0
        assert exact_treewidth(Graph(4, [(0, 1), (1, 2), (2, 3)])) == 1
        assert exact_treewidth(Graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])) == 2
        k4 = Graph(4, [(u, v) for u in range(4) for v in range(u + 1, 4)])
        assert exact_treewidth(k4) == 3

    def test_size_guard(self):
        with pytest.raises(InstanceTooLargeError):
            exact_treewidth(Graph(16))

    @settings(max_examples=30, deadline=None)
    @given(graphs(8))
    def test_min_fill_upper_bounds_exact(self, g):
        assert min_fill_decomposition(g).width >= exact_treewidth(g)
