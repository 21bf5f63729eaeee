import random

from hypothesis import given, settings, strategies as st

from cfguard.cfc import cf_number, solve_cfc
from cfguard.graph import (
    Graph,
    degeneracy,
    oracle_cfc,
    random_graph,
    verify_conflict_free,
)

C4 = Graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
P6 = Graph(6, [(i, i + 1) for i in range(5)])


def graphs(max_n=7):
    return st.tuples(
        st.integers(1, max_n), st.integers(0, 10), st.integers(0, 10**6)
    ).map(lambda t: random_graph(t[0], t[1] / 10, t[2]))


class TestSolve:
    def test_c4_k1_absent(self):
        assert solve_cfc(C4, 1) is None

    def test_c4_k2_witness(self):
        col = solve_cfc(C4, 2)
        assert col is not None
        assert verify_conflict_free(C4, col) is None

    def test_edgeless_all_self_colored(self):
        g = Graph(5)
        col = solve_cfc(g, 1)
        assert col.assignment == (1, 1, 1, 1, 1)

    def test_k2_pair(self):
        g = Graph(2, [(0, 1)])
        assert solve_cfc(g, 1) is not None

    def test_stats_fields(self):
        stats = {}
        solve_cfc(C4, 2, stats=stats)
        assert set(stats) == {"nodes", "states_evaluated", "width", "millis"}
        assert stats["width"] == 2

    @settings(max_examples=40, deadline=None)
    @given(graphs(), st.integers(1, 3))
    def test_matches_oracle(self, g, k):
        mine = solve_cfc(g, k)
        ref = oracle_cfc(g, k)
        assert (mine is None) == (ref is None)
        if mine is not None:
            assert verify_conflict_free(g, mine) is None
            assert max(mine.assignment) <= k

    @settings(max_examples=25, deadline=None)
    @given(graphs(6), st.integers(1, 2))
    def test_monotone_in_k(self, g, k):
        if solve_cfc(g, k) is not None:
            assert solve_cfc(g, k + 1) is not None

    @settings(max_examples=25, deadline=None)
    @given(graphs(6), st.integers(0, 10**6))
    def test_relabeling_invariance(self, g, seed):
        perm = list(range(g.n))
        random.Random(seed).shuffle(perm)
        h = Graph(g.n, [(perm[u], perm[v]) for u, v in g.edges])
        for k in (1, 2):
            assert (solve_cfc(g, k) is None) == (solve_cfc(h, k) is None)


class TestCfNumber:
    def test_singleton(self):
        k, col = cf_number(Graph(1))
        assert k == 1 and col.assignment == (1,)

    def test_c4(self):
        assert cf_number(C4)[0] == 2

    def test_p6_equals_oracle_minimum(self):
        k, col = cf_number(P6)
        ref = next(kk for kk in range(1, 7) if oracle_cfc(P6, kk) is not None)
        assert k == ref
        assert verify_conflict_free(P6, col) is None

    @settings(max_examples=30, deadline=None)
    @given(graphs())
    def test_within_degeneracy_bound(self, g):
        k, col = cf_number(g)
        assert k <= degeneracy(g)[0] + 1
        assert verify_conflict_free(g, col) is None
