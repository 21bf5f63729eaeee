"""Dynamic program for k-strong-conflict-free coloring over a nice tree decomposition.

Each bag vertex carries (c, S): its color c (0 = uncolored) and the set S of
colors realized so far in its closed neighborhood.  Strong conflict-freeness
means S never receives the same color twice (edge introductions fail on a
duplicate) and S is nonempty when the vertex is forgotten.  "Future
domination" needs no explicit bookkeeping: a color absent from S so far is
simply a color that may still arrive, so tracking a separate promise marker
per color would only multiply the table by a factor of up to 2^k per bag
vertex without distinguishing any realizable coloring.

Tables are sparse (only true states are stored) and a whole bag state is
packed into a single integer, one (c, S) field pair per sorted-bag position.
"""

from __future__ import annotations

import time
from typing import Optional

from .decomposition import (
    FORGET,
    INTRODUCE,
    INTRODUCE_EDGE,
    JOIN,
    LEAF,
    NiceTreeDecomposition,
    make_nice,
    min_fill_decomposition,
)
from .graph import Coloring, Graph


class _Codec:
    """Bit layout of one bag position: c | S (one bit per color)."""

    def __init__(self, k: int):
        self.k = k
        self.cbits = max(k.bit_length(), 1)
        self.vbits = self.cbits + k
        self.cmask = (1 << self.cbits) - 1
        self.smask = ((1 << k) - 1) << self.cbits
        self.vmask = (1 << self.vbits) - 1

    def code(self, c: int, sset: int) -> int:
        return c | sset << self.cbits

    def sbit(self, color: int) -> int:
        return 1 << (self.cbits + color - 1)


def _intro_codes(cd: _Codec) -> tuple[int, ...]:
    """States of a freshly introduced (isolated) vertex: uncolored, or self-dominating."""
    codes = [0]
    for c in range(1, cd.k + 1):
        codes.append(c | cd.sbit(c))
    return tuple(codes)


class ScfcSolver:
    def __init__(self, g: Graph, k: int, ntd: Optional[NiceTreeDecomposition] = None):
        if k < 1:
            raise ValueError("k must be positive")
        self.g = g
        self.k = k
        self.ntd = ntd if ntd is not None else make_nice(g, min_fill_decomposition(g))
        self.cd = _Codec(k)
        self.tables: dict[int, set[int]] = {}
        self.states_evaluated = 0

    def run(self) -> bool:
        for i in self.ntd.postorder():
            nd = self.ntd.nodes[i]
            if nd.kind == LEAF:
                table = {0}
            elif nd.kind == INTRODUCE:
                table = self._introduce(nd)
            elif nd.kind == FORGET:
                table = self._forget(nd)
            elif nd.kind == INTRODUCE_EDGE:
                table = self._introduce_edge(nd)
            else:
                table = self._join(nd)
            self.tables[i] = table
            self.states_evaluated += len(table)
        return 0 in self.tables[self.ntd.root]

    def _introduce(self, nd) -> set[int]:
        child = self.tables[nd.children[0]]
        vb = self.cd.vbits
        pos = nd.bag.index(nd.vertex)
        lowmask = (1 << pos * vb) - 1
        shifted = [code << pos * vb for code in _intro_codes(self.cd)]
        out = set()
        add = out.add
        for s in child:
            base = ((s >> pos * vb) << (pos + 1) * vb) | (s & lowmask)
            for sc in shifted:
                add(base | sc)
        return out

    def _forget(self, nd) -> set[int]:
        child = self.tables[nd.children[0]]
        cd = self.cd
        vb = cd.vbits
        pos = self.ntd.nodes[nd.children[0]].bag.index(nd.vertex)
        shift = pos * vb
        smask = cd.smask << shift
        lowmask = (1 << shift) - 1
        out = set()
        add = out.add
        for s in child:
            if s & smask:  # forgotten vertex must be dominated
                add(((s >> (pos + 1) * vb) << shift) | (s & lowmask))
        return out

    def _introduce_edge(self, nd) -> set[int]:
        """Image of the child table: each endpoint's color joins the other's
        neighborhood set, and a duplicate color kills the state."""
        child = self.tables[nd.children[0]]
        cd = self.cd
        vb = cd.vbits
        u, v = nd.edge
        pu, pv = nd.bag.index(u), nd.bag.index(v)
        ushift, vshift = pu * vb, pv * vb
        cmask = cd.cmask
        out = set()
        add = out.add
        for s in child:
            cu = (s >> ushift) & cmask
            cv = (s >> vshift) & cmask
            t = s
            if cu:
                bit = cd.sbit(cu) << vshift
                if t & bit:
                    continue
                t |= bit
            if cv:
                bit = cd.sbit(cv) << ushift
                if t & bit:
                    continue
                t |= bit
            add(t)
        return out

    def _join(self, nd) -> set[int]:
        t1 = self.tables[nd.children[0]]
        t2 = self.tables[nd.children[1]]
        cd = self.cd
        vb = cd.vbits
        nbag = len(nd.bag)
        keymask = allsmask = 0
        for pos in range(nbag):
            keymask |= cd.cmask << pos * vb
            allsmask |= cd.smask << pos * vb
        groups: dict[int, list[int]] = {}
        for s in t2:
            groups.setdefault(s & keymask, []).append(s)
        out = set()
        add = out.add
        for s1 in t1:
            key = s1 & keymask
            bucket = groups.get(key)
            if not bucket:
                continue
            # only the vertex's own color may be realized in both branches
            selfmask = 0
            for pos in range(nbag):
                c = (key >> pos * vb) & cd.cmask
                if c:
                    selfmask |= cd.sbit(c) << pos * vb
            for s2 in bucket:
                if s1 & s2 & allsmask == selfmask:
                    add(s1 | s2)
        return out

    # -- witness extraction -------------------------------------------------

    def extract(self) -> Coloring:
        col = [0] * self.g.n
        stack = [(self.ntd.root, 0)]
        while stack:
            node, state = stack.pop()
            nd = self.ntd.nodes[node]
            if nd.kind == LEAF:
                continue
            if nd.kind == INTRODUCE:
                vb = self.cd.vbits
                pos = nd.bag.index(nd.vertex)
                lowmask = (1 << pos * vb) - 1
                child_state = ((state >> (pos + 1) * vb) << pos * vb) | (state & lowmask)
                stack.append((nd.children[0], child_state))
            elif nd.kind == FORGET:
                stack.append(self._extract_forget(nd, state, col))
            elif nd.kind == INTRODUCE_EDGE:
                stack.append((nd.children[0], self._extract_edge(nd, state)))
            else:
                s1, s2 = self._extract_join(nd, state)
                stack.append((nd.children[0], s1))
                stack.append((nd.children[1], s2))
        return Coloring(self.k, col)

    def _extract_forget(self, nd, state, col):
        cd = self.cd
        vb = cd.vbits
        child = nd.children[0]
        pos = self.ntd.nodes[child].bag.index(nd.vertex)
        lowmask = (1 << pos * vb) - 1
        base = ((state >> pos * vb) << (pos + 1) * vb) | (state & lowmask)
        table = self.tables[child]
        for c in range(cd.k + 1):
            for sset in range(1, 1 << cd.k):
                if c and not sset >> (c - 1) & 1:
                    continue
                s = base | cd.code(c, sset) << pos * vb
                if s in table:
                    col[nd.vertex] = c
                    return child, s
        raise AssertionError("true forget entry without a producing child state")

    def _extract_edge(self, nd, state):
        cd = self.cd
        vb = cd.vbits
        table = self.tables[nd.children[0]]
        u, v = nd.edge
        pu, pv = nd.bag.index(u), nd.bag.index(v)
        cu = (state >> pu * vb) & cd.cmask
        cv = (state >> pv * vb) & cd.cmask
        s = state
        if cu:
            s &= ~(cd.sbit(cu) << pv * vb)
        if cv:
            s &= ~(cd.sbit(cv) << pu * vb)
        if s not in table:
            raise AssertionError("true edge entry without a producing child state")
        return s

    def _extract_join(self, nd, state):
        cd = self.cd
        vb = cd.vbits
        t1 = self.tables[nd.children[0]]
        t2 = self.tables[nd.children[1]]
        nbag = len(nd.bag)
        keymask = allsmask = 0
        for pos in range(nbag):
            keymask |= cd.cmask << pos * vb
            allsmask |= cd.smask << pos * vb
        key = state & keymask
        selfmask = 0
        for pos in range(nbag):
            c = (key >> pos * vb) & cd.cmask
            if c:
                selfmask |= cd.sbit(c) << pos * vb
        for s1 in t1:
            if s1 & keymask != key:
                continue
            if s1 & allsmask & ~state:
                continue  # left branch realizes a color the parent never saw
            s2 = key | (state & ~s1 & allsmask) | selfmask
            if s2 in t2:
                return s1, s2
        raise AssertionError("true join entry without consistent child states")


def solve_scfc(
    g: Graph,
    k: int,
    ntd: Optional[NiceTreeDecomposition] = None,
    stats: Optional[dict] = None,
) -> Optional[Coloring]:
    """Decide and construct a strong conflict-free coloring with at most k colors."""
    start = time.perf_counter()
    solver = ScfcSolver(g, k, ntd)
    feasible = solver.run()
    result = solver.extract() if feasible else None
    if stats is not None:
        stats.update(
            nodes=len(solver.ntd.nodes),
            states_evaluated=solver.states_evaluated,
            width=solver.ntd.width,
            millis=round((time.perf_counter() - start) * 1000, 3),
        )
    return result


def scf_number(g: Graph, stats: Optional[dict] = None) -> tuple[int, Coloring]:
    """Smallest k admitting a strong conflict-free coloring, with a witness.

    Searches k = 1, 2, ...; degeneracy+1 colors have sufficed on every graph
    tested, but since that bound is only empirical the search continues up to
    n, where a rainbow coloring (all vertices distinct) always succeeds.
    """
    ntd = make_nice(g, min_fill_decomposition(g))
    for k in range(1, max(g.n, 1) + 1):
        col = solve_scfc(g, k, ntd=ntd, stats=stats)
        if col is not None:
            return k, col
    raise AssertionError("rainbow coloring unexpectedly rejected")
