"""Tree decompositions: min-fill heuristic, nicification, validation, exact treewidth.

The nicification places every introduce-edge node immediately below the
(unique) forget of the edge's first-forgotten endpoint.  With that rule, no
edge with both endpoints inside a join bag is ever introduced below the join,
so join bags induce independent sets in the partial graphs -- the property
both coloring recurrences rely on.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import InstanceTooLargeError
from .graph import Graph

LEAF = "leaf"
INTRODUCE = "introduce"
INTRODUCE_EDGE = "introduce_edge"
FORGET = "forget"
JOIN = "join"


@dataclass(frozen=True)
class TreeDecomposition:
    """Unrooted tree decomposition: per-node bags plus tree adjacency."""

    bags: tuple[tuple[int, ...], ...]
    tree_edges: frozenset[tuple[int, int]]

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=1) - 1

    def neighbors(self, i: int) -> list[int]:
        out = []
        for a, b in self.tree_edges:
            if a == i:
                out.append(b)
            elif b == i:
                out.append(a)
        return sorted(out)


@dataclass
class NiceNode:
    kind: str
    bag: tuple[int, ...]
    children: list[int] = field(default_factory=list)
    vertex: Optional[int] = None  # introduce / forget payload
    edge: Optional[tuple[int, int]] = None  # introduce_edge payload


@dataclass
class NiceTreeDecomposition:
    """Rooted nice tree decomposition; ``nodes[root]`` has an empty bag."""

    nodes: list[NiceNode]
    root: int

    @property
    def width(self) -> int:
        return max((len(nd.bag) for nd in self.nodes), default=1) - 1

    def postorder(self) -> list[int]:
        order = []
        stack = [(self.root, False)]
        while stack:
            node, done = stack.pop()
            if done:
                order.append(node)
            else:
                stack.append((node, True))
                for ch in self.nodes[node].children:
                    stack.append((ch, False))
        return order


def min_fill_order(g: Graph) -> list[int]:
    """Elimination order greedily minimizing fill edges (ties: degree, then id)."""
    adj = {v: set(g.adj[v]) for v in range(g.n)}
    order = []
    while adj:
        best = None
        best_key = None
        for v, ns in adj.items():
            nl = list(ns)
            fill = 0
            for i in range(len(nl)):
                for j in range(i + 1, len(nl)):
                    if nl[j] not in adj[nl[i]]:
                        fill += 1
            key = (fill, len(ns), v)
            if best_key is None or key < best_key:
                best, best_key = v, key
        order.append(best)
        ns = adj.pop(best)
        for a in ns:
            adj[a].discard(best)
        nl = list(ns)
        for i in range(len(nl)):
            for j in range(i + 1, len(nl)):
                adj[nl[i]].add(nl[j])
                adj[nl[j]].add(nl[i])
    return order


def min_fill_decomposition(g: Graph) -> TreeDecomposition:
    """Tree decomposition from a min-fill elimination ordering (clique-tree style)."""
    if g.n == 0:
        return TreeDecomposition(((),), frozenset())
    order = min_fill_order(g)
    pos = {v: i for i, v in enumerate(order)}
    adj = {v: set(g.adj[v]) for v in range(g.n)}
    bags = []
    higher = []  # for each node, the elimination index its bag hangs below
    for v in order:
        ns = adj.pop(v)
        bags.append(tuple(sorted({v, *ns})))
        higher.append(min((pos[u] for u in ns), default=None))
        nl = list(ns)
        for a in ns:
            adj[a].discard(v)
        for i in range(len(nl)):
            for j in range(i + 1, len(nl)):
                adj[nl[i]].add(nl[j])
                adj[nl[j]].add(nl[i])
    tree_edges = set()
    for i, h in enumerate(higher):
        if h is not None:
            tree_edges.add((min(i, h), max(i, h)))
        elif i + 1 < len(bags):
            tree_edges.add((i, i + 1))
    return TreeDecomposition(tuple(bags), frozenset(tree_edges))


def validate(g: Graph, td: TreeDecomposition) -> Optional[tuple[str, object]]:
    """Check the three decomposition axioms; None if ok, else (axiom, witness)."""
    covered = set()
    for bag in td.bags:
        covered.update(bag)
    for v in range(g.n):
        if v not in covered:
            return ("vertex-coverage", v)
    for u, v in sorted(g.edges):
        if not any(u in bag and v in bag for bag in td.bags):
            return ("edge-coverage", (u, v))
    # connectivity: nodes containing v must induce a connected subtree
    nbrs: dict[int, list[int]] = {i: [] for i in range(len(td.bags))}
    for a, b in td.tree_edges:
        nbrs[a].append(b)
        nbrs[b].append(a)
    for v in range(g.n):
        holders = [i for i, bag in enumerate(td.bags) if v in bag]
        seen = {holders[0]}
        stack = [holders[0]]
        holder_set = set(holders)
        while stack:
            i = stack.pop()
            for j in nbrs[i]:
                if j in holder_set and j not in seen:
                    seen.add(j)
                    stack.append(j)
        if seen != holder_set:
            return ("connectivity", v)
    return None


class _NiceBuilder:
    def __init__(self, g: Graph):
        self.g = g
        self.nodes: list[NiceNode] = []
        self.introduced: set[tuple[int, int]] = set()

    def add(self, node: NiceNode) -> int:
        self.nodes.append(node)
        return len(self.nodes) - 1

    def intro_chain(self, below: Optional[int], below_bag: tuple[int, ...], target: set[int]) -> tuple[int, tuple[int, ...]]:
        """Introduce the vertices of target missing from below_bag, in sorted order."""
        cur, bag = below, set(below_bag)
        for v in sorted(target - bag):
            bag.add(v)
            nb = tuple(sorted(bag))
            cur = self.add(NiceNode(INTRODUCE, nb, [cur] if cur is not None else [], vertex=v))
        return cur, tuple(sorted(bag))

    def forget_chain(self, below: int, below_bag: tuple[int, ...], target: set[int]) -> tuple[int, tuple[int, ...]]:
        """Forget the vertices of below_bag missing from target, edges introduced first."""
        cur, bag = below, set(below_bag)
        for v in sorted(bag - target):
            for u in self.g.adj[v]:
                e = (min(u, v), max(u, v))
                if u in bag and e not in self.introduced:
                    self.introduced.add(e)
                    cur = self.add(NiceNode(INTRODUCE_EDGE, tuple(sorted(bag)), [cur], edge=e))
            bag.discard(v)
            cur = self.add(NiceNode(FORGET, tuple(sorted(bag)), [cur], vertex=v))
        return cur, tuple(sorted(bag))

    def build(self, td: TreeDecomposition, node: int, parent: Optional[int]) -> tuple[int, tuple[int, ...]]:
        bag = set(td.bags[node])
        children = [c for c in td.neighbors(node) if c != parent]
        branches = []
        for ch in children:
            top, top_bag = self.build(td, ch, node)
            top, top_bag = self.forget_chain(top, top_bag, bag)
            top, top_bag = self.intro_chain(top, top_bag, bag)
            branches.append((top, top_bag))
        if not branches:
            leaf = self.add(NiceNode(LEAF, ()))
            return self.intro_chain(leaf, (), bag)
        cur, cur_bag = branches[0]
        for nxt, _ in branches[1:]:
            cur = self.add(NiceNode(JOIN, cur_bag, [cur, nxt]))
        return cur, cur_bag


def make_nice(g: Graph, td: TreeDecomposition) -> NiceTreeDecomposition:
    """Convert a valid decomposition into a nice one rooted at an empty bag."""
    verdict = validate(g, td)
    if verdict is not None:
        raise ValueError(f"invalid tree decomposition: {verdict[0]} (witness {verdict[1]})")
    builder = _NiceBuilder(g)
    top, top_bag = builder.build(td, 0, None)
    top, _ = builder.forget_chain(top, top_bag, set())
    return NiceTreeDecomposition(builder.nodes, top)


def validate_nice(g: Graph, ntd: NiceTreeDecomposition) -> Optional[tuple[str, object]]:
    """Check all structural invariants of a nice decomposition; None if ok."""
    nodes = ntd.nodes
    if nodes[ntd.root].bag:
        return ("root-bag", ntd.root)
    edge_count: dict[tuple[int, int], int] = {}
    forget_count: dict[int, int] = {}
    for i in ntd.postorder():
        nd = nodes[i]
        kids = [nodes[c] for c in nd.children]
        if nd.kind == LEAF:
            if kids or nd.bag:
                return ("leaf-shape", i)
        elif nd.kind == INTRODUCE:
            if len(kids) != 1 or nd.vertex in kids[0].bag or set(nd.bag) != set(kids[0].bag) | {nd.vertex}:
                return ("introduce-shape", i)
        elif nd.kind == FORGET:
            if len(kids) != 1 or nd.vertex not in kids[0].bag or set(nd.bag) != set(kids[0].bag) - {nd.vertex}:
                return ("forget-shape", i)
            forget_count[nd.vertex] = forget_count.get(nd.vertex, 0) + 1
        elif nd.kind == INTRODUCE_EDGE:
            u, v = nd.edge
            if len(kids) != 1 or nd.bag != kids[0].bag or u not in nd.bag or v not in nd.bag:
                return ("introduce-edge-shape", i)
            if not g.has_edge(u, v):
                return ("introduce-edge-unknown", nd.edge)
            edge_count[nd.edge] = edge_count.get(nd.edge, 0) + 1
        elif nd.kind == JOIN:
            if len(kids) != 2 or kids[0].bag != nd.bag or kids[1].bag != nd.bag:
                return ("join-shape", i)
        else:
            return ("unknown-kind", nd.kind)
    for e in sorted(g.edges):
        if edge_count.get(e, 0) != 1:
            return ("edge-multiplicity", e)
    for e in edge_count:
        if e not in g.edges:
            return ("edge-multiplicity", e)
    for v, cnt in forget_count.items():
        if cnt != 1:
            return ("forget-multiplicity", v)
    for v in range(g.n):
        if v not in forget_count:
            return ("vertex-coverage", v)
    # join-independence: no edge within a join bag introduced in its subtree
    intro_below: dict[int, set[tuple[int, int]]] = {}
    for i in ntd.postorder():
        nd = nodes[i]
        acc: set[tuple[int, int]] = set()
        for c in nd.children:
            acc |= intro_below[c]
        if nd.kind == INTRODUCE_EDGE:
            acc.add(nd.edge)
        intro_below[i] = acc
        if nd.kind == JOIN:
            bag = set(nd.bag)
            for u, v in acc:
                if u in bag and v in bag:
                    return ("join-independence", (i, (u, v)))
    return None


def dump_nice(ntd: NiceTreeDecomposition) -> str:
    """One node per line, for golden tests and debugging."""
    lines = []
    for i, nd in enumerate(ntd.nodes):
        if nd.kind in (INTRODUCE, FORGET):
            payload = str(nd.vertex)
        elif nd.kind == INTRODUCE_EDGE:
            payload = f"{nd.edge[0]}-{nd.edge[1]}"
        else:
            payload = "-"
        children = ",".join(str(c) for c in nd.children)
        bag = ",".join(str(v) for v in nd.bag)
        lines.append(f"node {i} {nd.kind} {payload} children={children} bag={bag}")
    return "\n".join(lines) + "\n"


def exact_treewidth(g: Graph) -> int:
    """Exact treewidth via dynamic programming over vertex subsets (n <= 15)."""
    n = g.n
    if n > 15:
        raise InstanceTooLargeError(f"exact treewidth limited to n <= 15, got {n}")
    if n == 0:
        return 0
    adj_mask = [0] * n
    for u, v in g.edges:
        adj_mask[u] |= 1 << v
        adj_mask[v] |= 1 << u
    full = (1 << n) - 1

    def q(rmask: int, v: int) -> int:
        # neighbors of v's component in the graph induced on R + {v}, outside it
        allowed = rmask | (1 << v)
        comp = 1 << v
        while True:
            frontier = 0
            m = comp
            while m:
                low = m & -m
                frontier |= adj_mask[low.bit_length() - 1]
                m ^= low
            grown = comp | (frontier & allowed)
            if grown == comp:
                return bin(frontier & ~allowed).count("1")
            comp = grown

    tw = [0] * (1 << n)
    by_popcount: list[list[int]] = [[] for _ in range(n + 1)]
    for s in range(1 << n):
        by_popcount[bin(s).count("1")].append(s)
    for size in range(1, n + 1):
        for s in by_popcount[size]:
            best = n
            m = s
            while m:
                low = m & -m
                v = low.bit_length() - 1
                rest = s ^ low
                cand = max(tw[rest], q(rest, v))
                if cand < best:
                    best = cand
                m ^= low
            tw[s] = best
    return tw[full]
