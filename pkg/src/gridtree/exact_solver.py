"""Exact feasibility (VALID) on trees and the min-max-load dichotomy.

For every directed edge (u, v) two exact quantities are computed:

* ``i(u, v)``: the least flow the side of v can draw through the arc u -> v
  while every node on that side meets its constraints;
* ``o(u, v)``: the largest flow the side of u can push through u -> v.

A feasible orientation using u -> v exists iff i(u, v) <= o(u, v).  Both
values come from a choice of which neighbours point into the middle node; for
a fixed number d of entering neighbours and a fixed neighbour k with the
smallest o among them, the best choice is greedy (the d - 1 remaining
entering neighbours are those with the largest i among the ones ranked above
k).
"""
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .flow import compute_flow, objectives
from .model import INF, NEG_INF, SINK, SOURCE, SWITCH, Arc, ModelError, Network, Orientation


def hanging_pairs(net: Network) -> List[Arc]:
    """All (p, c) pairs, meaning "the side of c away from p", by increasing size."""
    root = net.numbering[0]
    parent = {root: None}
    order = [root]
    for x in order:
        for y in net.neighbors[x]:
            if y not in parent:
                parent[y] = x
                order.append(y)
    size = {x: 1 for x in order}
    for x in reversed(order[1:]):
        size[parent[x]] += size[x]
    pairs = []
    for c in order[1:]:
        p = parent[c]
        pairs.append((size[c], p, c))
        pairs.append((net.n - size[c], c, p))
    pairs.sort(key=lambda t: (t[0], net.rank[t[1]], net.rank[t[2]]))
    return [(p, c) for _, p, c in pairs]


def _entering_sets(net: Network, children: List[str], ivals, ovals, d: int):
    """Candidate entering sets of size d, one per threshold neighbour.

    Yields (threshold, J) where threshold has the smallest o in J (ties by
    numbering) and J holds the d - 1 others of largest i ranked above it.
    """
    rank = net.rank
    must = [x for x in children if ivals[x] is INF]
    order = sorted((x for x in children if ovals[x] is not NEG_INF),
                   key=lambda x: (-ovals[x], rank[x]))
    for pos, k in enumerate(order):
        allowed = order[:pos + 1]
        required = [k] + [x for x in must if x != k]
        if len(required) > d or any(x not in allowed for x in required):
            continue
        rest = sorted((x for x in allowed if x not in required),
                      key=lambda x: (-ivals[x], rank[x]))
        chosen = required + rest[:d - len(required)]
        if len(chosen) < d:
            continue
        yield k, frozenset(chosen)


def exact_i(net: Network, c: str, children: List[str], ivals, ovals):
    """Least flow into c through its parent arc, with the entering set achieving it."""
    kind = net.kind(c)
    extra = net.pow(c) if kind == SINK else 0
    best, witness = INF, None
    for d in range(len(children) + 1):
        divisor = d + 1 + (1 if kind == SOURCE else 0)
        if d == 0:
            if any(ivals[x] is INF for x in children):
                continue
            options = [(None, frozenset())]
        else:
            options = _entering_sets(net, children, ivals, ovals, d)
        for k, J in options:
            flow = (extra + sum((ivals[x] for x in children if x not in J), Fraction(0))) / divisor
            if k is not None and flow > ovals[k]:
                continue
            if kind == SWITCH and net.cap(c) is not None and flow * (d + 1) > net.cap(c):
                continue
            if kind == SOURCE and flow > net.prod(c):
                continue
            if flow < best:
                best, witness = flow, J
    return best, witness


def exact_o(net: Network, u: str, children: List[str], ivals, ovals):
    """Largest flow u can send to its parent, with the entering set achieving it."""
    kind = net.kind(u)
    best, witness = NEG_INF, None
    for d in range(0 if kind == SOURCE else 1, len(children) + 1):
        if d == 0:
            if any(ivals[x] is INF for x in children):
                continue
            options = [(None, frozenset())]
        else:
            options = _entering_sets(net, children, ivals, ovals, d)
        for k, J in options:
            drawn = sum((ivals[x] for x in children if x not in J), Fraction(0))
            if kind == SOURCE:
                per_arc = net.prod(u) if k is None else min(net.prod(u), ovals[k])
                total = (d + 1) * per_arc
            else:
                total = d * ovals[k]
                if kind == SWITCH and net.cap(u) is not None:
                    total = min(total, Fraction(net.cap(u)))
            if kind == SINK:
                total -= net.pow(u)
            f = total - drawn
            if f >= 0 and f > best:
                best, witness = f, J
    return best, witness


class ExactTables:
    """Exact i and o for every arc, keyed by the arc (u, v)."""

    def __init__(self, net: Network):
        self.net = net
        self.i: Dict[Arc, Tuple[object, Optional[frozenset]]] = {}
        self.o: Dict[Arc, Tuple[object, Optional[frozenset]]] = {}
        for p, c in hanging_pairs(net):
            children = [x for x in net.neighbors[c] if x != p]
            ivals = {x: self.i[(c, x)][0] for x in children}
            ovals = {x: self.o[(x, c)][0] for x in children}
            self.i[(p, c)] = exact_i(net, c, children, ivals, ovals)
            self.o[(c, p)] = exact_o(net, c, children, ivals, ovals)

    def expand(self, u: str, v: str) -> List[Arc]:
        """Arcs of a feasible orientation through u -> v (assumes i <= o)."""
        arcs = [(u, v)]
        stack = [("i", u, v), ("o", u, v)]
        while stack:
            which, a, b = stack.pop()
            mid, far = (b, a) if which == "i" else (a, b)
            J = (self.i if which == "i" else self.o)[(a, b)][1]
            for x in self.net.neighbors[mid]:
                if x == far:
                    continue
                if x in J:
                    arcs.append((x, mid))
                    stack.append(("o", x, mid))
                else:
                    arcs.append((mid, x))
                    stack.append(("i", mid, x))
        return arcs

    def combine(self) -> Optional[Orientation]:
        a, b = self.net.sorted_edges()[0]
        for u, v in ((a, b), (b, a)):
            iv, ov = self.i[(u, v)][0], self.o[(u, v)][0]
            if iv is not INF and ov is not NEG_INF and iv <= ov:
                return Orientation(self.net, self.expand(u, v))
        return None


def valid(net: Network) -> Optional[Orientation]:
    """A feasible orientation, or None when none exists."""
    return ExactTables(net).combine()


def truncate_productions(net: Network, M) -> Network:
    """Scale by the denominator q of M = p/q, then set each production to p * Prod(s)."""
    M = Fraction(M)
    if not 0 < M <= 1:
        raise ModelError("the load bound must lie in (0, 1]")
    p, q = M.numerator, M.denominator
    values = {}
    for node in net.nodes:
        if node.kind == SOURCE:
            values[node.id] = p * node.value
        elif node.value is not None:
            values[node.id] = q * node.value
    return net.with_values(values)


def termination_gap(net: Network) -> Fraction:
    """Width below which the dichotomy stops: 1 / (n^n * sigma)^4."""
    n = net.n
    return Fraction(1, (n ** n * net.max_production()) ** 4)


def max_load(net: Network, o: Orientation) -> Fraction:
    return objectives(net, compute_flow(net, o))[1]


def solve_min_max_load(net: Network, stats: Optional[dict] = None
                       ) -> Optional[Tuple[Orientation, Fraction]]:
    """Feasible orientation of least maximum load, by dichotomy over VALID.

    The upper end of the interval is always an achieved maximum load, so the
    value returned at termination is the exact optimum.
    """
    best = valid(net)
    iterations = 0
    if best is None:
        if stats is not None:
            stats["iterations"] = iterations
        return None
    lo, hi = Fraction(0), max_load(net, best)
    gap = termination_gap(net)
    while hi - lo >= gap:
        mid = (lo + hi) / 2
        iterations += 1
        found = valid(truncate_productions(net, mid))
        if found is None:
            lo = mid
        else:
            best = Orientation(net, found.arcs)
            hi = max_load(net, best)
    if stats is not None:
        stats["iterations"] = iterations
    return best, hi
