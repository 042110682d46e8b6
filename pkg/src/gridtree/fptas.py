"""Rounded-flow dynamic program and the two approximation front ends.

For a directed edge (u, v), a rounded flow f~ and a window [lo, hi] on
rounded loads, the tables hold

* ``i(u, v, f~)``: the least exact flow on u -> v over feasible orientations
  of the side of v whose rounded flow on the arc is f~;
* ``o(u, v, f~)``: the largest exact flow u can push into v over feasible
  orientations of the side of u, given rounded flow f~ on the arc;

where every source on the relevant side keeps its rounded load in the
window.  A feasible orientation with all rounded loads in the window exists
iff some f~ has i(u, v, f~) <= o(u, v, f~) on one direction of an edge.

Tables are sparse: i(u, v, .) is stored only at the rounded flows the side
of v can actually produce, and o is evaluated on demand.
"""
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .flow import compute_flow, objectives
from .model import INF, NEG_INF, SINK, SOURCE, SWITCH, Arc, Network, Orientation
from .rounding import RoundingContext, build_grids, rounded_objectives

ZERO = Fraction(0)

# An item of a fold sequence: ("const", value) or ("kid", node id).
Item = Tuple[str, object]


class OpCounter:
    def __init__(self):
        self.count = 0


def xi_dp(seq: Sequence[Item], divisor: int, d: int, entries: Dict[str, dict],
          ctx: RoundingContext, allowed: Optional[FrozenSet[str]] = None,
          forced: Optional[str] = None, target=None, counter: Optional[OpCounter] = None):
    """Cheapest choice of entering neighbours and outgoing rounded flows.

    Items are folded left to right with ``acc <- a(acc + x / divisor)``.  A
    constant contributes its value; a neighbour either enters the middle node
    (skipped by the fold, at most ``d`` of them, only those in ``allowed``)
    or leaves it with some rounded flow f_j taken from ``entries[kid]``,
    which maps f_j to (exact i value, witness) and adds that i value to the
    cost.  ``forced`` must enter.  Exactly ``d`` neighbours enter.

    Returns {final fold: (cost, assignment)} where the assignment lists, per
    neighbour in sequence order, None (entering) or its f_j.  With ``target``
    only that fold value is kept and (cost, assignment) or (INF, None) is
    returned.
    """
    kids = [x for kind, x in seq if kind == "kid"]
    if allowed is None:
        allowed = frozenset(kids)
    remaining = len(kids)
    states: Dict[Tuple[Fraction, int], Tuple[Fraction, tuple]] = {(ZERO, 0): (ZERO, ())}
    ops = 0
    for kind, x in seq:
        new: Dict[Tuple[Fraction, int], Tuple[Fraction, tuple]] = {}
        if kind == "const":
            for (acc, cnt), (cost, assign) in states.items():
                key = (ctx.round_down(acc + Fraction(x) / divisor), cnt)
                ops += 1
                if target is not None and key[0] > target:
                    continue
                if key not in new or cost < new[key][0]:
                    new[key] = (cost, assign)
            states = new
            continue
        remaining -= 1
        options = sorted(entries[x].items()) if x != forced else []
        for (acc, cnt), (cost, assign) in states.items():
            if x in allowed and cnt < d:
                key = (acc, cnt + 1)
                if key not in new or cost < new[key][0]:
                    new[key] = (cost, assign + (None,))
            if cnt + remaining < d:
                continue
            for ft, (val, _) in options:
                ops += 1
                nacc = ctx.round_down(acc + ft / divisor)
                if target is not None and nacc > target:
                    continue
                key = (nacc, cnt)
                ncost = cost + val
                if key not in new or ncost < new[key][0]:
                    new[key] = (ncost, assign + (ft,))
        states = new
    if counter is not None:
        counter.count += ops
    out = {acc: value for (acc, cnt), value in states.items() if cnt == d}
    if target is not None:
        return out.get(Fraction(target), (INF, None))
    return out


class IOTables:
    """Lazily computed i and o values for one load window."""

    def __init__(self, net: Network, ctx: RoundingContext, m_lo=0, m_hi=1):
        self.net = net
        self.ctx = ctx
        self.m_lo = Fraction(m_lo)
        self.m_hi = Fraction(m_hi)
        self.counter = OpCounter()
        self._i: Dict[Arc, Dict[Fraction, tuple]] = {}
        self._o: Dict[Tuple[str, str, Fraction], tuple] = {}
        self._dp: Dict[tuple, dict] = {}

    # -- helpers --------------------------------------------------------------

    def kids(self, parent: str, node: str) -> List[str]:
        return [x for x in self.net.neighbors[node] if x != parent]

    def in_window(self, source: str, ft: Fraction) -> bool:
        load = ft / self.net.prod(source)
        return self.m_lo <= load <= self.m_hi

    def _fold(self, key: tuple, seq, divisor, d, entries, allowed=None, forced=None):
        ckey = key + (divisor, d, allowed, forced)
        if ckey not in self._dp:
            self._dp[ckey] = xi_dp(seq, divisor, d, entries, self.ctx, allowed, forced,
                                   counter=self.counter)
        return self._dp[ckey]

    def _ranking(self, node: str, kids: List[str], ft: Fraction) -> List[Tuple[str, Fraction]]:
        """Neighbours that can push into ``node`` at rounded flow ft, by decreasing o."""
        rank = self.net.rank
        scored = [(x, self.o_value(x, node, ft)) for x in kids]
        scored = [(x, o) for x, o in scored if o is not NEG_INF]
        scored.sort(key=lambda t: (-t[1], rank[t[0]]))
        return scored

    @property
    def entries(self) -> int:
        return sum(len(t) for t in self._i.values()) + len(self._o)

    # -- i ----------------------------------------------------------------------

    def i_table(self, u: str, v: str) -> Dict[Fraction, tuple]:
        """{f~: (i value, witness)} over the rounded flows the side of v can produce."""
        if (u, v) not in self._i:
            self._i[(u, v)] = self._compute_i(u, v)
        return self._i[(u, v)]

    def i_value(self, u: str, v: str, ft) -> object:
        entry = self.i_table(u, v).get(Fraction(ft))
        return INF if entry is None else entry[0]

    def _i_ok(self, v: str, flow: Fraction, d: int) -> bool:
        kind = self.net.kind(v)
        if kind == SWITCH and self.net.cap(v) is not None:
            return flow * (d + 1) <= self.net.cap(v)
        if kind == SOURCE:
            return flow <= self.net.prod(v)
        return True

    def _compute_i(self, u: str, v: str) -> Dict[Fraction, tuple]:
        net = self.net
        kind = net.kind(v)
        kids = self.kids(u, v)
        extra = net.pow(v) if kind == SINK else 0
        seq: List[Item] = ([("const", extra)] if kind == SINK else []) + [("kid", x) for x in kids]
        entries = {x: self.i_table(v, x) for x in kids}
        key = ("i", u, v)
        best: Dict[Fraction, tuple] = {}
        for d in range(len(kids) + 1):
            divisor = d + 1 + (1 if kind == SOURCE else 0)
            base = self._fold(key, seq, divisor, d, entries)
            for ft in sorted(base):
                cost, assign = base[ft]
                if kind == SOURCE and not self.in_window(v, ft):
                    continue
                flow = (extra + cost) / divisor
                if not self._i_ok(v, flow, d):
                    continue
                if ft in best and best[ft][0] <= flow:
                    continue
                entering = [x for x, a in zip(kids, assign) if a is None]
                bound = min((self.o_value(x, v, ft) for x in entering), default=INF)
                if flow <= bound:
                    best[ft] = (flow, (d, assign))
                    continue
                # the cheapest assignment breaks an entering neighbour's limit:
                # fix the entering neighbour with the smallest o and retry
                ranking = self._ranking(v, kids, ft)
                for pos, (k, ok) in enumerate(ranking):
                    if ok < flow:
                        break
                    if pos + 1 < d:
                        continue
                    allowed = frozenset(x for x, _ in ranking[:pos + 1])
                    res = self._fold(key, seq, divisor, d, entries, allowed, k).get(ft)
                    if res is None:
                        continue
                    flow_k = (extra + res[0]) / divisor
                    if flow_k <= ok and self._i_ok(v, flow_k, d):
                        if ft not in best or flow_k < best[ft][0]:
                            best[ft] = (flow_k, (d, res[1]))
        return best

    # -- o ----------------------------------------------------------------------

    def o_value(self, u: str, v: str, ft) -> object:
        return self.o_entry(u, v, ft)[0]

    def o_entry(self, u: str, v: str, ft) -> tuple:
        ft = Fraction(ft)
        key = (u, v, ft)
        if key not in self._o:
            self._o[key] = self._compute_o(u, v, ft)
        return self._o[key]

    def _o_total(self, u: str, d: int, o_min) -> Fraction:
        """Flow that can enter u in total when its d entering arcs carry at most o_min."""
        net = self.net
        kind = net.kind(u)
        if kind == SOURCE:
            per_arc = net.prod(u) if d == 0 else min(Fraction(net.prod(u)), o_min)
            return (d + 1) * per_arc
        total = d * o_min
        if kind == SWITCH and net.cap(u) is not None:
            total = min(total, Fraction(net.cap(u)))
        if kind == SINK:
            total -= net.pow(u)
        return total

    def _compute_o(self, u: str, v: str, ft: Fraction) -> tuple:
        net = self.net
        kind = net.kind(u)
        kids = self.kids(v, u)
        seq: List[Item] = [("const", net.pow(u))] if kind == SINK else []
        seq += [("const", ft) if x == v else ("kid", x) for x in net.neighbors[u]]
        entries = {x: self.i_table(u, x) for x in kids}
        key = ("o", u, v, ft)
        best, witness = NEG_INF, None
        for d in range(0 if kind == SOURCE else 1, len(kids) + 1):
            divisor = d + (1 if kind == SOURCE else 0)
            base = self._fold(key, seq, divisor, d, entries)
            for gt in sorted(base):
                cost, assign = base[gt]
                if kind == SOURCE and not self.in_window(u, gt):
                    continue
                if d == 0:
                    f = self._o_total(u, 0, None) - cost
                    if f >= 0 and f > best:
                        best, witness = f, (d, assign, gt)
                    continue
                # the cheapest assignment is achievable with its own smallest o
                entering = [x for x, a in zip(kids, assign) if a is None]
                o_min = min(self.o_value(x, u, gt) for x in entering)
                if o_min is not NEG_INF:
                    f = self._o_total(u, d, o_min) - cost
                    if f >= 0 and f > best:
                        best, witness = f, (d, assign, gt)
                ranking = self._ranking(u, kids, gt)
                for pos, (k, ok) in enumerate(ranking):
                    total = self._o_total(u, d, ok)
                    if total - cost <= best or total - cost < 0:
                        break
                    if pos + 1 < d:
                        continue
                    allowed = frozenset(x for x, _ in ranking[:pos + 1])
                    res = self._fold(key, seq, divisor, d, entries, allowed, k).get(gt)
                    if res is None:
                        continue
                    f = total - res[0]
                    if f >= 0 and f > best:
                        best, witness = f, (d, res[1], gt)
        return best, witness

    # -- reconstruction ---------------------------------------------------------

    def expand(self, u: str, v: str, ft: Fraction) -> List[Arc]:
        """Arcs of the orientation made of both semi-orientations around u -> v."""
        arcs = [(u, v)]
        stack = [("i", u, v, ft), ("o", u, v, ft)]
        while stack:
            which, a, b, val = stack.pop()
            if which == "i":
                _, (_, assign) = self.i_table(a, b)[val]
                mid, far, inner = b, a, val
            else:
                _, (_, assign, gt) = self.o_entry(a, b, val)
                mid, far, inner = a, b, gt
            for x, choice in zip(self.kids(far, mid), assign):
                if choice is None:
                    arcs.append((x, mid))
                    stack.append(("o", x, mid, inner))
                else:
                    arcs.append((mid, x))
                    stack.append(("i", mid, x, choice))
        return arcs

    def combine(self) -> Optional[Tuple[Orientation, Arc, Fraction]]:
        a, b = self.net.sorted_edges()[0]
        for u, v in ((a, b), (b, a)):
            table = self.i_table(u, v)
            for ft in sorted(table):
                iv = table[ft][0]
                ov = self.o_value(u, v, ft)
                if ov is not NEG_INF and iv <= ov:
                    return Orientation(self.net, self.expand(u, v, ft)), (u, v), ft
        return None


def compute_tables(net: Network, ctx: RoundingContext, m_lo=0, m_hi=1,
                   eager: bool = False) -> IOTables:
    """Tables for one load window; ``eager`` fills i on every arc and o at every i key."""
    tables = IOTables(net, ctx, m_lo, m_hi)
    if eager:
        for a, b in net.sorted_edges():
            for u, v in ((a, b), (b, a)):
                for ft in list(tables.i_table(u, v)):
                    tables.o_value(u, v, ft)
    return tables


def compute_h_i(tables: IOTables, u: str, v: str, ft) -> tuple:
    """(i(u, v, ft), witness), +inf when no outgoing semi-orientation fits."""
    entry = tables.i_table(u, v).get(Fraction(ft))
    return (INF, None) if entry is None else entry


def compute_h_o(tables: IOTables, u: str, v: str, ft) -> tuple:
    """(o(u, v, ft), witness), -inf when no entering semi-orientation fits."""
    return tables.o_entry(u, v, ft)


def feasible_with_bounds(net: Network, ctx: RoundingContext, m_lo, m_hi,
                         tables: Optional[IOTables] = None) -> Optional[Orientation]:
    """A feasible orientation whose rounded loads all lie in [m_lo, m_hi], if any."""
    tables = tables or IOTables(net, ctx, m_lo, m_hi)
    found = tables.combine()
    return None if found is None else found[0]


# -- front ends ---------------------------------------------------------------

class _Search:
    """Shared bookkeeping for the sweeps over load windows."""

    def __init__(self, net: Network, ctx: RoundingContext):
        self.net = net
        self.ctx = ctx
        self.builds = 0
        self.entries = 0
        self.ops = 0

    def attempt(self, lo, hi) -> Optional[Orientation]:
        tables = IOTables(self.net, self.ctx, lo, hi)
        found = tables.combine()
        self.builds += 1
        self.entries += tables.entries
        self.ops += tables.counter.count
        return None if found is None else found[0]

    def stats(self) -> dict:
        return {"grid_size": self.ctx.flow_grid_size(), "entries": self.entries,
                "rational_ops": self.ops, "iterations": self.builds}


def candidate_loads(net: Network, ctx: RoundingContext) -> List[Fraction]:
    """Every rounded load a source can take in a feasible orientation (a superset)."""
    tables = IOTables(net, ctx, 0, 1)
    values = {ZERO}
    for s in net.sources:
        prod = net.prod(s)
        flows = set()
        for x in net.neighbors[s]:
            flows.update(tables.i_table(x, s))
        seq = [("kid", x) for x in net.neighbors[s]]
        entries = {x: tables.i_table(s, x) for x in net.neighbors[s]}
        flows.update(xi_dp(seq, 1, 0, entries, ctx))
        values.update(f / prod for f in flows if f <= prod)
    return sorted(values)


def _rounded(net: Network, o: Orientation, ctx: RoundingContext):
    return rounded_objectives(net, o, ctx)


def solve_max_min_load_fptas(net: Network, eps_prime, stats: Optional[dict] = None,
                             ctx: Optional[RoundingContext] = None
                             ) -> Optional[Tuple[Orientation, Fraction]]:
    """Feasible orientation whose exact minimum load is within the guarantee of the best.

    The largest lower bound on rounded loads that still admits a feasible
    orientation is found by bisection over the candidate rounded loads.
    """
    ctx = ctx or build_grids(net, eps_prime)
    search = _Search(net, ctx)
    best = search.attempt(0, 1)
    if best is None:
        if stats is not None:
            stats.update(search.stats())
        return None
    values = candidate_loads(net, ctx)
    index = {x: i for i, x in enumerate(values)}
    lo = index[_rounded(net, best, ctx)[0]]
    hi = len(values) - 1
    while lo < hi:
        mid = (lo + hi + 1) // 2
        found = search.attempt(values[mid], 1)
        if found is None:
            hi = mid - 1
        else:
            best = found
            lo = max(mid, index[_rounded(net, found, ctx)[0]])
    if stats is not None:
        stats.update(search.stats())
        stats["rounded_value"] = _rounded(net, best, ctx)[0]
    return best, objectives(net, compute_flow(net, best))[0]


def solve_min_reserve_fptas(net: Network, eps_prime, stats: Optional[dict] = None,
                            ctx: Optional[RoundingContext] = None
                            ) -> Optional[Tuple[Orientation, Fraction]]:
    """Feasible orientation whose exact load reserve is within 3 eps' of the best.

    Finds the load window [lo, hi] of least width admitting a feasible
    orientation.  Feasibility only gets easier as lo falls or hi rises, so a
    two-pointer walk over the candidate rounded loads visits each lower end
    once and never moves the upper end back.
    """
    ctx = ctx or build_grids(net, eps_prime)
    search = _Search(net, ctx)
    best = search.attempt(0, 1)
    if best is None:
        if stats is not None:
            stats.update(search.stats())
        return None
    r_lo, r_hi, width = _rounded(net, best, ctx)
    values = candidate_loads(net, ctx)
    index = {x: i for i, x in enumerate(values)}
    i = j = 0
    while i < len(values) and j < len(values):
        j = max(j, i)
        if values[j] - values[i] >= width:
            i += 1
            continue
        found = search.attempt(values[i], values[j])
        if found is None:
            j += 1
            continue
        f_lo, f_hi, f_width = _rounded(net, found, ctx)
        if f_width < width:
            best, width = found, f_width
        i = index[f_lo] + 1
    if stats is not None:
        stats.update(search.stats())
        stats["rounded_value"] = width
    return best, objectives(net, compute_flow(net, best))[2]
