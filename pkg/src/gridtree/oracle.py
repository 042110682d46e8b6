"""Exhaustive ground truth for small trees.

Orientations are enumerated by a binary counter over the edges sorted by
(smaller endpoint number, larger endpoint number); bit i set means edge i
points from its higher-numbered endpoint to its lower-numbered one.
"""
import os
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .flow import arc_structure, check_feasible, compute_flow, entering_flows, node_violations, objectives
from .model import INF, NEG_INF, SOURCE, SWITCH, Arc, ModelError, Network, Orientation
from .rounding import RoundingContext, rounded_entering

DEFAULT_LIMIT = 24
OBJECTIVES = ("min-m", "max-m", "min-r")


class OracleLimitExceeded(ModelError):
    pass


def enumeration_limit() -> int:
    value = os.environ.get("GRIDTREE_ORACLE_LIMIT")
    return int(value) if value else DEFAULT_LIMIT


def _check_limit(count: int, limit: Optional[int]):
    limit = enumeration_limit() if limit is None else limit
    if count > limit:
        raise OracleLimitExceeded("%d edges exceed the enumeration limit of %d" % (count, limit))


def arc_choices(edges: Sequence[Arc]) -> Iterator[List[Arc]]:
    """Every orientation of ``edges`` in counter order (bit 0 is the first edge)."""
    k = len(edges)
    for counter in range(1 << k):
        yield [(b, a) if counter >> i & 1 else (a, b) for i, (a, b) in enumerate(edges)]


def enumerate_orientations(net: Network, limit: Optional[int] = None) -> Iterator[Orientation]:
    edges = net.sorted_edges()
    _check_limit(len(edges), limit)
    for arcs in arc_choices(edges):
        yield Orientation(net, arcs)


def normalize_objective(objective: str) -> str:
    key = objective.lower().replace("_", "-")
    aliases = {"min-max-load": "min-m", "max-min-load": "max-m", "min-reserve": "min-r"}
    key = aliases.get(key, key)
    if key not in OBJECTIVES:
        raise ValueError("unknown objective %r" % objective)
    return key


def brute_force_all(net: Network, limit: Optional[int] = None):
    """Optima of the three objectives in one pass.

    Returns (count_feasible, {objective: (orientation, value) or None}).
    Ties keep the first orientation in enumeration order.
    """
    best: Dict[str, Optional[Tuple[Orientation, Fraction]]] = {k: None for k in OBJECTIVES}
    count = 0
    for o in enumerate_orientations(net, limit):
        if not check_feasible(net, o).feasible:
            continue
        count += 1
        lo, hi, res = objectives(net, compute_flow(net, o))
        for key, val, better in (("min-m", hi, -1), ("max-m", lo, 1), ("min-r", res, -1)):
            cur = best[key]
            if cur is None or (val - cur[1]) * better > 0:
                best[key] = (o, val)
    return count, best


def brute_force_optimum(net: Network, objective: str, limit: Optional[int] = None,
                        stats: Optional[dict] = None) -> Optional[Tuple[Orientation, Fraction]]:
    """Exact optimum of ``objective`` (min-M, max-m or min-R) over all orientations."""
    key = normalize_objective(objective)
    count, best = brute_force_all(net, limit)
    if stats is not None:
        stats["count_feasible"] = count
    return best[key]


def brute_force_valid(net: Network, limit: Optional[int] = None) -> bool:
    return any(check_feasible(net, o).feasible for o in enumerate_orientations(net, limit))


def _window_ok(net: Network, rounded: Dict[str, object], nodes: Iterable[str],
               lo: Fraction, hi: Fraction) -> bool:
    for x in nodes:
        if net.kind(x) == SOURCE:
            load = rounded[x] / net.prod(x)
            if load < lo or load > hi:
                return False
    return True


def _nodes_ok(net: Network, arcs: Sequence[Arc], flows, nodes: Iterable[str]) -> bool:
    succ, indeg = arc_structure(arcs, net.rank)
    for x in nodes:
        if node_violations(net, x, flows.get(x), indeg.get(x, 0), len(succ.get(x, ()))):
            return False
    return True


def brute_force_i_table(net: Network, u: str, v: str, ctx: RoundingContext, m_lo=0, m_hi=1,
                        limit: Optional[int] = None) -> Dict[Fraction, Fraction]:
    """Minimum exact flow on (u, v) per rounded flow, over outgoing semi-orientations."""
    m_lo, m_hi = Fraction(m_lo), Fraction(m_hi)
    edges = net.side_edges(u, v)
    _check_limit(len(edges), limit)
    side = net.side(u, v)
    table: Dict[Fraction, Fraction] = {}
    for choice in arc_choices(edges):
        arcs = choice + [(u, v)]
        flows = entering_flows(net, arcs)
        if not _nodes_ok(net, arcs, flows, side):
            continue
        rounded = rounded_entering(net, arcs, ctx)
        if not _window_ok(net, rounded, side, m_lo, m_hi):
            continue
        key, f = rounded[v], flows[v]
        if key not in table or f < table[key]:
            table[key] = f
    return table


class _EnteringCase:
    """One orientation of the side of u, with flows affine in the flow on (u, v)."""

    def __init__(self, net: Network, u: str, v: str, arcs: List[Arc], side: List[str]):
        self.arcs = arcs
        zero = entering_flows(net, arcs, fixed={v: 0})
        one = entering_flows(net, arcs, fixed={v: 1})
        succ, indeg = arc_structure(arcs, net.rank)
        self.ok = True
        self.f_max = None
        for x in side:
            d = indeg.get(x, 0)
            kind = net.kind(x)
            if kind != SOURCE and d == 0:
                self.ok = False
                return
            if kind == SOURCE:
                limit, scale = net.prod(x), 1
            elif kind == SWITCH and net.cap(x) is not None:
                limit, scale = net.cap(x), d
            else:
                continue
            base, slope = zero[x] * scale, (one[x] - zero[x]) * scale
            if base > limit:
                self.ok = False
                return
            if slope > 0:
                bound = (limit - base) / slope
                if self.f_max is None or bound < self.f_max:
                    self.f_max = bound
        if self.f_max is None:
            raise ModelError("unbounded flow on a semi-orientation")


def brute_force_o_values(net: Network, u: str, v: str, keys: Iterable, ctx: RoundingContext,
                         m_lo=0, m_hi=1, limit: Optional[int] = None) -> Dict[Fraction, object]:
    """Maximum exact flow on (u, v) per given rounded flow, over entering semi-orientations."""
    m_lo, m_hi = Fraction(m_lo), Fraction(m_hi)
    edges = net.side_edges(v, u)
    _check_limit(len(edges), limit)
    side = net.side(v, u)
    cases = []
    for choice in arc_choices(edges):
        case = _EnteringCase(net, u, v, choice + [(u, v)], side)
        if case.ok:
            cases.append(case)
    out = {}
    for key in keys:
        key = Fraction(key)
        best = NEG_INF
        for case in cases:
            if case.f_max <= best:
                continue
            rounded = rounded_entering(net, case.arcs, ctx, fixed={v: key})
            if _window_ok(net, rounded, side, m_lo, m_hi):
                best = case.f_max
        out[key] = best
    return out


def brute_force_io(net: Network, arc: Arc, f_tilde, M_tilde, m_tilde, ctx: RoundingContext,
                   limit: Optional[int] = None):
    """(i, o) for arc (u, v) at rounded flow f_tilde under the load window [m_tilde, M_tilde]."""
    u, v = arc
    f_tilde = Fraction(f_tilde)
    table = brute_force_i_table(net, u, v, ctx, m_tilde, M_tilde, limit)
    i_val = table.get(f_tilde, INF)
    o_val = brute_force_o_values(net, u, v, [f_tilde], ctx, m_tilde, M_tilde, limit)[f_tilde]
    return i_val, o_val
