"""Equal-split flow induced by an orientation, feasibility and load objectives.

Every arc entering a node carries the same flow.  A switch forwards what its
successors draw, a sink adds its own demand, and a source counts its own
production as one more entering arc.  All values are exact fractions.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

from .model import SINK, SOURCE, SWITCH, Arc, ModelError, Network, Orientation

DEMAND = "demand"
CAPACITY = "capacity"
PRODUCTION = "production"


def arc_structure(arcs: Iterable[Arc], rank: Dict[str, int]):
    """Successor lists (sorted by the numbering) and in-degrees of an arc set."""
    succ: Dict[str, List[str]] = {}
    indeg: Dict[str, int] = {}
    for a, b in arcs:
        succ.setdefault(a, []).append(b)
        succ.setdefault(b, [])
        indeg[b] = indeg.get(b, 0) + 1
        indeg.setdefault(a, 0)
    for lst in succ.values():
        lst.sort(key=rank.__getitem__)
    return succ, indeg


def postorder(succ: Dict[str, List[str]], stop=()) -> List[str]:
    """Nodes ordered so that every node comes after all of its successors."""
    order = []
    done = set()
    for root in succ:
        if root in done:
            continue
        stack = [(root, False)]
        while stack:
            x, expanded = stack.pop()
            if expanded:
                order.append(x)
                continue
            if x in done:
                continue
            done.add(x)
            stack.append((x, True))
            if x not in stop:
                for y in succ[x]:
                    if y not in done:
                        stack.append((y, False))
    return order


def entering_flows(net: Network, arcs: Iterable[Arc],
                   fixed: Optional[Dict[str, Fraction]] = None) -> Dict[str, Optional[Fraction]]:
    """Entering flow F(v) of every node touched by ``arcs``.

    ``fixed`` pins the entering flow of some nodes (their successors are then
    ignored); this is how a semi-orientation with a prescribed boundary flow
    is evaluated.  Switches and sinks without entering arcs get None.
    """
    fixed = fixed or {}
    succ, indeg = arc_structure(arcs, net.rank)
    flows: Dict[str, Optional[Fraction]] = {}
    for v in postorder(succ, stop=fixed):
        if v in fixed:
            flows[v] = Fraction(fixed[v])
            continue
        kind = net.kind(v)
        out = sum((flows[w] for w in succ[v]), Fraction(0))
        if kind == SINK:
            out += net.pow(v)
        d = indeg[v] + (1 if kind == SOURCE else 0)
        flows[v] = out / d if d else None
    return flows


@dataclass
class FlowAssignment:
    arc_flow: Dict[Arc, Fraction]
    entering: Dict[str, Optional[Fraction]]
    indegree: Dict[str, int]
    outdegree: Dict[str, int]
    load: Dict[str, Fraction]


@dataclass
class Violation:
    node: str
    kind: str
    amount: Optional[Fraction] = None
    limit: Optional[int] = None


@dataclass
class FeasibilityReport:
    feasible: bool
    violations: List[Violation] = field(default_factory=list)

    def pairs(self) -> List[Tuple[str, str]]:
        return [(v.node, v.kind) for v in self.violations]


def compute_flow(net: Network, o: Orientation) -> FlowAssignment:
    """Exact flow on every arc, entering flows and source loads."""
    flows = entering_flows(net, o.arcs)
    succ, indeg = arc_structure(o.arcs, net.rank)
    arc_flow = {(a, b): flows[b] for a, b in o.arcs}
    load = {}
    for s in net.sources:
        load[s] = flows[s] / net.prod(s)
    return FlowAssignment(arc_flow, flows, indeg,
                          {v: len(ws) for v, ws in succ.items()}, load)


def node_violations(net: Network, v: str, flow: Optional[Fraction], indeg: int,
                    outdeg: int, allow_deactivated: bool = True) -> List[Violation]:
    """Demand and capacity checks for a single node."""
    kind = net.kind(v)
    if kind == SOURCE:
        if flow > net.prod(v):
            return [Violation(v, PRODUCTION, flow, net.prod(v))]
        return []
    if indeg == 0:
        # A switch with no arc at all around it is treated as switched off.
        if kind == SWITCH and allow_deactivated and outdeg == 0:
            return []
        return [Violation(v, DEMAND)]
    if kind == SWITCH and net.cap(v) is not None and flow * indeg > net.cap(v):
        return [Violation(v, CAPACITY, flow * indeg, net.cap(v))]
    return []


def check_feasible(net: Network, o: Orientation, allow_deactivated: bool = True,
                   fa: Optional[FlowAssignment] = None) -> FeasibilityReport:
    """Demand and capacity constraints of an orientation, compared exactly.

    A switch whose arcs all enter it forwards nothing and carries flow 0; it
    always has an entering arc, so it passes the demand check.  The
    ``allow_deactivated`` flag only matters for a switch with no arc at all.
    A precomputed ``fa`` for the same orientation skips the flow sweep.
    """
    fa = fa or compute_flow(net, o)
    violations = []
    for v in net.numbering:
        violations += node_violations(net, v, fa.entering.get(v), fa.indegree.get(v, 0),
                                      fa.outdegree.get(v, 0), allow_deactivated)
    return FeasibilityReport(not violations, violations)


def objectives(net: Network, fa: FlowAssignment) -> Tuple[Fraction, Fraction, Fraction]:
    """(minimum load, maximum load, load reserve) over all sources."""
    if not fa.load:
        raise ModelError("the network has no source")
    lo = min(fa.load.values())
    hi = max(fa.load.values())
    return lo, hi, hi - lo


def evaluate(net: Network, o: Orientation):
    """Flow, feasibility report and objectives (None when infeasible)."""
    fa = compute_flow(net, o)
    report = check_feasible(net, o, fa=fa)
    objs = objectives(net, fa) if report.feasible and fa.load else None
    return fa, report, objs
