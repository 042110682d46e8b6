"""Domain types for tree distribution networks.

A network is a tree whose nodes are sources (with a production), switches
(with a capacity, possibly unbounded) or sinks (with a demand).  Instances
are exchanged as JSON documents; node ids are strings and the numbering used
by the rounding code is an explicit, serializable total order.
"""
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

SOURCE = "source"
SWITCH = "switch"
SINK = "sink"
KINDS = (SOURCE, SWITCH, SINK)
UNBOUNDED = "unbounded"

Arc = Tuple[str, str]


class ModelError(ValueError):
    """Raised for malformed or invalid instance and orientation documents."""


class _Infinity:
    """Exact signed infinity used as the empty value of min/max tables."""

    __slots__ = ("sign",)

    def __init__(self, sign: int):
        self.sign = sign

    def __neg__(self):
        return NEG_INF if self.sign > 0 else INF

    def _key(self, other):
        if isinstance(other, _Infinity):
            return other.sign
        return 0

    def __lt__(self, other):
        return self.sign < self._key(other)

    def __le__(self, other):
        return self.sign <= self._key(other)

    def __gt__(self, other):
        return self.sign > self._key(other)

    def __ge__(self, other):
        return self.sign >= self._key(other)

    def __eq__(self, other):
        return isinstance(other, _Infinity) and other.sign == self.sign

    def __hash__(self):
        return hash(("inf", self.sign))

    def __repr__(self):
        return "INF" if self.sign > 0 else "NEG_INF"

    def __str__(self):
        return "+inf" if self.sign > 0 else "-inf"


INF = _Infinity(1)
NEG_INF = _Infinity(-1)


def is_infinite(x) -> bool:
    return isinstance(x, _Infinity)


@dataclass(frozen=True)
class Node:
    """A typed node.  ``value`` is Prod, Cap or Pow; None means unbounded."""

    id: str
    kind: str
    value: Optional[int]

    @property
    def unbounded(self) -> bool:
        return self.kind == SWITCH and self.value is None


class Network:
    """Immutable tree network with a node numbering.

    ``rank[id]`` is the 1-based position of the node in the numbering and
    ``neighbors[id]`` lists adjacent ids sorted by that numbering.
    """

    def __init__(self, nodes: Sequence[Node], edges: Sequence[Tuple[str, str]],
                 numbering: Optional[Sequence[str]] = None):
        self._nodes = tuple(nodes)
        self._by_id = {}
        for node in self._nodes:
            if node.id in self._by_id:
                raise ModelError("duplicate node id %r" % node.id)
            _check_node(node)
            self._by_id[node.id] = node
        if numbering is None:
            numbering = [node.id for node in self._nodes]
        self._numbering = tuple(numbering)
        if sorted(self._numbering) != sorted(self._by_id):
            raise ModelError("numbering must list every node id exactly once")
        self.rank = {nid: k + 1 for k, nid in enumerate(self._numbering)}
        self._edges = tuple(_edge_key(self.rank, a, b) for a, b in
                            _check_edges(self._by_id, edges))
        _check_tree(self._by_id, self._edges)
        self.edge_set = frozenset(self._edges)
        adj: Dict[str, List[str]] = {nid: [] for nid in self._by_id}
        for a, b in self._edges:
            adj[a].append(b)
            adj[b].append(a)
        self.neighbors = {nid: tuple(sorted(adj[nid], key=self.rank.__getitem__))
                          for nid in adj}

    @property
    def nodes(self) -> Tuple[Node, ...]:
        return self._nodes

    @property
    def edges(self) -> Tuple[Arc, ...]:
        """Edges as (lower-numbered, higher-numbered) pairs in declaration order."""
        return self._edges

    @property
    def numbering(self) -> Tuple[str, ...]:
        return self._numbering

    @property
    def n(self) -> int:
        return len(self._nodes)

    def node(self, nid: str) -> Node:
        return self._by_id[nid]

    def kind(self, nid: str) -> str:
        return self._by_id[nid].kind

    def ids(self, kind: Optional[str] = None) -> List[str]:
        return [v.id for v in self._nodes if kind is None or v.kind == kind]

    @property
    def sources(self) -> List[str]:
        return self.ids(SOURCE)

    def prod(self, nid: str) -> int:
        return self._by_id[nid].value

    def cap(self, nid: str) -> Optional[int]:
        return self._by_id[nid].value

    def pow(self, nid: str) -> int:
        return self._by_id[nid].value

    def total_power(self) -> int:
        return sum(v.value for v in self._nodes if v.kind == SINK)

    def max_production(self) -> int:
        return max((v.value for v in self._nodes if v.kind == SOURCE), default=0)

    def sorted_edges(self) -> List[Arc]:
        """Edges sorted by (lower endpoint number, higher endpoint number)."""
        return sorted(self._edges, key=lambda e: (self.rank[e[0]], self.rank[e[1]]))

    def side(self, u: str, v: str) -> List[str]:
        """Nodes of the component containing ``v`` once edge [u, v] is removed."""
        seen = {u, v}
        out = [v]
        stack = [v]
        while stack:
            x = stack.pop()
            for y in self.neighbors[x]:
                if y not in seen:
                    seen.add(y)
                    out.append(y)
                    stack.append(y)
        return out

    def side_edges(self, u: str, v: str) -> List[Arc]:
        """Edges of the component containing ``v`` once [u, v] is removed."""
        inside = set(self.side(u, v))
        return [e for e in self.sorted_edges()
                if e[0] in inside and e[1] in inside]

    def with_values(self, values: Dict[str, Optional[int]]) -> "Network":
        nodes = [Node(v.id, v.kind, values.get(v.id, v.value)) for v in self._nodes]
        return Network(nodes, self._edges, self._numbering)

    def structure(self):
        """Hashable description used for equality and round-trip checks."""
        return (self._nodes, tuple(sorted(self._edges)), self._numbering)

    def __eq__(self, other):
        return isinstance(other, Network) and self.structure() == other.structure()

    def __hash__(self):
        return hash(self.structure())

    def __repr__(self):
        return "Network(n=%d, sources=%d)" % (self.n, len(self.sources))


def _edge_key(rank, a, b) -> Arc:
    return (a, b) if rank[a] < rank[b] else (b, a)


def _check_node(node: Node):
    if node.kind not in KINDS:
        raise ModelError("node %r: unknown kind %r" % (node.id, node.kind))
    if node.kind == SWITCH and node.value is None:
        return
    if not isinstance(node.value, int) or isinstance(node.value, bool):
        raise ModelError("node %r: parameter must be an integer" % node.id)
    if node.value < 0:
        raise ModelError("node %r: negative parameter %d" % (node.id, node.value))
    if node.kind == SOURCE and node.value == 0:
        raise ModelError("node %r: production must be positive" % node.id)


def _check_edges(by_id, edges) -> List[Arc]:
    out = []
    for e in edges:
        if len(e) != 2:
            raise ModelError("edge %r must have two endpoints" % (e,))
        a, b = e
        for x in (a, b):
            if x not in by_id:
                raise ModelError("edge %r references unknown node %r" % (e, x))
        if a == b:
            raise ModelError("self loop on %r" % a)
        out.append((a, b))
    return out


def _check_tree(by_id, edges):
    n = len(by_id)
    if n < 2:
        raise ModelError("a network needs at least two nodes")
    if len(edges) != n - 1:
        raise ModelError("not a tree: %d nodes but %d edges" % (n, len(edges)))
    parent = {x: x for x in by_id}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra == rb:
            raise ModelError("not a tree: edge [%s, %s] closes a cycle" % (a, b))
        parent[ra] = rb


class Orientation:
    """A direction for every edge of a network, stored as a set of arcs."""

    def __init__(self, net: Network, arcs: Iterable[Arc]):
        arcs = [tuple(a) for a in arcs]
        direction = {}
        for a, b in arcs:
            key = _edge_key(net.rank, a, b) if a in net.rank and b in net.rank else None
            if key is None or key not in net.edge_set:
                raise ModelError("arc (%s, %s) is not an edge of the network" % (a, b))
            if key in direction:
                raise ModelError("edge [%s, %s] oriented twice" % key)
            direction[key] = (a, b)
        missing = [e for e in net.edges if e not in direction]
        if missing:
            raise ModelError("edge [%s, %s] has no direction" % missing[0])
        self._arcs = tuple(direction[e] for e in net.sorted_edges())
        self._direction = direction

    @property
    def arcs(self) -> Tuple[Arc, ...]:
        return self._arcs

    def direction(self, a: str, b: str) -> Arc:
        key = (a, b) if (a, b) in self._direction else (b, a)
        return self._direction[key]

    def __eq__(self, other):
        return isinstance(other, Orientation) and set(self._arcs) == set(other._arcs)

    def __hash__(self):
        return hash(frozenset(self._arcs))

    def __repr__(self):
        return "Orientation(%s)" % ", ".join("%s->%s" % a for a in self._arcs)


def scale_instance(net: Network, q: int) -> Network:
    """Multiply every production, capacity and demand by ``q``."""
    if q < 1:
        raise ModelError("scale factor must be a positive integer")
    return net.with_values({v.id: (None if v.value is None else v.value * q)
                            for v in net.nodes})


def parse_network(text: str) -> Network:
    """Parse an instance document into a validated network."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError("instance is not valid JSON (line %d, column %d): %s"
                         % (exc.lineno, exc.colno, exc.msg))
    return network_from_dict(doc)


def network_from_dict(doc) -> Network:
    if not isinstance(doc, dict):
        raise ModelError("instance must be a JSON object")
    if "nodes" not in doc or "edges" not in doc:
        raise ModelError("instance needs 'nodes' and 'edges' fields")
    nodes = []
    for k, item in enumerate(doc["nodes"]):
        if not isinstance(item, dict):
            raise ModelError("nodes[%d]: expected an object" % k)
        nid = item.get("id")
        kind = item.get("kind")
        if not isinstance(nid, str):
            raise ModelError("nodes[%d]: 'id' must be a string" % k)
        field = {SOURCE: "prod", SWITCH: "cap", SINK: "pow"}.get(kind)
        if field is None:
            raise ModelError("nodes[%d] (%s): unknown kind %r" % (k, nid, kind))
        if field not in item:
            raise ModelError("nodes[%d] (%s): missing field %r" % (k, nid, field))
        value = item[field]
        if kind == SWITCH and value == UNBOUNDED:
            value = None
        elif not isinstance(value, int) or isinstance(value, bool):
            raise ModelError("nodes[%d] (%s): field %r must be an integer"
                             % (k, nid, field))
        nodes.append(Node(nid, kind, value))
    edges = []
    for k, e in enumerate(doc["edges"]):
        if not isinstance(e, (list, tuple)) or len(e) != 2:
            raise ModelError("edges[%d]: expected a pair of node ids" % k)
        edges.append((e[0], e[1]))
    return Network(nodes, edges, doc.get("numbering"))


def network_to_dict(net: Network) -> dict:
    field = {SOURCE: "prod", SWITCH: "cap", SINK: "pow"}
    nodes = []
    for v in net.nodes:
        value = UNBOUNDED if v.value is None else v.value
        nodes.append({"id": v.id, "kind": v.kind, field[v.kind]: value})
    return {"nodes": nodes, "edges": [list(e) for e in net.edges],
            "numbering": list(net.numbering)}


def serialize_network(net: Network) -> str:
    return json.dumps(network_to_dict(net))


def parse_orientation(net: Network, text: str) -> Orientation:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError("orientation is not valid JSON (line %d, column %d): %s"
                         % (exc.lineno, exc.colno, exc.msg))
    if not isinstance(doc, dict) or "arcs" not in doc:
        raise ModelError("orientation needs an 'arcs' field")
    arcs = []
    for k, a in enumerate(doc["arcs"]):
        if not isinstance(a, (list, tuple)) or len(a) != 2:
            raise ModelError("arcs[%d]: expected a pair of node ids" % k)
        arcs.append((a[0], a[1]))
    return Orientation(net, arcs)


def orientation_to_dict(o: Orientation) -> dict:
    return {"arcs": [list(a) for a in o.arcs]}


def serialize_orientation(o: Orientation) -> str:
    return json.dumps(orientation_to_dict(o))


def as_fraction(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)
