"""Instance generators: random trees, the binary path gadget, the Subset-Sum
reduction with its witness orientation, and the amplified instance used for
the inapproximability argument.
"""
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .flow import check_feasible, compute_flow, objectives
from .model import SINK, SOURCE, SWITCH, Arc, ModelError, Network, Node, Orientation


# -- random trees -------------------------------------------------------------

@dataclass(frozen=True)
class Profile:
    weights: Tuple[float, float, float]  # source, switch, sink
    prod: Tuple[int, int]
    cap: Tuple[int, int]
    unbounded: float
    pow: Tuple[int, int]


PROFILES = {
    "default": Profile((0.3, 0.3, 0.4), (10, 60), (5, 80), 0.25, (1, 20)),
    "generous": Profile((0.3, 0.3, 0.4), (40, 100), (40, 200), 0.5, (1, 15)),
    "tight": Profile((0.25, 0.35, 0.4), (5, 30), (5, 40), 0.1, (1, 20)),
}


def prufer_edges(seq: Sequence[int], n: int) -> List[Tuple[int, int]]:
    """Decode a Prüfer sequence over 0..n-1 into the n-1 tree edges."""
    import heapq
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    leaves = [i for i in range(n) if degree[i] == 1]
    heapq.heapify(leaves)
    edges = []
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, x))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    edges.append((heapq.heappop(leaves), heapq.heappop(leaves)))
    return edges


def gen_random_tree(n: int, seed: int, profile="default") -> Network:
    """Seeded random tree with at least one source and one sink."""
    if n < 2:
        raise ModelError("a tree needs at least two nodes")
    prof = PROFILES[profile] if isinstance(profile, str) else profile
    if prof.weights[0] <= 0:
        raise ModelError("profile produces no sources")
    rng = random.Random(seed)
    kinds = rng.choices((SOURCE, SWITCH, SINK), weights=prof.weights, k=n)
    if SOURCE not in kinds:
        kinds[rng.randrange(n)] = SOURCE
    if SINK not in kinds:
        spots = [i for i, k in enumerate(kinds) if k != SOURCE] or list(range(1, n))
        kinds[rng.choice(spots)] = SINK
    counters = {SOURCE: 0, SWITCH: 0, SINK: 0}
    prefix = {SOURCE: "s", SWITCH: "w", SINK: "p"}
    nodes = []
    for kind in kinds:
        counters[kind] += 1
        nid = "%s%d" % (prefix[kind], counters[kind])
        if kind == SOURCE:
            value = rng.randint(*prof.prod)
        elif kind == SINK:
            value = rng.randint(*prof.pow)
        else:
            value = None if rng.random() < prof.unbounded else rng.randint(*prof.cap)
        nodes.append(Node(nid, kind, value))
    seq = [rng.randrange(n) for _ in range(n - 2)]
    edges = [(nodes[a].id, nodes[b].id) for a, b in prufer_edges(seq, n)]
    return Network(nodes, edges)


# -- gadget -------------------------------------------------------------------

def gadget_bits(x: int, m: int) -> List[int]:
    if m < 3:
        raise ModelError("the gadget needs m >= 3")
    if x < 0 or x + 2 >= 1 << m:
        raise ModelError("x + 2 must be below 2^m")
    return [(x + 2) >> j & 1 for j in range(m)]


def _gadget(x: int, m: int, prefix: str, terminal: str):
    """Nodes, edges and forced arcs of the path p_1, s_1, ..., p_m, s_m, terminal."""
    bits = gadget_bits(x, m)
    nodes, edges, arcs = [], [], []
    chain = []
    for j in range(1, m + 1):
        p, s = "%sp%d" % (prefix, j), "%ss%d" % (prefix, j)
        nodes.append(Node(p, SINK, 2 + bits[j - 1]))
        nodes.append(Node(s, SOURCE, 2 if j == 1 else 3))
        edges.append((p, s))
        arcs.append((s, p))
        if j > 1:
            edges.append((chain[-1][1], p))
            arcs.append((p, chain[-1][1]))
        chain.append((p, s))
    last = chain[-1][1]
    edges.append((last, terminal))
    arcs.append((terminal, last))
    return nodes, edges, arcs, chain


def gen_gadget(x: int, m: int, terminal: str = SOURCE, terminal_value: Optional[int] = 3,
               prefix: str = "") -> Network:
    """The 2m-node gadget attached to a terminal node ``v`` of the given kind."""
    nodes, edges, _, _ = _gadget(x, m, prefix, "v")
    if terminal == SWITCH:
        nodes.append(Node("v", SWITCH, terminal_value))
    else:
        nodes.append(Node("v", terminal, terminal_value))
    return Network(nodes, edges)


def gadget_orientation(net: Network, m: int, prefix: str = "", terminal: str = "v") -> Orientation:
    """The all-leftward orientation forced on a standalone gadget."""
    return Orientation(net, _gadget_arcs(m, prefix, terminal))


def _gadget_arcs(m: int, prefix: str, terminal: str) -> List[Arc]:
    arcs = []
    for j in range(1, m + 1):
        arcs.append(("%ss%d" % (prefix, j), "%sp%d" % (prefix, j)))
        if j > 1:
            arcs.append(("%sp%d" % (prefix, j), "%ss%d" % (prefix, j - 1)))
    arcs.append((terminal, "%ss%d" % (prefix, m)))
    return arcs


def gadget_power(x: int, m: int) -> Fraction:
    return 2 + Fraction(x, 1 << m)


# -- Subset-Sum reduction -----------------------------------------------------

@dataclass
class ReductionMeta:
    n_items: int
    B: int
    xs: Tuple[int, ...]
    scale: int
    m: int
    N: int
    roles: Dict[str, object]
    extra: Dict[str, object] = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"n_items": self.n_items, "B": self.B, "xs": list(self.xs), "scale": self.scale,
               "m": self.m, "N": self.N, "roles": self.roles}
        out.update({k: (str(v) if isinstance(v, Fraction) else v) for k, v in self.extra.items()})
        return out


def choose_m(xs: Sequence[int], B: int) -> int:
    """Smallest m >= 3 meeting every bit-size condition of the reduction."""
    n = len(xs)
    m = 3
    while True:
        top = 1 << m
        if (top > B and top > sum(xs) - B and all(x * (3 * n + 1) < top for x in xs)
                and B + 2 < top):
            return m
        m += 1


def gen_subset_sum_reduction(xs: Sequence[int], B: int,
                             strict: bool = False) -> Tuple[Network, ReductionMeta]:
    """Tree whose least load reserve is 2/3 exactly when some subset of xs sums to B.

    Items equal to 1 would need a gadget value x + 2 = 2^m, so when any item
    is 1 every item and B are doubled first (the Subset-Sum answer is
    unchanged); ``meta.scale`` records this.
    """
    xs = [int(x) for x in xs]
    n = len(xs)
    if n < 7:
        raise ModelError("the reduction needs at least 7 items")
    if B < 1 or any(not 1 <= x <= B for x in xs):
        raise ModelError("items must satisfy 1 <= x_i <= B")
    scale = 2 if 1 in xs else 1
    xs = [scale * x for x in xs]
    B = scale * B
    m = choose_m(xs, B)
    nodes: List[Node] = []
    edges: List[Arc] = []
    roles: Dict[str, object] = {"w": "w", "s": "s", "sc": "sc", "wc": "wc", "pc": "pc",
                                "p_gadget": [], "p_i_gadgets": []}
    for key in ("w_i", "v_i", "t_i", "r_i", "s_i", "q_i", "p_i"):
        roles[key] = []
    for i in range(1, n + 1):
        for key, fmt in (("w_i", "w%d"), ("v_i", "v%d"), ("t_i", "t%d"), ("r_i", "r%d"),
                         ("s_i", "s%d"), ("q_i", "q%d"), ("p_i", "p%d")):
            roles[key].append(fmt % i)
    nodes.append(Node("w", SWITCH, None))
    nodes.append(Node("s", SOURCE, 6))
    nodes.append(Node("sc", SOURCE, 10))
    nodes.append(Node("wc", SWITCH, None))
    nodes.append(Node("pc", SINK, 10))
    for i in range(1, n + 1):
        nodes += [Node("w%d" % i, SWITCH, None), Node("v%d" % i, SWITCH, None),
                  Node("t%d" % i, SOURCE, 4), Node("r%d" % i, SOURCE, 4),
                  Node("s%d" % i, SOURCE, 2), Node("q%d" % i, SINK, 4), Node("p%d" % i, SINK, 1)]
        edges += [("p%d" % i, "t%d" % i), ("t%d" % i, "w%d" % i), ("w%d" % i, "w"),
                  ("q%d" % i, "r%d" % i), ("r%d" % i, "v%d" % i), ("v%d" % i, "w"),
                  ("s%d" % i, "w")]
    edges += [("s%d" % n, "wc"), ("wc", "sc"), ("pc", "sc"), ("s", "w")]
    for i, x in enumerate(xs, start=1):
        prefix = "g%d_" % i
        g_nodes, g_edges, _, chain = _gadget((1 << m) - 2 * x, m, prefix, "p%d" % i)
        nodes += g_nodes
        edges += g_edges
        roles["p_i_gadgets"].append([list(pair) for pair in chain])
    g_nodes, g_edges, _, chain = _gadget(B, m, "gp_", "w")
    nodes += g_nodes
    edges += g_edges
    roles["p_gadget"] = [list(pair) for pair in chain]
    if strict:
        total = sum(node.value for node in nodes if node.kind == SINK)
        nodes = [Node(v.id, v.kind, total) if v.kind == SWITCH else v for v in nodes]
    net = Network(nodes, edges)
    N = 2 * m * (n + 1) + 7 * n + 5
    assert net.n == N
    return net, ReductionMeta(n, B, tuple(xs), scale, m, N, roles)


def free_edges(meta: ReductionMeta) -> List[Arc]:
    """The 2n edges [t_i, w_i] and [r_i, v_i] left free by the forcing argument."""
    out = []
    for t, w, r, v in zip(meta.roles["t_i"], meta.roles["w_i"], meta.roles["r_i"], meta.roles["v_i"]):
        out += [(t, w), (r, v)]
    return out


def forced_arcs(meta: ReductionMeta) -> List[Arc]:
    roles = meta.roles
    arcs = [("s", "w"), ("sc", "pc"), ("s%d" % meta.n_items, "wc"), ("sc", "wc")]
    for i in range(meta.n_items):
        arcs += [("w", roles["w_i"][i]), ("w", roles["v_i"][i]), (roles["t_i"][i], roles["p_i"][i]),
                 (roles["r_i"][i], roles["q_i"][i]), (roles["s_i"][i], "w")]
        arcs += _gadget_arcs(meta.m, "g%d_" % (i + 1), roles["p_i"][i])
    arcs += _gadget_arcs(meta.m, "gp_", "w")
    return arcs


def choice_arcs(meta: ReductionMeta, in_w: Iterable[int], in_v: Iterable[int]) -> List[Arc]:
    """Free-edge arcs: w_i -> t_i for i in in_w, r_i -> v_i for i in in_v (1-based)."""
    in_w, in_v = set(in_w), set(in_v)
    arcs = []
    roles = meta.roles
    for i in range(1, meta.n_items + 1):
        t, w, r, v = roles["t_i"][i - 1], roles["w_i"][i - 1], roles["r_i"][i - 1], roles["v_i"][i - 1]
        arcs.append((w, t) if i in in_w else (t, w))
        arcs.append((r, v) if i in in_v else (v, r))
    return arcs


def witness_orientation(net: Network, meta: ReductionMeta, I: Iterable[int]) -> Orientation:
    """Orientation built from an index subset I (1-based): w_i -> t_i and r_i -> v_i iff i in I."""
    I = set(I)
    if any(not 1 <= i <= meta.n_items for i in I):
        raise ModelError("subset indices must lie in 1..n")
    arcs = forced_arcs(meta) + choice_arcs(meta, I, I)
    arcs += [(src, sink) for src, sink in meta.extra.get("amplifiers", [])]
    return Orientation(net, arcs)


def restricted_orientations(net: Network, meta: ReductionMeta) -> Iterator[Tuple[Tuple[int, ...], Tuple[int, ...], Orientation]]:
    """All 4^n orientations that keep the forced arcs and vary the free edges.

    Yields (in_w, in_v, orientation) with the 1-based index sets of
    w_i -> t_i and r_i -> v_i arcs.
    """
    base = forced_arcs(meta) + [tuple(a) for a in meta.extra.get("amplifiers", [])]
    n = meta.n_items
    subsets = [tuple(i + 1 for i in range(n) if mask >> i & 1) for mask in range(1 << n)]
    for in_w in subsets:
        for in_v in subsets:
            yield in_w, in_v, Orientation(net, base + choice_arcs(meta, in_w, in_v))


def restricted_min_reserve(net: Network, meta: ReductionMeta):
    """(number of feasible restricted orientations, least reserve among them or None)."""
    count, best = 0, None
    for _, _, o in restricted_orientations(net, meta):
        fa = compute_flow(net, o)
        if not check_feasible(net, o, fa=fa).feasible:
            continue
        count += 1
        reserve = objectives(net, fa)[2]
        if best is None or reserve < best:
            best = reserve
    return count, best


# -- amplified instance -------------------------------------------------------

def gen_inapprox_instance(xs: Sequence[int], B: int, c: int = 1,
                          max_bits: int = 1 << 16) -> Tuple[Network, ReductionMeta]:
    """The reduction with every source but s amplified by a sink of power H.

    The production of s becomes L = 2 + 2^-m / (r (n + 1)) with
    r = 2^(K^c) and K the node count of the result; the instance is then
    scaled by the denominator of L.
    """
    if c < 1:
        raise ModelError("c must be a positive integer")
    base, meta = gen_subset_sum_reduction(xs, B)
    n, m = meta.n_items, meta.m
    amplified = [v.id for v in base.nodes if v.kind == SOURCE and v.id != "s"]
    K = base.n + len(amplified)
    if K ** c > max_bits:
        raise ModelError("r = 2^(K^c) exceeds the integer budget")
    r = 1 << (K ** c)
    L = 2 + Fraction(1, (1 << m) * r * (n + 1))
    xi = (1 - 2 / L) / 2
    H = math.ceil(10 * (1 - xi) / xi)
    q = L.denominator
    if H.bit_length() + q.bit_length() > 4 * max_bits:
        raise ModelError("amplification constants exceed the integer budget")
    nodes, edges, pairs = [], list(base.edges), []
    for v in base.nodes:
        if v.id == "s":
            nodes.append(Node("s", SOURCE, L.numerator))
        elif v.kind == SOURCE:
            nodes.append(Node(v.id, SOURCE, q * (v.value + H)))
        elif v.value is None:
            nodes.append(v)
        else:
            nodes.append(Node(v.id, v.kind, q * v.value))
    for sid in amplified:
        hid = "h_" + sid
        nodes.append(Node(hid, SINK, q * H))
        edges.append((sid, hid))
        pairs.append([sid, hid])
    net = Network(nodes, edges)
    meta.extra = {"c": c, "r_bits": K ** c, "L": L, "xi": xi, "H": H, "scale_q": q,
                  "amplifiers": pairs, "K": net.n}
    return net, meta
