"""
Flows and objectives on an eight-node network
=============================================

Two sources feed three sinks through three switches. We evaluate a few
orientations by hand, then let the solvers search for good ones.
"""
from fractions import Fraction

from gridtree.exact_solver import solve_min_max_load
from gridtree.flow import check_feasible, compute_flow, objectives
from gridtree.model import Orientation, network_from_dict
from gridtree.oracle import brute_force_all

net = network_from_dict({
    "nodes": [
        {"id": "s1", "kind": "source", "prod": 100},
        {"id": "s2", "kind": "source", "prod": 20},
        {"id": "w1", "kind": "switch", "cap": 60},
        {"id": "w2", "kind": "switch", "cap": 20},
        {"id": "w3", "kind": "switch", "cap": 35},
        {"id": "p1", "kind": "sink", "pow": 50},
        {"id": "p2", "kind": "sink", "pow": 20},
        {"id": "p3", "kind": "sink", "pow": 10},
    ],
    "edges": [["s1", "w1"], ["s1", "p3"], ["s2", "w3"], ["w1", "p1"],
              ["w2", "w1"], ["w2", "w3"], ["w3", "p2"]],
})

# w2 is fed from both sides and forwards nothing
both = Orientation(net, [("s1", "w1"), ("s1", "p3"), ("s2", "w3"), ("w1", "p1"),
                         ("w3", "p2"), ("w1", "w2"), ("w3", "w2")])
fa = compute_flow(net, both)
for arc in sorted(fa.arc_flow):
    print(arc, fa.arc_flow[arc])
print("min load, max load, reserve:", objectives(net, fa))

# w2 relays s1's surplus towards p2
relay = Orientation(net, [("s1", "w1"), ("s1", "p3"), ("s2", "w3"), ("w1", "p1"),
                          ("w1", "w2"), ("w2", "w3"), ("w3", "p2")])
print("relay:", objectives(net, compute_flow(net, relay)))

# reversing p2 leaves it unfed
bad = Orientation(net, [("s1", "w1"), ("s1", "p3"), ("s2", "w3"), ("w1", "p1"),
                        ("w2", "w1"), ("w3", "w2"), ("p2", "w3")])
print("violations:", check_feasible(net, bad).pairs())

# search
count, best = brute_force_all(net)
print("feasible orientations:", count)
o, value = solve_min_max_load(net)
print("smallest max load:", value, "(enumeration: %s)" % best["min-m"][1])
assert value == Fraction(7, 10)
