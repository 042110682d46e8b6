"""
Rounded flows
=============

The approximation scheme works on flows rounded down to a sparse grid. Each
value keeps a fixed number of binary digits relative to its magnitude, so
the relative error stays below eps' while the grid stays polynomial.
"""
from fractions import Fraction

from gridtree.model import network_from_dict
from gridtree.rounding import build_grids, round_down_eps

net = network_from_dict({
    "nodes": [{"id": "s", "kind": "source", "prod": 100},
              {"id": "w", "kind": "switch", "cap": 100},
              {"id": "a", "kind": "sink", "pow": 50},
              {"id": "b", "kind": "sink", "pow": 20}],
    "edges": [["s", "w"], ["w", "a"], ["w", "b"]],
})

ctx = build_grids(net, Fraction(1, 10))
print("eps =", ctx.eps)
for x in (1, 10, 20, 50, 99):
    r = round_down_eps(Fraction(x), ctx.eps)
    print("%3d -> %-22s relative loss %.2e" % (x, r, float((x - r) / x)))

# sums are rounded after every addition
print("a(a(10) + 20) =", ctx.oplus([Fraction(10), Fraction(20)], 1))

print("grid size", ctx.flow_grid_size(), "<= bound", round(ctx.size_bound()))
