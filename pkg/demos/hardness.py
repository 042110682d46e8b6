"""
Gadgets and the Subset-Sum reduction
====================================

A gadget is a path of alternating sinks and sources that behaves like a
single sink of power 2 + x / 2^m. The reduction glues gadgets into a tree
whose best load reserve is 2/3 exactly when the Subset-Sum instance is
positive.
"""
from gridtree.flow import check_feasible, compute_flow, objectives
from gridtree.hardgen import (gadget_orientation, gadget_power, gen_gadget,
                              gen_subset_sum_reduction, witness_orientation)

m = 4
for x in range(0, 14, 3):
    net = gen_gadget(x, m)
    flow = compute_flow(net, gadget_orientation(net, m)).arc_flow[("v", "s%d" % m)]
    print("x = %2d: %2d nodes, terminal flow %s (expected %s)" % (x, net.n, flow, gadget_power(x, m)))

xs, target = [2, 3, 4, 5, 6, 7, 8], 9
net, meta = gen_subset_sum_reduction(xs, target)
print("reduction: %d nodes, m = %d" % (net.n, meta.m))
for chosen in ([1, 6], [1, 7], [1, 2]):
    o = witness_orientation(net, meta, chosen)
    report = check_feasible(net, o)
    picked = sum(xs[i - 1] for i in chosen)
    if report.feasible:
        print("subset sum %2d: loads in [%s, %s], reserve %s" % ((picked,) + objectives(net, compute_flow(net, o))))
    else:
        print("subset sum %2d: infeasible (%d violations)" % (picked, len(report.pairs())))
