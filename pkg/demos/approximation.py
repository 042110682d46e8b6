"""
Approximate max-min load and load reserve
=========================================

Compare the approximation scheme with exhaustive enumeration on random
trees, for two accuracy levels.
"""
import time
from fractions import Fraction

from gridtree.fptas import solve_max_min_load_fptas, solve_min_reserve_fptas
from gridtree.hardgen import gen_random_tree
from gridtree.oracle import brute_force_all

for eps_prime in (Fraction(1, 4), Fraction(1, 10)):
    print("eps' =", eps_prime)
    for seed in range(6):
        net = gen_random_tree(9, seed, "generous")
        count, best = brute_force_all(net)
        if not count:
            print("  seed %d: infeasible" % seed)
            continue
        start = time.perf_counter()
        stats = {}
        _, m = solve_max_min_load_fptas(net, eps_prime, stats)
        _, r = solve_min_reserve_fptas(net, eps_prime)
        elapsed = time.perf_counter() - start
        print("  seed %d: m %.4f (best %.4f)  R %.4f (best %.4f)  %d entries  %.2fs"
              % (seed, m, best["max-m"][1], r, best["min-r"][1], stats["entries"], elapsed))
