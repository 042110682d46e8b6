import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from fixtures import fig1, pair
from gridtree.exact_solver import (ExactTables, hanging_pairs, solve_min_max_load, termination_gap,
                                   truncate_productions, valid)
from gridtree.flow import check_feasible
from gridtree.hardgen import gen_random_tree
from gridtree.model import INF, NEG_INF, ModelError
from gridtree.oracle import (brute_force_i_table, brute_force_o_values, brute_force_optimum,
                             brute_force_valid)
from gridtree.rounding import context_from_eps


def test_hanging_pairs_cover_every_arc():
    net = fig1()
    pairs = hanging_pairs(net)
    assert len(pairs) == 2 * len(net.edges)
    assert set(pairs) == {(a, b) for a, b in net.edges} | {(b, a) for a, b in net.edges}
    sizes = [len(net.side(p, c)) for p, c in pairs]
    assert sizes == sorted(sizes)


def test_sample_valid_and_min_max_load():
    net = fig1()
    o = valid(net)
    assert o is not None and check_feasible(net, o).feasible
    stats = {}
    o, value = solve_min_max_load(net, stats)
    assert value == Fraction(7, 10)
    assert check_feasible(net, o).feasible
    n, sigma = net.n, net.max_production()
    assert stats["iterations"] <= 4 * n * math.log2(n * sigma)


def test_infeasible_pair():
    assert valid(pair(4, 5)) is None
    stats = {}
    assert solve_min_max_load(pair(4, 5), stats) is None
    assert stats["iterations"] == 0


def test_truncate_productions():
    net = truncate_productions(fig1(), Fraction(7, 10))
    assert net.prod("s1") == 700 and net.prod("s2") == 140
    assert net.pow("p1") == 500 and net.cap("w2") == 200
    with pytest.raises(ModelError):
        truncate_productions(fig1(), 0)


def test_termination_gap():
    assert termination_gap(pair(3, 1)) == Fraction(1, (4 * 3) ** 4)


def _check_tables(net):
    tables = ExactTables(net)
    ctx = context_from_eps(net, 1)
    for a, b in net.sorted_edges():
        for u, v in ((a, b), (b, a)):
            table = brute_force_i_table(net, u, v, ctx, 0, 1)
            expected_i = min(table.values()) if table else INF
            assert tables.i[(u, v)][0] == expected_i
            expected_o = brute_force_o_values(net, u, v, [0], ctx, 0, 1)[0]
            assert tables.o[(u, v)][0] == expected_o


@settings(max_examples=60, deadline=None)
@given(n=st.integers(2, 10), seed=st.integers(0, 10 ** 6),
       profile=st.sampled_from(["default", "generous", "tight"]))
def test_agrees_with_enumeration(n, seed, profile):
    net = gen_random_tree(n, seed, profile)
    _check_tables(net)
    o = valid(net)
    assert (o is not None) == brute_force_valid(net)
    if o is not None:
        assert check_feasible(net, o).feasible
    best = brute_force_optimum(net, "min-m")
    got = solve_min_max_load(net)
    assert (best is None) == (got is None)
    if got is not None:
        assert got[1] == best[1]
        assert check_feasible(net, got[0]).feasible


def test_unbounded_and_leaf_switch():
    # a leaf switch can only be fed, it forwards nothing
    from gridtree.model import Network, Node
    net = Network([Node("s", "source", 5), Node("w", "switch", None), Node("p", "sink", 5),
                   Node("x", "switch", 0)], [("s", "w"), ("w", "p"), ("w", "x")])
    o, value = solve_min_max_load(net)
    assert value == 1
    assert ("w", "x") in o.arcs
    assert ExactTables(net).o[("x", "w")][0] is NEG_INF
