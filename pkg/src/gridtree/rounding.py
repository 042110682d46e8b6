"""Magnitude-dependent rounding of flows.

A positive rational f in [2^i, 2^(i+1)) is rounded down to a multiple of
2^i * eps.  Sums are rounded after every term (``oplus``), and the rounded
flow of an orientation is the usual bottom-up sweep with every division
replaced by that fold.  Rounded values live in a finite, implicitly
enumerated grid.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .flow import arc_structure, postorder
from .model import INF, SINK, SOURCE, Arc, ModelError, Network, Orientation

ZERO = Fraction(0)


class GridTooLarge(ModelError):
    """Raised when materializing a grid would exceed the configured budget."""


def floor_log2(f: Fraction) -> int:
    """Largest integer i with 2^i <= f, for f > 0."""
    num, den = f.numerator, f.denominator
    i = num.bit_length() - den.bit_length()
    if i >= 0:
        if num < (den << i):
            i -= 1
    elif (num << -i) < den:
        i -= 1
    return i


def pow2(i: int) -> Fraction:
    return Fraction(1 << i) if i >= 0 else Fraction(1, 1 << -i)


def round_down_eps(f: Fraction, eps: Fraction) -> Fraction:
    """Round f down to a multiple of 2^floor(log2 f) * eps; 0 stays 0."""
    if f == 0:
        return ZERO
    if f < 0:
        raise ValueError("cannot round a negative flow")
    e = pow2(floor_log2(f)) * eps
    return (f // e) * e


def oplus_eps(values: Iterable, d: int, eps: Fraction) -> Fraction:
    """Left fold acc <- a(acc + x / d) starting from 0."""
    if d < 1:
        raise ValueError("divisor must be positive")
    acc = ZERO
    for x in values:
        acc = round_down_eps(acc + Fraction(x) / d, eps)
    return acc


@dataclass(frozen=True)
class RoundingContext:
    """Rounding parameters and the implicit grids of rounded flows and loads.

    The flow grid holds 0 and every v in [lower, total_power] that is a
    multiple of 2^floor(log2 v) * eps.  ``lower`` is the smallest positive
    rounded flow an orientation can produce.
    """

    eps_prime: Optional[Fraction]
    eps: Fraction
    n: int
    rank: Dict[str, int]
    total_power: int
    productions: Tuple[int, ...]
    lower: Fraction

    def round_down(self, f) -> Fraction:
        return round_down_eps(Fraction(f), self.eps)

    def oplus(self, values: Sequence, d: int) -> Fraction:
        return oplus_eps(values, d, self.eps)

    def exponent_range(self) -> Tuple[int, int]:
        if self.total_power == 0:
            return (0, -1)
        return floor_log2(self.lower), floor_log2(Fraction(self.total_power))

    def in_flow_grid(self, v) -> bool:
        v = Fraction(v)
        if v == 0:
            return True
        if v < self.lower or v > self.total_power:
            return False
        return (v / (pow2(floor_log2(v)) * self.eps)).denominator == 1

    def _block(self, i: int) -> Tuple[int, int]:
        """Range of k such that k * 2^i * eps is a grid member of binade i."""
        unit = pow2(i) * self.eps
        lo = max(self.lower, pow2(i))
        k_lo = -((-lo) // unit)
        top = pow2(i + 1)
        if self.total_power < top:
            k_hi = Fraction(self.total_power) // unit
        else:
            k_hi = -((-top) // unit) - 1
        return k_lo, k_hi

    def flow_grid_size(self) -> int:
        lo, hi = self.exponent_range()
        size = 1
        for i in range(lo, hi + 1):
            k_lo, k_hi = self._block(i)
            size += max(0, k_hi - k_lo + 1)
        return size

    def iter_flow_grid(self) -> Iterator[Fraction]:
        """Grid members in increasing order."""
        yield ZERO
        lo, hi = self.exponent_range()
        for i in range(lo, hi + 1):
            unit = pow2(i) * self.eps
            k_lo, k_hi = self._block(i)
            for k in range(k_lo, k_hi + 1):
                yield k * unit

    def flow_grid(self, budget: int = 2_000_000) -> List[Fraction]:
        size = self.flow_grid_size()
        if size > budget:
            raise GridTooLarge("flow grid has %d values, budget is %d" % (size, budget))
        return list(self.iter_flow_grid())

    def in_load_grid(self, x) -> bool:
        x = Fraction(x)
        if x < 0 or x > 1:
            return False
        if x == 0:
            return True
        return any(self.in_flow_grid(x * p) for p in set(self.productions))

    def load_grid(self, budget: int = 2_000_000) -> List[Fraction]:
        grid = self.flow_grid(budget)
        out = {ZERO}
        for p in set(self.productions):
            for v in grid:
                if v > p:
                    break
                out.add(v / p)
        return sorted(out)

    def size_bound(self) -> float:
        """Published bound on the number of grid values (for reporting only)."""
        import math
        if self.total_power == 0:
            return 1.0
        n = self.n
        return (n * math.log2(n) + math.log2(self.total_power) + 1) * (1 + 1 / self.eps) + 1


def _context(net: Network, eps_prime: Optional[Fraction], eps: Fraction,
             lower: Fraction) -> RoundingContext:
    prods = tuple(net.prod(s) for s in net.sources)
    return RoundingContext(eps_prime, eps, net.n, dict(net.rank), net.total_power(),
                           prods, lower)


def build_grids(net: Network, eps_prime) -> RoundingContext:
    """Rounding context for eps = eps_prime / (n^2 + 1)^2."""
    eps_prime = Fraction(eps_prime)
    if not 0 < eps_prime < Fraction(1, 2):
        raise ModelError("eps_prime must lie strictly between 0 and 1/2")
    n = net.n
    eps = eps_prime / (n * n + 1) ** 2
    return _context(net, eps_prime, eps, (1 - eps_prime) / Fraction(n) ** n)


def context_from_eps(net: Network, eps) -> RoundingContext:
    """Context with a directly chosen eps (used by small hand examples)."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ModelError("eps must be positive")
    return _context(net, None, eps, Fraction(1, 2 * net.n ** net.n))


def rounded_entering(net: Network, arcs: Iterable[Arc], ctx: RoundingContext,
                     fixed: Optional[Dict[str, Fraction]] = None) -> Dict[str, object]:
    """Rounded entering flow of every node touched by ``arcs``.

    Successors are folded in numbering order, a sink's own demand first.
    Switches and sinks without entering arcs get INF.
    """
    fixed = fixed or {}
    succ, indeg = arc_structure(arcs, net.rank)
    out: Dict[str, object] = {}
    for v in postorder(succ, stop=fixed):
        if v in fixed:
            out[v] = Fraction(fixed[v])
            continue
        kind = net.kind(v)
        items = [net.pow(v)] if kind == SINK else []
        items += [out[w] for w in succ[v]]
        d = indeg[v] + (1 if kind == SOURCE else 0)
        out[v] = ctx.oplus(items, d) if d else INF
    return out


def rounded_flow(net: Network, o: Orientation, ctx: RoundingContext) -> Dict[Arc, object]:
    """Rounded flow on every arc of an orientation."""
    r = rounded_entering(net, o.arcs, ctx)
    return {(a, b): r[b] for a, b in o.arcs}


def rounded_source_flows(net: Network, o: Orientation, ctx: RoundingContext) -> Dict[str, Fraction]:
    r = rounded_entering(net, o.arcs, ctx)
    return {s: r[s] for s in net.sources}


def rounded_objectives(net: Network, o: Orientation,
                       ctx: RoundingContext) -> Tuple[Fraction, Fraction, Fraction]:
    """(min, max, reserve) of the rounded loads."""
    flows = rounded_source_flows(net, o, ctx)
    if not flows:
        raise ModelError("the network has no source")
    loads = [flows[s] / net.prod(s) for s in flows]
    return min(loads), max(loads), max(loads) - min(loads)
