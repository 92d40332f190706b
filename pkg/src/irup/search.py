"""Branch-and-bound search for classes with a large proper gap.

The class enumeration is extended by a bound on the proper gap of every
class below a node.  With ``V`` the patterns already known feasible and
``U`` the patterns not yet known infeasible, any class ``P`` below the node
satisfies ``V <= P <= U``, hence

    gap(P) = z_D(P) - z_C(P) <= z_D(V) - z_C(U).

Small integer optima also cap the gap (``z_D <= 2`` gives at most
``(n-2)/(n-1)``, ``z_D = 3`` stays below 1), which lets a target gap imply a
minimum bin count.  That minimum is used to seed the infeasible set and to
force complements of feasible patterns infeasible.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .core import GapReport, Instance, Pattern, PatternClass, check_n, full_mask, iter_bits
from .enumeration import CSP, Engine, Node
from .errors import ConsistencyViolation
from .lp import LpSolution, minimize_unit_sum
from .metrics import gaps, z_d_patterns
from .realization import realize

log = logging.getLogger(__name__)

THRESHOLD = "threshold"
MAXIMIZE = "maximize"


@dataclass
class EnumState:
    """A search node in explicit form: fixed-feasible, fixed-infeasible, unclassified."""

    n: int
    p_le: frozenset[int]
    p_gt: frozenset[int]
    p_u: frozenset[int]

    @classmethod
    def from_node(cls, n: int, node: Node) -> EnumState:
        return cls(
            n,
            frozenset(iter_bits(node.le)),
            frozenset(iter_bits(node.gt)),
            frozenset(iter_bits(node.unk)),
        )


def _support_lp(n: int, allowed: Iterable[int]) -> LpSolution:
    return minimize_unit_sum([a for a in allowed if a], n)


def pick_by_multiplier(sol: LpSolution, unk: Iterable[int]) -> int:
    """Unclassified pattern with the largest LP multiplier; smallest num on ties
    and when the LP support misses the unclassified set."""
    unk = sorted(unk)
    best, best_val = None, Fraction(0)
    for a in unk:
        v = sol.values.get(a, 0) if sol.values else 0
        if v > best_val:
            best, best_val = a, v
    return unk[0] if best is None else best


def choose_branch_pattern(state: EnumState) -> Pattern:
    from .dominance import build_table

    if not state.p_u:
        raise ValueError("no unclassified pattern to branch on")
    if len(state.p_u) == 1:
        return Pattern(state.n, next(iter(state.p_u)))
    t = build_table(state.n)
    blocked = t.up_of(state.p_gt)
    allowed = [a for a in range(1 << state.n) if not (blocked >> a) & 1]
    sol = _support_lp(state.n, allowed)
    return Pattern(state.n, pick_by_multiplier(sol, state.p_u))


def min_bins_for_gap(n: int, delta: Fraction, strict: bool) -> int:
    """Smallest optimum a class can have if its gap is to reach ``delta``."""
    if delta > 0 or strict:
        floor = 2
    else:
        return 1
    two_bin_cap = Fraction(n - 2, n - 1) if n > 1 else Fraction(0)
    if delta > two_bin_cap or (strict and delta == two_bin_cap):
        floor = 3
    if delta >= 1:
        floor = 4
    return floor


@dataclass
class Found:
    cls: PatternClass
    instance: Instance
    report: GapReport


@dataclass
class SearchResult:
    n: int
    best: Fraction | None
    found: list[Found] = field(default_factory=list)
    nodes: int = 0
    pruned: int = 0

    @property
    def count(self) -> int:
        return len(self.found)


class GapSearch:
    def __init__(
        self,
        n: int,
        delta: Fraction = Fraction(0),
        mode: str = THRESHOLD,
        strict: bool = False,
        zd_floor: int | None = None,
        on_prune: Callable[[Node], None] | None = None,
        verify: bool = True,
    ):
        check_n(n)
        if delta < 0:
            raise ValueError("delta must be nonnegative")
        if mode not in (THRESHOLD, MAXIMIZE):
            raise ValueError(f"unknown mode {mode!r}")
        self.n = n
        self.delta = Fraction(delta)
        self.mode = mode
        self.strict = strict
        self.zd_floor = zd_floor or 1
        self.on_prune = on_prune
        self.verify = verify
        self.engine = Engine(n, CSP)
        self.table = self.engine.table
        self.full = full_mask(n)
        self.best: Fraction | None = None
        self.hits: list[tuple[int, Fraction]] = []
        self.nodes = 0
        self.pruned = 0
        self.two_bin_cap = Fraction(n - 2, n - 1) if n > 1 else Fraction(0)

    # -- thresholds -----------------------------------------------------------

    def target(self) -> tuple[Fraction, bool]:
        """Current ``(value, strict)``: only gaps ``>= value`` (``>`` if strict) matter."""
        if self.mode == MAXIMIZE and self.best is not None and self.best > self.delta:
            return self.best, False
        return self.delta, self.strict

    def reaches(self, gap: Fraction) -> bool:
        value, strict = self.target()
        return gap > value if strict else gap >= value

    def min_bins(self) -> int:
        value, strict = self.target()
        return max(self.zd_floor, min_bins_for_gap(self.n, value, strict))

    def gap_bound(self, zd_v: int, zc_u: Fraction) -> Fraction:
        bound = zd_v - zc_u
        if zd_v <= 1:
            return Fraction(0)
        if zd_v == 2:
            bound = min(bound, self.two_bin_cap)
        return bound

    # -- node state updates ---------------------------------------------------

    def force_infeasible(self, node: Node, f: int) -> Node | None:
        """Add ``f`` to the infeasible side; None if it is already known feasible."""
        t = self.table
        closure = t.down_of(iter_bits(node.le))
        if (closure >> f) & 1:
            return None
        if t.down[f] & node.gt:
            return node
        up = t.up[f]
        return node._replace(gt=(node.gt & ~up) | (1 << f), unk=node.unk & ~up, witness=None)

    def complement_cuts(self, node: Node, a: int) -> Node | None:
        need = self.min_bins()
        if need >= 3:
            node = self.force_infeasible(node, self.full ^ a)
            if node is None:
                return None
        if need >= 4:
            for b in list(iter_bits(node.le)):
                if b == a:
                    continue
                node = self.force_infeasible(node, self.full ^ (a | b))
                if node is None:
                    return None
        return node

    def seed(self, node: Node) -> Node | None:
        need = self.min_bins()
        if need >= 4 and self.n >= 3:
            # any n-2 items in one bin leave two bins for the rest
            node = self.force_infeasible(node, (1 << (self.n - 2)) - 1)
        return node

    # -- search ---------------------------------------------------------------

    def run(self, threads: int = 1, split_depth: int = 6) -> SearchResult:
        root = self.seed(self.engine.root())
        stack = [] if root is None else [root]
        if threads <= 1:
            self._walk(stack)
            return self._result()
        # subtrees below a fixed depth go to worker processes; each starts
        # from the incumbent known at split time, merged in frontier order
        frontier = self._walk(stack, max_depth=split_depth)
        params = (self.n, self.delta, self.mode, self.strict, self.zd_floor, self.best)
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for hits, nodes, pruned in pool.map(_subtree, [(params, f) for f in frontier]):
                self.nodes += nodes
                self.pruned += pruned
                for le, gap in hits:
                    self._record(le, gap)
        return self._result()

    def _walk(self, stack: list[Node], max_depth: int | None = None) -> list[Node]:
        eng = self.engine
        frontier: list[Node] = []
        while stack:
            node = stack.pop()
            if max_depth is not None and node.depth >= max_depth and node.unk:
                frontier.append(node)
                continue
            self.nodes += 1
            alive, w = eng.check(node, force=True)
            if not alive:
                continue
            closure = self.table.down_of(iter_bits(node.le))
            blocked = self.table.up_of(iter_bits(node.gt))
            allowed = [a for a in range(1, 1 << self.n) if not (blocked >> a) & 1]
            zd_v = z_d_patterns(iter_bits(closure), self.n)
            if zd_v < self.min_bins():
                self._prune(node)
                continue
            sol = _support_lp(self.n, allowed)
            zc_u = sol.objective
            if not node.unk:
                gap = zd_v - zc_u
                if self.reaches(gap):
                    self._record(node.le, gap)
                continue
            if not self.reaches(self.gap_bound(zd_v, zc_u)):
                self._prune(node)
                continue
            a = pick_by_multiplier(sol, iter_bits(node.unk))
            feas, infeas = eng.children(node, a, w)
            feas = self.complement_cuts(feas, a)
            stack.append(infeas)
            if feas is not None:
                stack.append(feas)
        return frontier

    def _prune(self, node: Node) -> None:
        self.pruned += 1
        if self.on_prune is not None:
            self.on_prune(node)

    def _record(self, le: int, gap: Fraction) -> None:
        if self.mode == MAXIMIZE and (self.best is None or gap > self.best):
            self.best = gap
            self.hits = [(h, g) for h, g in self.hits if g >= gap]
        elif self.mode == THRESHOLD and (self.best is None or gap > self.best):
            self.best = gap
        self.hits.append((le, gap))

    def _result(self) -> SearchResult:
        res = SearchResult(self.n, self.best, nodes=self.nodes, pruned=self.pruned)
        hits = self.hits
        if self.mode == MAXIMIZE:
            hits = [(le, g) for le, g in hits if g == self.best]
        for le, gap in hits:
            cls = self.engine.make_class(le)
            inst = realize(cls)
            report = gaps(inst) if self.verify else None
            if report is not None and report.delta_proper != gap:
                raise ConsistencyViolation(
                    f"search gap {gap} disagrees with recomputed {report.delta_proper} for {inst}"
                )
            res.found.append(Found(cls, inst, report))
        return res


def _subtree(args) -> tuple[list[tuple[int, Fraction]], int, int]:
    (n, delta, mode, strict, zd_floor, best), node = args
    gs = GapSearch(n, delta, mode, strict, zd_floor, verify=False)
    gs.best = best
    gs._walk([node])
    return gs.hits, gs.nodes, gs.pruned


def search_max_gap(
    n: int,
    delta: Fraction = Fraction(0),
    mode: str = THRESHOLD,
    strict: bool = False,
    zd_floor: int | None = None,
    threads: int = 1,
) -> list[tuple[PatternClass, Instance, GapReport]]:
    res = GapSearch(n, Fraction(delta), mode, strict, zd_floor).run(threads)
    return [(f.cls, f.instance, f.report) for f in res.found]
