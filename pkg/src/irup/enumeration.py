"""Exhaustive generation of all pattern-equivalence classes for demand n.

Depth-first branch over unclassified patterns.  A node holds

* ``le``: antichain of patterns fixed feasible (only maximal ones kept),
* ``gt``: antichain of patterns fixed infeasible (only minimal ones kept),
* ``unk``: the unclassified patterns,

all three as bitsets over the ``2**n`` patterns.  Fixing ``a`` feasible also
fixes everything dominated by ``a``; fixing it infeasible fixes everything
dominating it.  A node is cut as soon as the partial realizability system
for ``le`` / ``gt`` has no solution.  The rational witness of a feasible
node is passed to its children: when it already classifies the new pattern
the right way the child needs no LP at all.
"""

from __future__ import annotations

import logging
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, NamedTuple

from .core import PatternClass, check_n, full_mask, iter_bits
from .dominance import DominanceTable, build_table
from .lp import solve_int_rows
from .realization import suffix_rows

log = logging.getLogger(__name__)

Sink = Callable[[PatternClass], None]

CSP = "csp"
GAME = "game"


class Node(NamedTuple):
    le: int
    gt: int
    unk: int
    depth: int
    witness: tuple | None
    # pattern fixed on the way into this node and whether it was fixed feasible
    last: int
    last_feasible: bool


def bitset(masks) -> int:
    out = 0
    for a in masks:
        out |= 1 << a
    return out


def popcount_rows(n: int) -> list[int]:
    return [a.bit_count() for a in range(1 << n)]


@dataclass
class Engine:
    """Shared branching machinery for class enumeration and game counting."""

    n: int
    mode: str = CSP
    strategy: str = "smallest"
    seed: int | None = None
    lp_every: int = 1

    def __post_init__(self):
        check_n(self.n)
        self.table: DominanceTable = build_table(self.n)
        self.suffix = suffix_rows(self.n)
        self.rng = random.Random(self.seed)
        self.lp_calls = 0
        self.nodes = 0

    # -- initial state --------------------------------------------------------

    def root(self) -> Node:
        n = self.n
        everything = full_mask(1 << n)
        if self.mode == CSP:
            le = 1 << (1 << (n - 1))
            gt = 0
            unk = everything & ~self.table.down[1 << (n - 1)]
        else:
            le = 1
            gt = 1 << full_mask(n)
            unk = everything & ~1 & ~gt
        return Node(le, gt, unk, 0, None, -1, True)

    # -- LP -------------------------------------------------------------------

    def rows(self, le: int, gt: int):
        n, suf = self.n, self.suffix
        if self.mode == CSP:
            rows = [[-1] + [0] * n, [1] * n + [-1]]
            rhs = [-1, 0]
        else:
            rows, rhs = [], []
        for a in iter_bits(le):
            rows.append([*suf[a], -1])
            rhs.append(0)
        for a in iter_bits(gt):
            rows.append([-s for s in suf[a]] + [1])
            rhs.append(-1)
        return rows, rhs

    def solve(self, le: int, gt: int):
        """Witness as increments ``(k, L)``, or None when infeasible."""
        self.lp_calls += 1
        rows, rhs = self.rows(le, gt)
        if not rows:
            return (tuple([Fraction(0)] * self.n), Fraction(0))
        sol = solve_int_rows(rows, rhs, self.n + 1)
        if not sol.ok:
            return None
        return sol.values[: self.n], sol.values[self.n]

    def fits(self, witness, a: int, feasible: bool) -> bool:
        k, L = witness
        load = sum(s * x for s, x in zip(self.suffix[a], k) if s)
        return load <= L if feasible else load >= L + 1

    def check(self, node: Node, force: bool = False) -> tuple[bool, tuple | None]:
        """``(alive, witness)``; the witness is None when the LP was skipped."""
        w = node.witness
        if w is not None and node.last >= 0 and self.fits(w, node.last, node.last_feasible):
            return True, w
        if not force and self.lp_every > 1 and node.depth % self.lp_every:
            return True, None
        w = self.solve(node.le, node.gt)
        return w is not None, w

    # -- branching ------------------------------------------------------------

    def choose(self, node: Node) -> int:
        if self.strategy == "random":
            return self.rng.choice(list(iter_bits(node.unk)))
        unk = node.unk
        return (unk & -unk).bit_length() - 1

    def children(self, node: Node, a: int, witness) -> tuple[Node, Node]:
        t = self.table
        down, up = t.down[a], t.up[a]
        bit = 1 << a
        feas = Node(
            (node.le & ~down) | bit, node.gt, node.unk & ~down,
            node.depth + 1, witness, a, True,
        )
        infeas = Node(
            node.le, (node.gt & ~up) | bit, node.unk & ~up,
            node.depth + 1, witness, a, False,
        )
        return feas, infeas

    def make_class(self, le: int) -> PatternClass:
        closure = self.table.down_of(iter_bits(le))
        return PatternClass(self.n, frozenset(iter_bits(closure)), tuple(iter_bits(le)))

    # -- traversal ------------------------------------------------------------

    def leaves(self, start: Node | None = None, max_depth: int | None = None) -> Iterator[Node]:
        """Depth-first walk yielding realizable leaves (or frontier nodes at ``max_depth``).

        Frontier nodes are yielded before their LP check so subtrees can be
        shipped elsewhere unchecked.
        """
        stack = [start if start is not None else self.root()]
        while stack:
            node = stack.pop()
            if max_depth is not None and node.depth >= max_depth and node.unk:
                yield node
                continue
            self.nodes += 1
            alive, w = self.check(node, force=not node.unk)
            if not alive:
                continue
            if not node.unk:
                yield node
                continue
            a = self.choose(node)
            feas, infeas = self.children(node, a, w)
            stack.append(infeas)
            stack.append(feas)


def _subtree_classes(args) -> tuple[int, list[tuple[int, ...]] | None]:
    n, mode, strategy, seed, lp_every, node, collect = args
    eng = Engine(n, mode, strategy, seed, lp_every)
    count = 0
    out = [] if collect else None
    for leaf in eng.leaves(node):
        count += 1
        if collect:
            out.append(tuple(iter_bits(leaf.le)))
    return count, out


def run(
    n: int,
    sink: Sink | None = None,
    mode: str = CSP,
    strategy: str = "smallest",
    seed: int | None = None,
    lp_every: int = 1,
    threads: int = 1,
    split_depth: int = 8,
) -> int:
    eng = Engine(n, mode, strategy, seed, lp_every)
    if threads <= 1:
        count = 0
        for leaf in eng.leaves():
            count += 1
            if sink is not None:
                sink(eng.make_class(leaf.le))
        log.debug("n=%d: %d nodes, %d LP solves", n, eng.nodes, eng.lp_calls)
        return count

    # split the tree at a fixed depth; emit in frontier order for determinism
    top: list[Node] = list(eng.leaves(max_depth=split_depth))
    jobs = [(n, mode, strategy, seed, lp_every, node, sink is not None) for node in top]
    count = 0
    with ProcessPoolExecutor(max_workers=threads) as pool:
        for node, (c, classes) in zip(top, pool.map(_subtree_classes, jobs)):
            if not node.unk:
                # leaf reached above the split depth; it was already checked
                c, classes = 1, [tuple(iter_bits(node.le))]
            count += c
            if sink is not None:
                for le in classes:
                    sink(eng.make_class(bitset(le)))
    return count


def enumerate_classes(n: int, sink: Sink | None = None, **options) -> int:
    """Call ``sink`` once per class of ``n``-item instances; return the class count."""
    return run(n, sink, mode=CSP, **options)


def histogram_by_zd(n: int, **options) -> dict[int, int]:
    """Number of classes per optimal bin count."""
    from .metrics import z_d_patterns

    hist: dict[int, int] = {}

    def add(c: PatternClass) -> None:
        z = z_d_patterns(c.patterns, n)
        hist[z] = hist.get(z, 0) + 1

    enumerate_classes(n, add, **options)
    return dict(sorted(hist.items()))


def summary_line(n: int, total: int, started: float) -> str:
    return f"{n} {total} {time.perf_counter() - started:.3f}"
