"""Direct ILP model for the largest proper gap at demand n, in CPLEX LP format.

Binary ``y_a`` marks pattern ``a`` feasible.  Big-M rows tie ``y`` to
integer lengths ``l1..ln`` and capacity ``L``; continuous ``x_a <= y_a``
form a fractional exact cover, so ``sum(x)`` bounds the proper relaxation
from above.  Layer binaries ``yL<i>_a`` (``2 <= i < k``) are forced to 1
whenever ``a`` splits into at most ``i`` feasible patterns, and fixing the
all-ones pattern at layer ``k - 1`` to 0 forces at least ``k`` bins.  The
objective ``k - sum(x)`` then bounds the proper gap from below.

Naming: ``y_<mask>``, ``x_<mask>``, ``yL<i>_<mask>``, ``l<i>``, ``L``.
Monotonicity rows cover every comparable pair of the dominance order and
layer rows every split, redundant or not; presolve is left to the solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import IO, Iterator

from .core import check_n, full_mask, iter_bits
from .dominance import build_table
from .errors import KOutOfRange, NTooLarge
from .lp import LinearSystem

MAX_EXPORT_N = 12


def big_m(n: int) -> int:
    """``ceil(4 n ((n + 1) / 4) ** ((n + 1) / 2))``, computed exactly."""
    # square it so the exponent is an integer: M**2 = 16 n**2 ((n+1)/4)**(n+1)
    sq = 16 * n * n * Fraction(n + 1, 4) ** (n + 1)
    p, q = sq.numerator, sq.denominator
    m = math.isqrt(p // q)
    while m * m * q < p:
        m += 1
    while m > 0 and (m - 1) * (m - 1) * q >= p:
        m -= 1
    return m


@dataclass(frozen=True)
class Row:
    name: str
    terms: tuple[tuple[str, int], ...]
    sense: str  # "<=", ">=", "="
    rhs: int


def y(a: int) -> str:
    return f"y_{a}"


def x(a: int) -> str:
    return f"x_{a}"


def layer(i: int, a: int) -> str:
    return y(a) if i == 1 else f"yL{i}_{a}"


def lengths(n: int) -> list[str]:
    return [f"l{i + 1}" for i in range(n)]


def _check(n: int, k: int) -> None:
    check_n(n, MAX_EXPORT_N)
    if n < 2:
        raise NTooLarge("the direct model needs n >= 2")
    if not 2 <= k <= n:
        raise KOutOfRange(f"k must satisfy 2 <= k <= n, got k={k}, n={n}")


def variables(n: int, k: int) -> dict[str, list[str]]:
    size = 1 << n
    layered = [layer(i, a) for i in range(2, k) for a in range(size)]
    return {
        "binary": [y(a) for a in range(size)] + layered,
        "continuous": [x(a) for a in range(size)],
        "integer": lengths(n) + ["L"],
    }


def rows(n: int, k: int) -> Iterator[Row]:
    _check(n, k)
    size = 1 << n
    full = full_mask(n)
    M = big_m(n)
    ls = lengths(n)

    yield Row("empty", ((y(0), 1),), "=", 1)
    for i in range(n):
        yield Row(f"single_{i + 1}", ((y(1 << i), 1),), "=", 1)
    table = build_table(n)
    for b in range(size):
        for a in iter_bits(table.down[b] & ~(1 << b)):
            yield Row(f"mono_{a}_{b}", ((y(a), 1), (y(b), -1)), ">=", 0)
    for a in range(size):
        load = tuple((ls[i], 1) for i in iter_bits(a))
        yield Row(f"fit_{a}", load + (("L", -1), (y(a), M)), "<=", M)
        yield Row(f"over_{a}", load + (("L", -1), (y(a), M)), ">=", 1)
    for i in range(n - 1):
        yield Row(f"order_{i + 1}", ((ls[i], 1), (ls[i + 1], -1)), "<=", 0)
    yield Row("cap", ((ls[-1], 1), ("L", -1)), "<=", 0)
    for i in range(n):
        terms = tuple((x(a), 1) for a in range(size) if (a >> i) & 1)
        yield Row(f"cover_{i + 1}", terms, "=", 1)
    for a in range(size):
        yield Row(f"use_{a}", ((x(a), 1), (y(a), -1)), "<=", 0)
    for i in range(2, k):
        for a in range(1, size):
            yield Row(f"keep{i}_{a}", ((layer(i, a), 1), (layer(i - 1, a), -1)), ">=", 0)
            # ordered splits a = u + v with disjoint nonempty supports
            u = (a - 1) & a
            while u:
                v = a ^ u
                yield Row(
                    f"join{i}_{u}_{v}",
                    ((layer(i, a), 1), (layer(i - 1, u), -1), (layer(1, v), -1)),
                    ">=",
                    -1,
                )
                u = (u - 1) & a
    yield Row("atleast_k", ((layer(k - 1, full), 1),), "=", 0)


def objective(n: int, k: int) -> tuple[tuple[tuple[str, int], ...], int]:
    """Terms and constant of the maximized objective ``k - sum(x)``."""
    return tuple((x(a), -1) for a in range(1 << n)), k


def class_assignment(n: int, k: int, patterns) -> dict[str, int]:
    """Binary values induced by a feasible pattern set, layers at their minimum.

    ``yL<i>_a`` is 1 exactly when ``a`` splits into at most ``i`` patterns
    of the set.
    """
    pset = set(patterns)
    size = 1 << n
    parts = [n + 1] * size
    parts[0] = 0
    for a in range(1, size):
        low = a & -a
        rest = a ^ low
        s = rest
        while True:
            p = s | low
            if p in pset and parts[a ^ p] + 1 < parts[a]:
                parts[a] = parts[a ^ p] + 1
            if s == 0:
                break
            s = (s - 1) & rest
    out = {y(a): int(a in pset) for a in range(size)}
    for i in range(2, k):
        for a in range(size):
            out[layer(i, a)] = int(parts[a] <= i)
    return out


def fix_binaries(n: int, k: int, fixed: dict[str, int], drop=()) -> LinearSystem:
    """The model with every binary substituted from ``fixed``, as an LP system.

    The remaining variables (lengths, capacity and ``x``) are continuous.
    Rows whose terms are all fixed become constant rows, so a violated one
    makes the system infeasible.  Rows named in ``drop`` are left out.
    """
    var = variables(n, k)
    missing = [v for v in var["binary"] if v not in fixed]
    if missing:
        raise KeyError(f"no value for binaries {missing[:4]}")
    free = var["integer"] + var["continuous"]
    sys = LinearSystem(free)
    drop = set(drop)
    for r in rows(n, k):
        if r.name in drop:
            continue
        terms: dict[str, int] = {}
        rhs = r.rhs
        for name, c in r.terms:
            if name in fixed:
                rhs -= c * fixed[name]
            else:
                terms[name] = terms.get(name, 0) + c
        sys.add_terms(terms, r.sense, rhs)
    for name in var["integer"]:
        sys.add_terms({name: 1}, ">=", 1)
    return sys


def _terms(terms) -> str:
    parts = []
    for name, c in terms:
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        parts.append(f"{sign} {name}" if mag == 1 else f"{sign} {mag} {name}")
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else text


def _wrap(prefix: str, body: str, width: int = 78) -> list[str]:
    words = body.split(" ")
    lines, cur = [], prefix
    for w in words:
        if len(cur) + 1 + len(w) > width and cur.strip():
            lines.append(cur)
            cur = "   "
        cur = f"{cur} {w}" if cur else w
    lines.append(cur)
    return lines


def write_model(n: int, k: int, out: IO[str]) -> None:
    _check(n, k)
    out.write(f"\\ direct proper-gap model, n={n}, k={k}, M={big_m(n)}\n")
    out.write("\\ objective k - sum(x) bounds the proper gap from below given z_D >= k\n")
    out.write("Maximize\n")
    terms, const = objective(n, k)
    for line in _wrap(" obj:", f"{_terms(terms)} + {const}"):
        out.write(line + "\n")
    out.write("Subject To\n")
    for r in rows(n, k):
        for line in _wrap(f" {r.name}:", f"{_terms(r.terms)} {r.sense} {r.rhs}"):
            out.write(line + "\n")
    out.write("Bounds\n")
    for name in lengths(n) + ["L"]:
        out.write(f" {name} >= 1\n")
    var = variables(n, k)
    for section, key in (("General", "integer"), ("Binary", "binary")):
        out.write(f"{section}\n")
        names = var[key]
        for i in range(0, len(names), 8):
            out.write(" " + " ".join(names[i : i + 8]) + "\n")
    out.write("End\n")


def emit_direct_model(n: int, k: int, out: IO[str] | None = None) -> str | None:
    """Write the model to ``out``; return it as a string when ``out`` is None."""
    if out is not None:
        write_model(n, k, out)
        return None
    import io

    buf = io.StringIO()
    write_model(n, k, buf)
    return buf.getvalue()
