"""Text formats: m-form instance files and one-class-per-line class files.

Instance file::

    m L
    l_1 b_1
    ...
    l_m b_m

Class file line: ``n k m_1 ... m_k`` with the maximal patterns as bitmask
values in decreasing order.  Blank lines and ``#`` comments are skipped in
both formats.
"""

from __future__ import annotations

from typing import IO, Iterable, Iterator

from .core import MAX_N, InstanceM, PatternClass
from .errors import InvalidInstance, ParseError


def _content_lines(text: str) -> Iterator[tuple[int, list[str]]]:
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line.split()


def _ints(fields: list[str], no: int) -> list[int]:
    try:
        return [int(f) for f in fields]
    except ValueError:
        raise ParseError(f"expected integers, got {' '.join(fields)!r}", no) from None


def parse_instance(text: str) -> InstanceM:
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty instance file", 1)
    no, head = lines[0]
    if len(head) != 2:
        raise ParseError(f"header must be 'm L', got {' '.join(head)!r}", no)
    m, L = _ints(head, no)
    if m < 1:
        raise ParseError(f"m must be positive, got {m}", no)
    body = lines[1:]
    if len(body) != m:
        last = body[-1][0] if body else no
        raise ParseError(f"expected {m} item lines, found {len(body)}", last)
    lengths, demands = [], []
    for no, fields in body:
        if len(fields) != 2:
            raise ParseError(f"item line must be 'l b', got {' '.join(fields)!r}", no)
        x, b = _ints(fields, no)
        lengths.append(x)
        demands.append(b)
    try:
        return InstanceM(L, tuple(lengths), tuple(demands))
    except InvalidInstance as exc:
        raise ParseError(str(exc), body[0][0]) from exc


def read_instance(path: str) -> InstanceM:
    with open(path, encoding="ascii") as fh:
        return parse_instance(fh.read())


def format_instance(e: InstanceM) -> str:
    lines = [f"{e.m} {e.L}"] + [f"{x} {b}" for x, b in zip(e.lengths, e.demands)]
    return "\n".join(lines) + "\n"


def parse_class_line(line: str, no: int = 1) -> PatternClass:
    from .realization import class_from_maximal

    fields = _ints(line.split(), no)
    if len(fields) < 2:
        raise ParseError("class line must start with 'n k'", no)
    n, k, masks = fields[0], fields[1], fields[2:]
    if not 1 <= n <= MAX_N:
        raise ParseError(f"n must lie in 1..{MAX_N}, got {n}", no)
    if k != len(masks) or k < 1:
        raise ParseError(f"declared {k} maximal patterns, found {len(masks)}", no)
    bad = [a for a in masks if not 0 <= a < 1 << n]
    if bad:
        raise ParseError(f"pattern {bad[0]} out of range for n={n}", no)
    return class_from_maximal(n, masks)


def parse_classes(text: str) -> list[PatternClass]:
    return [parse_class_line(" ".join(f), no) for no, f in _content_lines(text)]


def read_classes(path: str) -> list[PatternClass]:
    with open(path, encoding="ascii") as fh:
        return parse_classes(fh.read())


def write_classes(classes: Iterable[PatternClass], out: IO[str]) -> int:
    count = 0
    for c in classes:
        out.write(c.to_line() + "\n")
        count += 1
    return count
