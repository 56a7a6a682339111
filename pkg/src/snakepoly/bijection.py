"""Bargraphs of width h-1 correspond one-to-one with bubbles of width h.

Frame: bargraph rows are stacked bottom to top, each left-justified so that
row y occupies columns 1..L_y. The bubble lives in columns >= 1 and touches
column 1 only at its two ends (above and below the bargraph).
"""

from __future__ import annotations

from collections.abc import Iterator, Sequence
from dataclasses import dataclass

from .lattice import CellSet, CountTable, NotASnake, is_bubble


class InvalidBubble(ValueError):
    pass


@dataclass(frozen=True)
class Bargraph:
    rows: tuple[int, ...]

    def __post_init__(self):
        rows = tuple(int(r) for r in self.rows)
        if not rows:
            raise ValueError("a bargraph has at least one row")
        if min(rows) < 1:
            raise ValueError("row lengths must be >= 1")
        object.__setattr__(self, "rows", rows)

    @property
    def width(self) -> int:
        return max(self.rows)

    @property
    def height(self) -> int:
        return len(self.rows)

    @property
    def area(self) -> int:
        return sum(self.rows)

    def cells(self) -> frozenset[tuple[int, int]]:
        return frozenset((x, y) for y, n in enumerate(self.rows) for x in range(1, n + 1))


@dataclass(frozen=True)
class Well:
    start: int
    height: int
    h0: int
    h1: int
    h2: int


def _rows(g: Bargraph | Sequence[int]) -> tuple[int, ...]:
    return g.rows if isinstance(g, Bargraph) else Bargraph(tuple(g)).rows


def find_wells(g: Bargraph | Sequence[int]) -> list[Well]:
    """Maximal runs of equal rows with strictly longer rows directly below and above."""
    rows = _rows(g)
    out = []
    i = 1
    while i < len(rows):
        if rows[i] < rows[i - 1]:
            j = i
            while j < len(rows) and rows[j] == rows[i]:
                j += 1
            if j < len(rows) and rows[j] > rows[i]:
                out.append(Well(i, j - i, rows[i - 1], rows[i], rows[j]))
            i = j
        else:
            i += 1
    return out


def stretch_wells(g: Bargraph | Sequence[int]) -> Bargraph:
    rows = list(_rows(g))
    for well in reversed(find_wells(rows)):
        rows[well.start:well.start] = [well.h1, well.h1]
    return Bargraph(tuple(rows))


def unstretch_wells(g: Bargraph | Sequence[int]) -> Bargraph:
    rows = list(_rows(g))
    for well in reversed(find_wells(rows)):
        if well.height < 3:
            raise InvalidBubble("well shallower than 3 rows cannot come from stretching")
        del rows[well.start:well.start + 2]
    return Bargraph(tuple(rows))


def envelope_size(g: Bargraph | Sequence[int]) -> int:
    """Number of envelope cells, computed row by row without building them."""
    rows = _rows(g)
    m = len(rows)
    total = rows[0] + 1 + rows[-1] + 1
    for y, n in enumerate(rows):
        lo = rows[y - 1] if y > 0 else 0
        hi = rows[y + 1] if y + 1 < m else 0
        total += max(lo, n, hi) + 1 - n
    return total


def envelope(g: Bargraph | Sequence[int]) -> CellSet:
    """Cells outside g, in column >= 1, at Chebyshev distance 1 from g.

    Returned unnormalised-then-normalised as a CellSet; raises if the result is
    not a bubble, which happens exactly when some well is shallower than 3 rows.
    """
    body = Bargraph(_rows(g)).cells()
    ring = {
        (x + dx, y + dy)
        for x, y in body
        for dx in (-1, 0, 1)
        for dy in (-1, 0, 1)
        if x + dx >= 1 and (x + dx, y + dy) not in body
    }
    s = CellSet.from_cells(ring, 2)
    if not is_bubble(s):
        raise NotASnake("envelope is not a bubble; stretch the wells first")
    return s


def bargraph_to_bubble(g: Bargraph | Sequence[int]) -> CellSet:
    return envelope(stretch_wells(g))


def bubble_to_bargraph(s: CellSet) -> Bargraph:
    """Inverse map: read the enclosed rows, then remove two rows from every well."""
    if not is_bubble(s):
        raise InvalidBubble("cell set is not a bubble")
    ends = sorted(c[1] for c in s.cells if c[0] == 0)
    lo, hi = ends
    if hi - lo < 2:
        raise InvalidBubble("bubble encloses no rows")
    # in normalised coordinates the leftmost bubble cell of row y sits at x = L_y
    rows = tuple(min(x for x, y in s.cells if y == r) for r in range(lo + 1, hi))
    if min(rows) < 1:
        raise InvalidBubble("enclosed row of zero length")
    g = unstretch_wells(rows)
    if bargraph_to_bubble(g) != s:
        raise InvalidBubble("cell set is not the envelope of a bargraph")
    return g


def iter_bargraphs(width: int, max_size: int) -> Iterator[Bargraph]:
    """Bargraphs of exactly this width whose bubble image has at most max_size cells.

    Uses the unstretched envelope size of a prefix as a lower bound: appending rows
    or stretching wells never shrinks it.
    """
    if width < 1:
        raise ValueError("width must be >= 1")

    def partial(rows: list[int]) -> int:
        # bottom cap, settled rows, and a minimum of 1 + 2 for the last row and top cap
        m = len(rows)
        total = rows[0] + 1
        for y in range(m - 1):
            lo = rows[y - 1] if y > 0 else 0
            total += max(lo, rows[y], rows[y + 1]) + 1 - rows[y]
        return total + 1 + 2

    def rec(rows: list[int]):
        if partial(rows) > max_size:
            return
        if max(rows) == width:
            g = Bargraph(tuple(rows))
            if envelope_size(stretch_wells(g)) <= max_size:
                yield g
        for n in range(1, width + 1):
            rows.append(n)
            yield from rec(rows)
            rows.pop()

    for n in range(1, width + 1):
        yield from rec([n])


def bubble_counts_via_bargraphs(h: int, max_size: int) -> CountTable:
    """Bubbles of width h counted through the bijection, keyed (k, n)."""
    if h < 2:
        raise ValueError("bubbles have width >= 2")
    out = CountTable(fields=("k", "n"))
    for g in iter_bargraphs(h - 1, max_size):
        st = stretch_wells(g)
        out[(st.height + 2, envelope_size(st))] += 1
    return out


__all__ = [
    "Bargraph",
    "InvalidBubble",
    "Well",
    "bargraph_to_bubble",
    "bubble_counts_via_bargraphs",
    "bubble_to_bargraph",
    "envelope",
    "envelope_size",
    "find_wells",
    "iter_bargraphs",
    "stretch_wells",
    "unstretch_wells",
]
