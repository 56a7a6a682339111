"""Brute-force lattice enumeration of snakes: the ground truth for every count.

Paths are grown cell by cell from the origin with a depth-first search. A new
cell is admissible when it is empty and its only occupied edge-neighbour is the
current head; this keeps the cell set an induced path (a snake). Completed paths
are deduplicated by a translation-invariant canonical key, so a snake reached
from both of its ends is counted once.

Cells are packed into integers on a padded box of side ``L = 2 n_max + 1`` per
axis; translating a shape adds a constant to every packed index, so sorting the
indices and subtracting the minimum gives the canonical key.
"""

from __future__ import annotations

import functools
import os
from array import array
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

Cell = tuple[int, ...]

DEFAULT_MEMORY_BUDGET = 2 * 1024**3
MEMORY_ENV = "SNAKEPOLY_MEMORY_BUDGET"


class NotASnake(ValueError):
    pass


class MemoryBudgetExceeded(MemoryError):
    pass


class CountTable(Counter):
    """Exact counts keyed by tuples (or plain ints for one-axis tables)."""

    def __init__(self, data=None, fields: Sequence[str] = ()):
        super().__init__(data or {})
        self.fields = tuple(fields)

    def marginal(self, *keep: str) -> CountTable:
        idx = [self.fields.index(f) for f in keep]
        out = CountTable(fields=keep)
        for key, v in self.items():
            k = tuple(key[i] for i in idx)
            out[k[0] if len(k) == 1 else k] += v
        return out

    def rows(self) -> list[tuple]:
        return sorted(
            ((k if isinstance(k, tuple) else (k,)) + (v,) for k, v in self.items() if v)
        )


# -- geometry ---------------------------------------------------------------

_OFFSETS_CACHE: dict[int, list[Cell]] = {}


def unit_vectors(dim: int) -> list[Cell]:
    if dim not in _OFFSETS_CACHE:
        vs = []
        for i in range(dim):
            for sgn in (1, -1):
                v = [0] * dim
                v[i] = sgn
                vs.append(tuple(v))
        _OFFSETS_CACHE[dim] = vs
    return _OFFSETS_CACHE[dim]


def _add(a: Cell, b: Cell) -> Cell:
    return tuple(x + y for x, y in zip(a, b))


def _normalize(cells: Iterable[Cell]) -> frozenset[Cell]:
    cells = list(cells)
    lo = [min(c[i] for c in cells) for i in range(len(cells[0]))]
    return frozenset(tuple(x - m for x, m in zip(c, lo)) for c in cells)


@dataclass(frozen=True)
class CellPath:
    """Ordered sequence of lattice cells, tail first."""

    cells: tuple[Cell, ...]
    dim: int = 2

    def __post_init__(self):
        object.__setattr__(self, "cells", tuple(tuple(c) for c in self.cells))

    def __len__(self):
        return len(self.cells)

    def is_snake(self) -> bool:
        """Steps are unit moves, no repeats, non-consecutive cells never touch."""
        cells = self.cells
        if not cells or any(len(c) != self.dim for c in cells):
            return False
        index = {c: i for i, c in enumerate(cells)}
        if len(index) != len(cells):
            return False
        for i, c in enumerate(cells):
            for u in unit_vectors(self.dim):
                j = index.get(_add(c, u))
                if j is not None and abs(i - j) != 1:
                    return False
            if i and sum(abs(a - b) for a, b in zip(c, cells[i - 1])) != 1:
                return False
        return True

    def reversed(self) -> CellPath:
        return CellPath(self.cells[::-1], self.dim)

    def to_cellset(self) -> CellSet:
        return CellSet.from_cells(self.cells, self.dim)


@dataclass(frozen=True)
class CellSet:
    """Translation-normalised set of cells (minimum corner at the origin)."""

    cells: frozenset[Cell]
    dim: int = 2

    @classmethod
    def from_cells(cls, cells: Iterable[Sequence[int]], dim: int | None = None) -> CellSet:
        cells = [tuple(c) for c in cells]
        if not cells:
            raise ValueError("empty cell set")
        d = len(cells[0]) if dim is None else dim
        if any(len(c) != d for c in cells):
            raise ValueError("cells of mixed dimension")
        return cls(_normalize(cells), d)

    def __len__(self):
        return len(self.cells)

    def __iter__(self):
        return iter(sorted(self.cells))

    def __contains__(self, c):
        return tuple(c) in self.cells

    def extent(self) -> tuple[int, ...]:
        return tuple(max(c[i] for c in self.cells) + 1 for i in range(self.dim))

    def degrees(self) -> dict[Cell, int]:
        units = unit_vectors(self.dim)
        return {c: sum(_add(c, u) in self.cells for u in units) for c in self.cells}

    def endpoints(self) -> list[Cell]:
        if len(self.cells) == 1:
            (c,) = self.cells
            return [c]
        return sorted(c for c, d in self.degrees().items() if d == 1)

    def is_snake(self) -> bool:
        n = len(self.cells)
        if n == 1:
            return True
        deg = self.degrees()
        ends = [c for c, d in deg.items() if d == 1]
        if max(deg.values()) > 2 or len(ends) != 2:
            return False
        return len(self._walk(ends[0])) == n

    def _walk(self, start: Cell) -> list[Cell]:
        units = unit_vectors(self.dim)
        order = [start]
        seen = {start}
        while True:
            nxt = [n for n in (_add(order[-1], u) for u in units) if n in self.cells and n not in seen]
            if not nxt:
                return order
            if len(nxt) > 1:
                return order  # branch: not a path
            order.append(nxt[0])
            seen.add(nxt[0])

    def path(self, start: Cell | None = None) -> CellPath:
        """The unique cell ordering, from ``start`` (default: least endpoint)."""
        if not self.is_snake():
            raise NotASnake("cell set is not a snake")
        ends = self.endpoints()
        start = ends[0] if start is None else tuple(start)
        if start not in ends:
            raise ValueError(f"{start} is not an endpoint")
        return CellPath(tuple(self._walk(start)), self.dim)

    def to_json_obj(self) -> dict:
        return {"dim": self.dim, "cells": [list(c) for c in sorted(self.cells)]}

    @classmethod
    def from_json_obj(cls, obj: dict) -> CellSet:
        return cls.from_cells([tuple(c) for c in obj["cells"]], obj.get("dim"))


@dataclass(frozen=True)
class StatTriple:
    b: int
    k: int
    n: int
    w: int | None = None


# -- predicates ---------------------------------------------------------------

def _monotone(path: Sequence[Cell], axes: range) -> bool:
    return all(
        path[i + 1][a] >= path[i][a] for i in range(len(path) - 1) for a in axes
    )


def is_pds_shape(s: CellSet, dim: int | None = None) -> bool:
    """True iff some traversal never steps backwards along axes 2..N.

    Axis 1 (index 0) is the free axis; in 2D this is "North, East or West only".
    """
    dim = s.dim if dim is None else dim
    if len(s) == 1:
        return True
    path = s.path().cells
    axes = range(1, dim)
    return _monotone(path, axes) or _monotone(path[::-1], axes)


def is_kiss_free(s: CellSet) -> bool:
    """No 2x2 window holds exactly one full diagonal and one empty diagonal."""
    if s.dim != 2:
        raise ValueError("kisses are defined for planar snakes")
    cells = s.cells
    for x, y in cells:
        # window with (x, y) as lower-left corner: check both diagonals
        a, d = (x, y) in cells, (x + 1, y + 1) in cells
        b, c = (x + 1, y) in cells, (x, y + 1) in cells
        if a and d and not b and not c:
            return False
        # window with (x, y) as lower-right corner
        if (x - 1, y + 1) in cells and (x - 1, y) not in cells and (x, y + 1) not in cells:
            return False
    return True


def is_bubble(s: CellSet) -> bool:
    """Planar PDS of width >= 2 whose only cells in the first column are its two ends."""
    if s.dim != 2 or len(s) < 2 or not s.is_snake():
        return False
    col0 = [c for c in s.cells if c[0] == 0]
    ends = s.endpoints()
    return (
        s.extent()[0] >= 2
        and len(col0) == 2
        and all(e[0] == 0 for e in ends)
        and is_pds_shape(s)
    )


def classify_inscribed(s: CellSet) -> StatTriple:
    if s.dim != 2:
        raise ValueError("inscription is defined for planar snakes")
    b, k = s.extent()
    return StatTriple(b, k, len(s))


def horizontal_half_perimeter(s: CellSet) -> int:
    """Half the horizontal unit edges on the boundary = number of vertical runs."""
    cells = s.cells
    return sum(1 for x, y in cells if (x, y - 1) not in cells)


# -- packed enumeration engine --------------------------------------------------

@dataclass(frozen=True)
class _Box:
    dim: int
    n_max: int
    side: int = field(init=False)
    strides: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        side = 2 * self.n_max + 1
        object.__setattr__(self, "side", side)
        object.__setattr__(self, "strides", tuple(side**i for i in range(self.dim)))

    @property
    def size(self) -> int:
        return self.side**self.dim

    @property
    def origin(self) -> int:
        return sum(self.n_max * s for s in self.strides)

    def pack_offset(self, v: Cell) -> int:
        return sum(x * s for x, s in zip(v, self.strides))

    def decode(self, key: bytes) -> list[Cell]:
        offsets = array("I")
        offsets.frombytes(key)
        centre = self.origin
        side, n = self.side, self.n_max
        out = []
        for o in offsets:
            v = o + centre
            out.append(tuple((v // st) % side - n for st in self.strides))
        return out


def _key(path: list[int]) -> bytes:
    p = sorted(path)
    m = p[0]
    return array("I", [x - m for x in p]).tobytes()


def _memory_budget(budget: int | None) -> int:
    if budget is not None:
        return budget
    env = os.environ.get(MEMORY_ENV)
    return int(env) if env else DEFAULT_MEMORY_BUDGET


def _step_set(dim: int, cls: str) -> list[Cell]:
    if cls == "pds":
        steps = []
        for v in unit_vectors(dim):
            axis = next(i for i, x in enumerate(v) if x)
            if axis == 0 or v[axis] > 0:
                steps.append(v)
        return steps
    return unit_vectors(dim)


class _Walker:
    """DFS over packed snake paths; collects canonical keys per length."""

    def __init__(self, dim: int, n_max: int, steps: Sequence[Cell], max_keys: int):
        self.box = _Box(dim, n_max)
        self.n_max = n_max
        self.steps = [self.box.pack_offset(s) for s in steps]
        self.nbrs = [self.box.pack_offset(u) for u in unit_vectors(dim)]
        self.max_keys = max_keys

    def prefixes(self, depth: int) -> list[tuple[int, ...]]:
        """All admissible paths of exactly ``depth`` cells, in DFS order."""
        out: list[tuple[int, ...]] = []
        self._run((self.box.origin,), depth, None, out)
        return out

    def collect(
        self, prefix: tuple[int, ...], first_len: int, last_len: int | None = None
    ) -> dict[int, set[bytes]]:
        last = self.n_max if last_len is None else last_len
        found: dict[int, set[bytes]] = {n: set() for n in range(first_len, last + 1)}
        self._run(prefix, last, (first_len, found), None)
        return found

    def _run(self, prefix, depth_limit, sink, prefix_out):
        occ = bytearray(self.box.size)
        nocc = bytearray(self.box.size)
        nbrs, steps = self.nbrs, self.steps
        path: list[int] = []

        def push(c):
            occ[c] = 1
            for d in nbrs:
                nocc[c + d] += 1
            path.append(c)

        def pop():
            c = path.pop()
            occ[c] = 0
            for d in nbrs:
                nocc[c + d] -= 1

        for c in prefix:
            push(c)

        if sink is not None:
            first_len, found = sink
            n_keys = [0]
            limit = self.max_keys

            def rec(head, depth):
                if depth >= first_len:
                    bucket = found[depth]
                    k = _key(path)
                    if k not in bucket:
                        bucket.add(k)
                        n_keys[0] += 1
                        if n_keys[0] > limit:
                            raise MemoryBudgetExceeded(
                                f"more than {limit} stored snakes; raise the memory budget"
                            )
                if depth == depth_limit:
                    return
                for s in steps:
                    c = head + s
                    if occ[c] or nocc[c] != 1:
                        continue
                    push(c)
                    rec(c, depth + 1)
                    pop()
        else:
            def rec(head, depth):
                if depth == depth_limit:
                    prefix_out.append(tuple(path))
                    return
                for s in steps:
                    c = head + s
                    if occ[c] or nocc[c] != 1:
                        continue
                    push(c)
                    rec(c, depth + 1)
                    pop()

        rec(path[-1], len(path))


def _collect_task(args):
    dim, n_max, steps, max_keys, prefix, first_len = args
    return _Walker(dim, n_max, steps, max_keys).collect(prefix, first_len)


def enumerate_keys(
    n_max: int,
    dim: int = 2,
    cls: str = "snake",
    workers: int = 1,
    memory_budget: int | None = None,
    split_depth: int = 3,
) -> tuple[_Box, dict[int, set[bytes]]]:
    """Canonical keys of all snakes (or PDS) with 1..n_max cells.

    The DFS tree is split by its first ``split_depth`` cells into independent
    tasks; the merged result does not depend on ``workers``.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if cls not in ("snake", "pds"):
        raise ValueError(f"unknown enumeration class {cls!r}")
    steps = _step_set(dim, cls)
    max_keys = max(1, _memory_budget(memory_budget) // (4 * n_max + 120))
    walker = _Walker(dim, n_max, steps, max_keys)
    d = max(1, min(split_depth, n_max))
    found = walker.collect((walker.box.origin,), 1, d)
    if d == n_max:
        return walker.box, found
    for n in range(d + 1, n_max + 1):
        found[n] = set()
    prefixes = walker.prefixes(d)
    tasks = [(dim, n_max, steps, max_keys, p, d + 1) for p in prefixes]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = pool.map(_collect_task, tasks, chunksize=max(1, len(tasks) // (4 * workers)))
            _merge(found, results, max_keys)
    else:
        _merge(found, map(_collect_task, tasks), max_keys)
    return walker.box, found


def _merge(found, results, max_keys):
    total = sum(len(v) for v in found.values())
    for part in results:
        for n, keys in part.items():
            before = len(found[n])
            found[n] |= keys
            total += len(found[n]) - before
            if total > max_keys:
                raise MemoryBudgetExceeded(
                    f"more than {max_keys} stored snakes; raise the memory budget"
                )


def enumerate_snakes(
    n: int, dim: int = 2, workers: int = 1, memory_budget: int | None = None
) -> CountTable:
    """Number of fixed, non-oriented snakes with 1..n cells, keyed by length."""
    _, found = enumerate_keys(n, dim, "snake", workers, memory_budget)
    return CountTable({m: len(found[m]) for m in range(1, n + 1)}, fields=("n",))


def iter_snakes(n: int, dim: int = 2, cls: str = "snake", workers: int = 1) -> Iterator[CellSet]:
    """Every snake of exactly n cells in the class, in a deterministic order.

    ``cls`` is ``snake``, ``pds`` or ``kiss-free`` (planar only).
    """
    base = "pds" if cls == "pds" else "snake"
    if cls not in ("snake", "pds", "kiss-free"):
        raise ValueError(f"unknown class {cls!r}")
    box, found = enumerate_keys(n, dim, base, workers)
    for key in sorted(found[n]):
        s = CellSet.from_cells(box.decode(key), dim)
        if cls == "kiss-free" and not is_kiss_free(s):
            continue
        yield s


@functools.lru_cache(maxsize=32)
def _pds_count_table(n_max: int, dim: int) -> tuple[int, ...]:
    _, found = enumerate_keys(n_max, dim, "pds")
    return (1,) + tuple(len(found[m]) for m in range(1, n_max + 1))


def count_pds(n: int, dim: int = 2) -> int:
    """Number of fixed PDS shapes with n cells in dimension ``dim`` (1 for n = 0)."""
    if n < 0:
        raise ValueError("length must be non-negative")
    if dim < 2:
        raise ValueError("dimension must be >= 2")
    if n == 0:
        return 1
    return _pds_count_table(n, dim)[n]


def count_pds_table(n_max: int, dim: int = 2) -> list[int]:
    return list(_pds_count_table(n_max, dim)) if n_max else [1]


# -- planar PDS census: inscribed counts, bubbles, crossings, endings ----------

@dataclass
class PdsCensus:
    n_max: int
    inscribed: CountTable  # (b, k, n)
    bubbles: CountTable  # (r, k, n, w)
    crossings: CountTable  # (b, k, n)
    endings: CountTable  # (width, c, k, n)


def _census_entry(cells: list[Cell]):
    s = CellSet.from_cells(cells, 2)
    n = len(s)
    b, k = s.extent()
    entry = {"inscribed": (b, k, n)}
    if n == 1 or b < 2:
        return entry
    ends = s.endpoints()
    col0 = [c for c in s.cells if c[0] == 0]
    if len(col0) == 2 and all(e[0] == 0 for e in ends):
        entry["bubble"] = (b, k, n, horizontal_half_perimeter(s))
    if len(col0) == 1 and col0[0] == (0, 0) and (0, 0) in ends:
        head = ends[0] if ends[1] == (0, 0) else ends[1]
        last = [c for c in s.cells if c[0] == b - 1]
        if len(last) == 1 and last[0] == head:
            entry["crossing"] = (b, k, n)
        entry["ending"] = (b, head[0] + 1, k, n)
    return entry


@functools.lru_cache(maxsize=8)
def pds_census(n_max: int, workers: int = 1) -> PdsCensus:
    """Classify every planar PDS with at most n_max cells, in one pass."""
    box, found = enumerate_keys(n_max, 2, "pds", workers)
    census = PdsCensus(
        n_max,
        CountTable(fields=("b", "k", "n")),
        CountTable(fields=("r", "k", "n", "w")),
        CountTable(fields=("b", "k", "n")),
        CountTable(fields=("width", "c", "k", "n")),
    )
    for n in range(1, n_max + 1):
        for key in found[n]:
            e = _census_entry(box.decode(key))
            census.inscribed[e["inscribed"]] += 1
            if "bubble" in e:
                census.bubbles[e["bubble"]] += 1
            if "crossing" in e:
                census.crossings[e["crossing"]] += 1
            if "ending" in e:
                census.endings[e["ending"]] += 1
    return census


def count_inscribed_pds(b: int, k: int, n_max: int) -> CountTable:
    """``{n: #PDS with bounding box exactly b x k}`` for n <= n_max."""
    if b < 1 or k < 1:
        raise ValueError("rectangle sides must be positive")
    c = pds_census(n_max)
    return CountTable({n: c.inscribed[(b, k, n)] for n in range(0, n_max + 1)}, fields=("n",))


def enumerate_bubbles(r: int, n_max: int) -> CountTable:
    """Left bubbles of width r: PDS whose only two cells in column 1 are its ends.

    Keyed by (height k, length n, horizontal half-perimeter w).
    """
    if r < 2:
        raise ValueError("bubbles have width >= 2")
    c = pds_census(n_max)
    return CountTable(
        {(k, n, w): v for (rr, k, n, w), v in c.bubbles.items() if rr == r},
        fields=("k", "n", "w"),
    )


def enumerate_crossings(b: int, n_max: int) -> CountTable:
    """Crossings of width b with the tail in the bottom-left corner, keyed (k, n)."""
    if b < 2:
        raise ValueError("crossings have width >= 2")
    c = pds_census(n_max)
    return CountTable(
        {(k, n): v for (bb, k, n), v in c.crossings.items() if bb == b}, fields=("k", "n")
    )


def enumerate_endings(b: int, c: int, n_max: int) -> CountTable:
    """Endings for a rectangle of width b whose head lies in column c, keyed (k, n).

    The tail is the only cell in column 1 (bottom-left corner) and the snake
    stays clear of column b.
    """
    if not 1 < c < b:
        raise ValueError("need 1 < c < b")
    cen = pds_census(n_max)
    out = CountTable(fields=("k", "n"))
    for (width, cc, k, n), v in cen.endings.items():
        if cc == c and width <= b - 1:
            out[(k, n)] += v
    return out


__all__ = [
    "CellPath",
    "CellSet",
    "CountTable",
    "MemoryBudgetExceeded",
    "NotASnake",
    "StatTriple",
    "classify_inscribed",
    "is_bubble",
    "count_inscribed_pds",
    "count_pds",
    "count_pds_table",
    "enumerate_bubbles",
    "enumerate_crossings",
    "enumerate_endings",
    "enumerate_keys",
    "enumerate_snakes",
    "horizontal_half_perimeter",
    "is_kiss_free",
    "is_pds_shape",
    "iter_snakes",
    "pds_census",
]
