"""Longest snakes inscribed in a b x k rectangle, by branch and bound.

Cells of the rectangle are bits of an int, row-major with one guard column so
that horizontal shifts never wrap. A partial snake carries two masks: the
occupied cells and the forbidden cells (occupied, or adjacent to an earlier
head). A cell may extend the path iff it neighbours the head and is not
forbidden, which is exactly the induced-path condition.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .lattice import CellSet, is_kiss_free, is_pds_shape

DEFAULT_NODE_BUDGET = 50_000_000

CLASSES = ("pds", "kiss_free", "general")
_ALIASES = {"kiss-free": "kiss_free", "kissfree": "kiss_free", "snake": "general"}


class SearchBudgetExceeded(RuntimeError):
    def __init__(self, spec: SearchSpec, nodes: int):
        super().__init__(f"node budget {spec.budget} exhausted for {spec.b}x{spec.k} {spec.cls}")
        self.spec = spec
        self.nodes = nodes


def normalize_class(name: str) -> str:
    name = _ALIASES.get(name, name)
    if name not in CLASSES:
        raise ValueError(f"unknown snake class {name!r}")
    return name


@dataclass(frozen=True)
class SearchSpec:
    b: int
    k: int
    cls: str = "general"
    budget: int = DEFAULT_NODE_BUDGET

    def __post_init__(self):
        if self.b < 1 or self.k < 1:
            raise ValueError("rectangle sides must be >= 1")
        if self.budget < 1:
            raise ValueError("budget must be positive")
        object.__setattr__(self, "cls", normalize_class(self.cls))


@dataclass(frozen=True)
class MaxResult:
    spec: SearchSpec
    length: int
    witness: CellSet
    path: tuple[tuple[int, int], ...]
    nodes: int = field(compare=False)


def formula_max_pds(b: int, k: int) -> int:
    if b < 1 or k < 1:
        raise ValueError("rectangle sides must be >= 1")
    return (b + 1) * (k + 1) // 2 - 1


class _Grid:
    def __init__(self, b: int, k: int):
        self.b, self.k, self.W = b, k, b + 1
        self.cells = sorted((x, y) for y in range(k) for x in range(b))
        self.full = sum(self.bit(x, y) for x, y in self.cells)
        self.nbr = {}
        self.moves = {}  # lexicographic neighbour order: west, south, north, east
        for x, y in self.cells:
            near = [
                (x + dx, y + dy)
                for dx, dy in ((-1, 0), (0, -1), (0, 1), (1, 0))
                if 0 <= x + dx < b and 0 <= y + dy < k
            ]
            self.moves[(x, y)] = near
            self.nbr[(x, y)] = sum(self.bit(*c) for c in near)
        self.sides = (
            sum(self.bit(0, y) for y in range(k)),
            sum(self.bit(b - 1, y) for y in range(k)),
            sum(self.bit(x, 0) for x in range(b)),
            sum(self.bit(x, k - 1) for x in range(b)),
        )
        # 2x2 windows containing each cell, as (diag1, diag2) bit pairs
        self.windows = {}
        for x, y in self.cells:
            ws = []
            for wx in (x - 1, x):
                for wy in (y - 1, y):
                    if 0 <= wx and wx + 1 < b and 0 <= wy and wy + 1 < k:
                        d1 = self.bit(wx, wy) | self.bit(wx + 1, wy + 1)
                        d2 = self.bit(wx + 1, wy) | self.bit(wx, wy + 1)
                        ws.append((d1, d2))
            self.windows[(x, y)] = ws

    def bit(self, x: int, y: int) -> int:
        return 1 << (y * self.W + x)

    def reach(self, seed: int, free: int) -> int:
        r, W = seed, self.W
        while True:
            nxt = (r | (r << 1) | (r >> 1) | (r << W) | (r >> W)) & free | r
            if nxt == r:
                return r
            r = nxt

    def kisses(self, occ: int, c: tuple[int, int]) -> bool:
        for d1, d2 in self.windows[c]:
            if (occ & d1) == d1 and not occ & d2 or (occ & d2) == d2 and not occ & d1:
                return True
        return False


class _Search:
    """One depth-first search; ``target`` switches it to witness mode."""

    def __init__(self, grid: _Grid, cls: str, budget: int, target: int | None = None):
        self.g, self.cls, self.budget = grid, cls, budget
        self.target = target
        self.best = 0
        self.path: list[tuple[int, int]] = []
        self.found: tuple | None = None
        self.nodes = 0

    def run(self, start: tuple[int, int], vdir: int = 0) -> None:
        """``vdir`` fixes the only allowed vertical direction (0: not yet chosen)."""
        b = self.g.bit(*start)
        self.path = [start]
        self._rec(start, 1, b, b, vdir)

    def _rec(self, head, n, occ, forb, vdir) -> bool:
        g = self.g
        self.nodes += 1
        if self.nodes > self.budget:
            raise _Budget(self.nodes)
        inscribed = all(occ & s for s in g.sides)
        if self.target is None:
            if inscribed and n > self.best:
                self.best = n
        elif inscribed and n == self.target:
            self.found = tuple(self.path)
            return True
        free = g.full & ~forb
        cand = g.nbr[head] & free
        if not cand:
            return False
        reach = g.reach(cand, free)
        total = n + reach.bit_count()
        if self.target is None and total <= self.best:
            return False
        if self.target is not None and total < self.target:
            return False
        for s in g.sides:
            if not occ & s and not reach & s:
                return False
        hn = g.nbr[head]
        for c in g.moves[head]:
            cb = g.bit(*c)
            if not cand & cb:
                continue
            d = c[1] - head[1]
            if self.cls == "pds" and d and vdir and d != vdir:
                continue
            if self.cls == "kiss_free" and g.kisses(occ | cb, c):
                continue
            self.path.append(c)
            done = self._rec(c, n + 1, occ | cb, forb | hn | cb, vdir or d)
            self.path.pop()
            if done:
                return True
        return False


class _Budget(Exception):
    def __init__(self, nodes: int):
        self.nodes = nodes


def _start_cells(grid: _Grid, cls: str) -> list[tuple[int, int]]:
    if cls == "pds":
        # a PDS can always be read from its lowest cell upward
        return [(x, 0) for x in range(grid.b)]
    # reflect so that one endpoint lies in the lower-left quadrant
    return [(x, y) for x, y in grid.cells if x <= (grid.b - 1) // 2 and y <= (grid.k - 1) // 2]


def _best_from(args) -> tuple[int, int, bool]:
    b, k, cls, start, budget = args
    grid = _Grid(b, k)
    s = _Search(grid, cls, budget)
    try:
        s.run(start, vdir=1 if cls == "pds" else 0)
    except _Budget as e:
        return s.best, e.nodes, False
    return s.best, s.nodes, True


def max_snake_length(spec: SearchSpec, workers: int = 1) -> MaxResult:
    """Exact maximum length with the lexicographically least witness path.

    Raises :class:`SearchBudgetExceeded` when the node budget runs out before
    the optimum is proven.
    """
    grid = _Grid(spec.b, spec.k)
    starts = _start_cells(grid, spec.cls)
    tasks = [(spec.b, spec.k, spec.cls, st, spec.budget) for st in starts]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as pool:
            results = list(pool.map(_best_from, tasks))
    else:
        results = [_best_from(t) for t in tasks]
    nodes = sum(r[1] for r in results)
    if not all(r[2] for r in results) or nodes > spec.budget:
        raise SearchBudgetExceeded(spec, nodes)
    best = max(r[0] for r in results)

    # second pass: first path of length `best` in lexicographic DFS order
    w = _Search(grid, spec.cls, spec.budget - nodes, target=best)
    try:
        for st in grid.cells:
            w.run(st)
            if w.found:
                break
    except _Budget as e:
        raise SearchBudgetExceeded(spec, nodes + e.nodes) from None
    if w.found is None:
        raise AssertionError("optimum found but no witness reproduced")
    witness = CellSet.from_cells(w.found, 2)
    _check_witness(spec, witness)
    return MaxResult(spec, best, witness, w.found, nodes + w.nodes)


def _check_witness(spec: SearchSpec, s: CellSet) -> None:
    ok = s.is_snake() and s.extent() == (spec.b, spec.k)
    if spec.cls == "pds":
        ok = ok and is_pds_shape(s)
    elif spec.cls == "kiss_free":
        ok = ok and is_kiss_free(s)
    if not ok:
        raise AssertionError(f"invalid witness for {spec}")


@dataclass(frozen=True)
class ReportRow:
    b: int
    k: int
    formula: int
    pds: int
    kiss_free: int
    general: int

    @property
    def pds_matches(self) -> bool:
        return self.pds == self.formula

    @property
    def kiss_free_matches(self) -> bool:
        return self.kiss_free == self.formula


@dataclass
class ConjectureReport:
    rows: list[ReportRow]
    witnesses: dict[tuple[int, int, str], MaxResult]

    @property
    def kiss_free_violations(self) -> list[tuple[int, int]]:
        return [(r.b, r.k) for r in self.rows if not r.kiss_free_matches]

    @property
    def pds_mismatches(self) -> list[tuple[int, int]]:
        return [(r.b, r.k) for r in self.rows if not r.pds_matches]

    @property
    def general_excess(self) -> list[tuple[int, int]]:
        return [(r.b, r.k) for r in self.rows if r.general > r.formula]

    def smallest_general_excess(self) -> MaxResult | None:
        """Smallest rectangle (by area, then b) holding a general snake longer than the formula."""
        cells = sorted(self.general_excess, key=lambda bk: (bk[0] * bk[1], bk[0], bk[1]))
        return self.witnesses[(*cells[0], "general")] if cells else None


def conjecture_report(
    b_max: int, k_max: int, workers: int = 1, budget: int = DEFAULT_NODE_BUDGET
) -> ConjectureReport:
    rows, witnesses = [], {}
    for b in range(1, b_max + 1):
        for k in range(1, k_max + 1):
            found = {}
            for cls in CLASSES:
                res = max_snake_length(SearchSpec(b, k, cls, budget), workers=workers)
                witnesses[(b, k, cls)] = res
                found[cls] = res.length
            rows.append(ReportRow(b, k, formula_max_pds(b, k), **found))
    return ConjectureReport(rows, witnesses)


__all__ = [
    "CLASSES",
    "ConjectureReport",
    "DEFAULT_NODE_BUDGET",
    "MaxResult",
    "ReportRow",
    "SearchBudgetExceeded",
    "SearchSpec",
    "conjecture_report",
    "formula_max_pds",
    "max_snake_length",
    "normalize_class",
]
