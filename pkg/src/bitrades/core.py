"""Partial latin squares, bitrades, validation and isotopisms."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, NamedTuple, Sequence

from .perm import CapExceeded, Permutation

DEFAULT_SEARCH_BUDGET = 1_000_000

COORD_NAMES = ("row", "col", "sym")
COORD_PAIRS = ((0, 1), (0, 2), (1, 2))


class Triple(NamedTuple):
    row: int
    col: int
    sym: int


class BudgetExceeded(CapExceeded):
    """An isotopism search ran out of nodes before reaching a verdict."""


class InvalidBitrade(ValueError):
    def __init__(self, report: ValidationReport):
        first = report.violations[0].message if report.violations else "invalid"
        super().__init__(f"not a valid bitrade: {first}")
        self.report = report


@dataclass(frozen=True)
class PartialLatinSquare:
    """A set of (row, col, sym) triples over label sets of the given sizes.

    Entries are kept sorted row-major and deduplicated.  Nothing is checked at
    construction; :func:`validate_pls` reports problems.  Original labels are
    carried for display only and do not take part in equality.
    """

    n_rows: int
    n_cols: int
    n_syms: int
    entries: tuple[Triple, ...]
    row_labels: tuple[str, ...] | None = field(default=None, compare=False)
    col_labels: tuple[str, ...] | None = field(default=None, compare=False)
    sym_labels: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        norm = tuple(sorted({Triple(*map(int, e)) for e in self.entries}))
        object.__setattr__(self, "entries", norm)

    @classmethod
    def from_triples(
        cls,
        triples: Iterable[Sequence[int]],
        sizes: Sequence[int] | None = None,
        labels: Sequence[Sequence[str] | None] | None = None,
    ) -> PartialLatinSquare:
        triples = [Triple(*t) for t in triples]
        if sizes is None:
            sizes = [max((t[i] for t in triples), default=-1) + 1 for i in range(3)]
        labels = labels or (None, None, None)
        return cls(
            *sizes,
            tuple(triples),
            *(tuple(lab) if lab is not None else None for lab in labels),
        )

    @classmethod
    def from_grid(
        cls, grid: Sequence[Sequence[int | None]], n_syms: int | None = None
    ) -> PartialLatinSquare:
        """Build from a list of rows; ``None`` marks an empty cell."""
        triples = [
            (r, c, s) for r, row in enumerate(grid) for c, s in enumerate(row) if s is not None
        ]
        n_cols = max((len(row) for row in grid), default=0)
        if n_syms is None:
            n_syms = max((t[2] for t in triples), default=-1) + 1
        return cls(len(grid), n_cols, n_syms, tuple(triples))

    @property
    def sizes(self) -> tuple[int, int, int]:
        return (self.n_rows, self.n_cols, self.n_syms)

    def labels(self, coord: int) -> tuple[str, ...]:
        given = (self.row_labels, self.col_labels, self.sym_labels)[coord]
        return given if given is not None else tuple(str(i) for i in range(self.sizes[coord]))

    def label_of(self, coord: int, index: int) -> str:
        return self.labels(coord)[index]

    def with_labels_of(self, other: PartialLatinSquare) -> PartialLatinSquare:
        return PartialLatinSquare(
            *self.sizes, self.entries, other.row_labels, other.col_labels, other.sym_labels
        )

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self.entries)

    def __contains__(self, t) -> bool:
        return Triple(*t) in self._entry_set

    @cached_property
    def _entry_set(self) -> frozenset[Triple]:
        return frozenset(self.entries)

    @cached_property
    def index_of(self) -> dict[Triple, int]:
        """Row-major ordinal of each entry; the carrier for permutations of entries."""
        return {e: i for i, e in enumerate(self.entries)}

    @cached_property
    def _pair_index(self) -> dict[tuple[int, int], dict[tuple[int, int], list[Triple]]]:
        out: dict[tuple[int, int], dict[tuple[int, int], list[Triple]]] = {}
        for pair in COORD_PAIRS:
            d: dict[tuple[int, int], list[Triple]] = defaultdict(list)
            for e in self.entries:
                d[(e[pair[0]], e[pair[1]])].append(e)
            out[pair] = dict(d)
        return out

    def matching(self, pair: tuple[int, int], values: tuple[int, int]) -> list[Triple]:
        """Entries whose coordinates ``pair`` equal ``values``."""
        return self._pair_index[pair].get(values, [])

    def lookup(self, pair: tuple[int, int], values: tuple[int, int]) -> Triple | None:
        found = self.matching(pair, values)
        return found[0] if len(found) == 1 else None

    def cell(self, row: int, col: int) -> int | None:
        e = self.lookup((0, 1), (row, col))
        return None if e is None else e.sym

    @cached_property
    def degrees(self) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
        """Entry counts per row, per column and per symbol."""
        counts = [[0] * n for n in self.sizes]
        for e in self.entries:
            for i in range(3):
                if 0 <= e[i] < self.sizes[i]:
                    counts[i][e[i]] += 1
        return tuple(tuple(c) for c in counts)  # type: ignore[return-value]

    def occupied(self, coord: int) -> list[int]:
        return sorted({e[coord] for e in self.entries})

    def cells(self) -> set[tuple[int, int]]:
        return {(e.row, e.col) for e in self.entries}

    def line_symbols(self, coord: int, label: int) -> set[int]:
        """Symbols in row ``label`` (coord 0) or column ``label`` (coord 1)."""
        return {e.sym for e in self.entries if e[coord] == label}

    def to_grid(self) -> list[list[int | None]]:
        grid: list[list[int | None]] = [[None] * self.n_cols for _ in range(self.n_rows)]
        for e in self.entries:
            grid[e.row][e.col] = e.sym
        return grid


@dataclass(frozen=True)
class Bitrade:
    t_circ: PartialLatinSquare
    t_star: PartialLatinSquare

    @property
    def sizes(self) -> tuple[int, int, int]:
        return self.t_circ.sizes

    def __len__(self) -> int:
        return len(self.t_circ)

    def swapped(self) -> Bitrade:
        return Bitrade(self.t_star, self.t_circ)


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    witnesses: tuple[Triple, ...] = ()

    def to_json(self) -> dict:
        return {"kind": self.kind, "message": self.message, "witnesses": [list(w) for w in self.witnesses]}


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {"ok": self.ok, "violations": [v.to_json() for v in self.violations]}


def validate_pls(p: PartialLatinSquare) -> ValidationReport:
    violations: list[Violation] = []
    for i, n in enumerate(p.sizes):
        if n <= 0:
            violations.append(Violation("size", f"{COORD_NAMES[i]} label set has size {n}"))
    for e in p.entries:
        for i in range(3):
            if not 0 <= e[i] < p.sizes[i]:
                violations.append(
                    Violation("bounds", f"{COORD_NAMES[i]} index {e[i]} out of range in {tuple(e)}", (e,))
                )
    for pair in COORD_PAIRS:
        names = f"{COORD_NAMES[pair[0]]}/{COORD_NAMES[pair[1]]}"
        for key, group in sorted(p._pair_index[pair].items()):
            for a, b in combinations(group, 2):
                violations.append(
                    Violation(
                        "repeat",
                        f"entries {tuple(a)} and {tuple(b)} share {names} {key}",
                        (a, b),
                    )
                )
    return ValidationReport(tuple(violations))


def validate_bitrade(b: Bitrade) -> ValidationReport:
    violations: list[Violation] = []
    for side, p in (("circ", b.t_circ), ("star", b.t_star)):
        for v in validate_pls(p).violations:
            violations.append(Violation(v.kind, f"{side}: {v.message}", v.witnesses))
    if b.t_circ.sizes != b.t_star.sizes:
        violations.append(
            Violation("size", f"label-set sizes differ: {b.t_circ.sizes} vs {b.t_star.sizes}")
        )
    common = sorted(b.t_circ._entry_set & b.t_star._entry_set)
    for e in common:
        violations.append(Violation("R1", f"entry {tuple(e)} lies in both sides", (e,)))
    for axiom, src, dst in (("R2", b.t_circ, b.t_star), ("R3", b.t_star, b.t_circ)):
        for e in src.entries:
            for pair in COORD_PAIRS:
                partners = dst.matching(pair, (e[pair[0]], e[pair[1]]))
                if len(partners) != 1:
                    how = "no partner" if not partners else f"{len(partners)} partners"
                    coords = "{" + ",".join(str(i + 1) for i in pair) + "}"
                    violations.append(
                        Violation(
                            axiom,
                            f"{tuple(e)} has {how} agreeing in coordinates {coords}",
                            (e, *partners),
                        )
                    )
    return ValidationReport(tuple(violations))


def require_bitrade(b: Bitrade) -> None:
    report = validate_bitrade(b)
    if not report.ok:
        raise InvalidBitrade(report)


@dataclass(frozen=True)
class Isotopism:
    """Row, column and symbol permutations applied together."""

    alpha1: Permutation
    alpha2: Permutation
    alpha3: Permutation

    @classmethod
    def identity(cls, sizes: Sequence[int]) -> Isotopism:
        return cls(*(Permutation.identity(n) for n in sizes))

    @classmethod
    def from_cycles(cls, sizes: Sequence[int], *cycle_lists) -> Isotopism:
        return cls(*(Permutation.from_cycles(c, n) for c, n in zip(cycle_lists, sizes)))

    @property
    def components(self) -> tuple[Permutation, Permutation, Permutation]:
        return (self.alpha1, self.alpha2, self.alpha3)

    @property
    def sizes(self) -> tuple[int, int, int]:
        return tuple(a.degree for a in self.components)  # type: ignore[return-value]

    def __mul__(self, other: Isotopism) -> Isotopism:
        return Isotopism(*(a * b for a, b in zip(self.components, other.components)))

    def __invert__(self) -> Isotopism:
        return Isotopism(*(~a for a in self.components))

    def is_identity(self) -> bool:
        return all(a.is_identity() for a in self.components)

    def map_triple(self, t: Sequence[int]) -> Triple:
        return Triple(self.alpha1[t[0]], self.alpha2[t[1]], self.alpha3[t[2]])

    def to_permutation(self) -> Permutation:
        """The same map as one permutation of the disjoint union rows + cols + syms."""
        r, c, _ = self.sizes
        images = list(self.alpha1.images)
        images += [r + x for x in self.alpha2.images]
        images += [r + c + x for x in self.alpha3.images]
        return Permutation(images)

    @classmethod
    def from_permutation(cls, p: Permutation, sizes: Sequence[int]) -> Isotopism:
        r, c, s = sizes
        im = p.images
        return cls(
            Permutation(im[:r]),
            Permutation(x - r for x in im[r:r + c]),
            Permutation(x - r - c for x in im[r + c:]),
        )

    def describe(self, p: PartialLatinSquare | None = None) -> str:
        parts = []
        for i, a in enumerate(self.components):
            if p is None:
                parts.append(a.to_cycle_string())
            else:
                labs = p.labels(i)
                cyc = a.cycles()
                parts.append(
                    "".join("(" + " ".join(labs[x] for x in c) + ")" for c in cyc) or "()"
                )
        return "(" + ", ".join(parts) + ")"


def apply_isotopism(p: PartialLatinSquare, g: Isotopism) -> PartialLatinSquare:
    if g.sizes != p.sizes:
        raise ValueError(f"isotopism degrees {g.sizes} do not match label sizes {p.sizes}")
    return PartialLatinSquare(
        *p.sizes, tuple(g.map_triple(e) for e in p.entries), p.row_labels, p.col_labels, p.sym_labels
    )


def apply_isotopism_bitrade(b: Bitrade, g: Isotopism) -> Bitrade:
    return Bitrade(apply_isotopism(b.t_circ, g), apply_isotopism(b.t_star, g))


# --- isotopism search -------------------------------------------------------


def _signatures(plss: Sequence[PartialLatinSquare]) -> list[list[tuple]]:
    """Isotopy-invariant fingerprint of every label, per coordinate.

    For each square: the label's entry count and the sorted multiset of the
    entry counts of the labels it meets in the other two coordinates.
    """
    sizes = plss[0].sizes
    sigs: list[list[list]] = [[[] for _ in range(n)] for n in sizes]
    for p in plss:
        deg = p.degrees
        per = [[[] for _ in range(n)] for n in sizes]
        for e in p.entries:
            for i in range(3):
                others = tuple(deg[j][e[j]] for j in range(3) if j != i)
                per[i][e[i]].append(others)
        for i in range(3):
            for x in range(sizes[i]):
                sigs[i][x].append((deg[i][x], tuple(sorted(per[i][x]))))
    return [[tuple(s) for s in coord] for coord in sigs]


class _IsotopismSearch:
    """Depth-first search for isotopisms carrying ``sources[k]`` onto ``targets[k]`` for all k.

    Two known coordinates of a source entry force the third through the
    target's functional lookup, so after each choice the maps are closed
    under that propagation.  Branching picks the first unassigned label
    (rows, then columns, then symbols, ascending) that meets an entry with a
    known coordinate, falling back to the first unassigned label; candidate
    images are tried in ascending order.  The first witness found is
    therefore least in that decision order.
    """

    def __init__(self, sources, targets, budget: int):
        self.sources = list(sources)
        self.targets = list(targets)
        self.budget = budget
        self.nodes = 0
        self.sizes = self.sources[0].sizes
        self.feasible = all(
            s.sizes == self.sizes and t.sizes == self.sizes and len(s) == len(t)
            for s, t in zip(self.sources, self.targets)
        )
        if not self.feasible:
            return
        self.src_sig = _signatures(self.sources)
        self.tgt_sig = _signatures(self.targets)
        self.feasible = all(
            sorted(self.src_sig[i]) == sorted(self.tgt_sig[i]) for i in range(3)
        )
        self.adj: list[list[list[tuple[int, Triple]]]] = [[[] for _ in range(n)] for n in self.sizes]
        for k, p in enumerate(self.sources):
            for e in p.entries:
                for i in range(3):
                    self.adj[i][e[i]].append((k, e))
        self.candidates = [
            [
                [t for t in range(n) if self.tgt_sig[i][t] == self.src_sig[i][x]]
                for x in range(n)
            ]
            for i, n in enumerate(self.sizes)
        ]

    def _assign(self, maps, used, coord, x, y) -> bool:
        if y in used[coord] or self.tgt_sig[coord][y] != self.src_sig[coord][x]:
            return False
        maps[coord][x] = y
        used[coord].add(y)
        queue = [(coord, x)]
        while queue:
            d, lab = queue.pop()
            for k, e in self.adj[d][lab]:
                known = [maps[i][e[i]] for i in range(3)]
                unknown = [i for i in range(3) if known[i] < 0]
                if len(unknown) >= 2:
                    continue
                tgt = self.targets[k]
                if not unknown:
                    if Triple(*known) not in tgt:
                        return False
                    continue
                u = unknown[0]
                pair = tuple(i for i in range(3) if i != u)
                hit = tgt.lookup(pair, (known[pair[0]], known[pair[1]]))
                if hit is None:
                    return False
                v = hit[u]
                lab_u = e[u]
                if v in used[u] or self.tgt_sig[u][v] != self.src_sig[u][lab_u]:
                    return False
                maps[u][lab_u] = v
                used[u].add(v)
                queue.append((u, lab_u))
        return True

    def _choose(self, maps) -> tuple[int, int] | None:
        first = None
        for i, n in enumerate(self.sizes):
            for x in range(n):
                if maps[i][x] >= 0:
                    continue
                if first is None:
                    first = (i, x)
                for _, e in self.adj[i][x]:
                    if any(maps[j][e[j]] >= 0 for j in range(3) if j != i):
                        return (i, x)
        return first

    def run(self) -> Iterator[Isotopism]:
        if not self.feasible:
            return
        maps = [[-1] * n for n in self.sizes]
        used: list[set[int]] = [set() for _ in self.sizes]
        yield from self._search(maps, used)

    def _search(self, maps, used) -> Iterator[Isotopism]:
        choice = self._choose(maps)
        if choice is None:
            yield Isotopism(*(Permutation(m) for m in maps))
            return
        coord, x = choice
        for y in self.candidates[coord][x]:
            if y in used[coord]:
                continue
            self.nodes += 1
            if self.nodes > self.budget:
                raise BudgetExceeded("isotopism search", self.budget, self.nodes)
            maps2 = [list(m) for m in maps]
            used2 = [set(u) for u in used]
            if self._assign(maps2, used2, coord, x, y):
                yield from self._search(maps2, used2)


def iter_isotopisms(
    sources: Sequence[PartialLatinSquare],
    targets: Sequence[PartialLatinSquare],
    budget: int = DEFAULT_SEARCH_BUDGET,
) -> Iterator[Isotopism]:
    """Every isotopism mapping each ``sources[k]`` onto ``targets[k]`` simultaneously."""
    return _IsotopismSearch(sources, targets, budget).run()


def are_isotopic(
    p: PartialLatinSquare, q: PartialLatinSquare, budget: int = DEFAULT_SEARCH_BUDGET
) -> Isotopism | None:
    """First witness ``g`` with ``p * g == q``, or ``None``.

    Raises :class:`BudgetExceeded` when the search is cut off, which is not
    the same as a negative answer.
    """
    if p.sizes != q.sizes or len(p) != len(q):
        return None
    return next(iter_isotopisms([p], [q], budget), None)


def are_isotopic_bitrades(
    b1: Bitrade, b2: Bitrade, independent: bool = False, budget: int = DEFAULT_SEARCH_BUDGET
):
    """Isotopism between bitrades.

    By default one isotopism must carry both sides at once.  With
    ``independent=True`` the two sides may use different isotopisms and a
    pair ``(g_circ, g_star)`` is returned.
    """
    if independent:
        g1 = are_isotopic(b1.t_circ, b2.t_circ, budget)
        if g1 is None:
            return None
        g2 = are_isotopic(b1.t_star, b2.t_star, budget)
        return None if g2 is None else (g1, g2)
    if b1.sizes != b2.sizes or len(b1) != len(b2):
        return None
    return next(iter_isotopisms([b1.t_circ, b1.t_star], [b2.t_circ, b2.t_star], budget), None)


def intercalate() -> Bitrade:
    """The 2x2 bitrade: the smallest one there is."""
    circ = PartialLatinSquare.from_grid([[0, 1], [1, 0]])
    star = PartialLatinSquare.from_grid([[1, 0], [0, 1]])
    return Bitrade(circ, star)


def disjoint_union(b1: Bitrade, b2: Bitrade) -> Bitrade:
    """Place ``b2`` on fresh rows, columns and symbols after ``b1``."""
    r, c, s = b1.sizes
    shift = lambda e: (e[0] + r, e[1] + c, e[2] + s)  # noqa: E731
    sizes = tuple(x + y for x, y in zip(b1.sizes, b2.sizes))
    circ = PartialLatinSquare.from_triples(
        list(b1.t_circ) + [shift(e) for e in b2.t_circ], sizes
    )
    star = PartialLatinSquare.from_triples(
        list(b1.t_star) + [shift(e) for e in b2.t_star], sizes
    )
    return Bitrade(circ, star)
