"""Finite groups as Cayley tables, cosets, and the group-based bitrade.

``table[g][h]`` is the product ``g*h``.  Element 0 is always the identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Callable, Hashable, Sequence

from .core import Bitrade, PartialLatinSquare, validate_bitrade
from .perm import Permutation, group_closure
from .report import VerifierReport


class GroupTableError(ValueError):
    pass


class TriadError(ValueError):
    pass


@dataclass(frozen=True)
class CayleyGroup:
    table: tuple[tuple[int, ...], ...]
    name: str = ""
    labels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "table", tuple(tuple(int(x) for x in row) for row in self.table))
        problems = self.problems()
        if problems:
            raise GroupTableError("; ".join(problems))

    @classmethod
    def from_elements(
        cls,
        elements: Sequence[Hashable],
        mul: Callable[[Hashable, Hashable], Hashable],
        identity: Hashable,
        name: str = "",
        label: Callable[[Hashable], str] = str,
    ) -> CayleyGroup:
        elements = [identity] + [x for x in elements if x != identity]
        index = {x: i for i, x in enumerate(elements)}
        table = [[index[mul(x, y)] for y in elements] for x in elements]
        return cls(tuple(map(tuple, table)), name, tuple(label(x) for x in elements))

    @classmethod
    def from_permutations(cls, gens: Sequence[Permutation], name: str = "") -> CayleyGroup:
        group = group_closure(gens)
        return cls.from_elements(
            list(group.elements),
            lambda x, y: x * y,
            group.identity(),
            name,
            lambda p: p.to_cycle_string(),
        )

    def problems(self) -> list[str]:
        """Group-axiom violations of the table (empty list when it is a group)."""
        n = len(self.table)
        out = []
        if n == 0:
            return ["empty table"]
        if any(len(row) != n for row in self.table):
            return ["table is not square"]
        full = set(range(n))
        for g, row in enumerate(self.table):
            if set(row) != full:
                out.append(f"row {g} is not a permutation")
        for h in range(n):
            if {self.table[g][h] for g in range(n)} != full:
                out.append(f"column {h} is not a permutation")
        if out:
            return out
        if any(self.table[0][g] != g or self.table[g][0] != g for g in range(n)):
            out.append("element 0 is not the identity")
        t = self.table
        for a in range(n):
            ta = t[a]
            for b in range(n):
                tab = t[ta[b]]
                tb = t[b]
                for c in range(n):
                    if tab[c] != ta[tb[c]]:
                        out.append(f"not associative at ({a},{b},{c})")
                        return out
        return out

    @property
    def order(self) -> int:
        return len(self.table)

    def __len__(self) -> int:
        return self.order

    identity = 0

    def mul(self, g: int, h: int) -> int:
        return self.table[g][h]

    def prod(self, *gs: int) -> int:
        x = 0
        for g in gs:
            x = self.table[x][g]
        return x

    @cached_property
    def _inverses(self) -> tuple[int, ...]:
        return tuple(row.index(0) for row in self.table)

    def inv(self, g: int) -> int:
        return self._inverses[g]

    def power(self, g: int, k: int) -> int:
        if k < 0:
            g, k = self.inv(g), -k
        x = 0
        for _ in range(k):
            x = self.table[x][g]
        return x

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != 0:
            x = self.table[x][g]
            k += 1
        return k

    def cyclic_subgroup(self, g: int) -> tuple[int, ...]:
        out, x = [0], g
        while x != 0:
            out.append(x)
            x = self.table[x][g]
        return tuple(sorted(out))

    def subgroup_closure(self, gens: Sequence[int]) -> frozenset[int]:
        seen = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.table[x][g]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    def left_cosets(self, subgroup: Sequence[int]) -> tuple[int, ...]:
        """Coset index of each element for the left cosets ``gH``.

        Cosets are numbered in order of their least element, so the least
        element is the representative.
        """
        label = [-1] * self.order
        k = 0
        for g in range(self.order):
            if label[g] < 0:
                for h in subgroup:
                    label[self.table[g][h]] = k
                k += 1
        return tuple(label)

    def is_abelian(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in range(self.order) for b in range(a))

    def center(self) -> frozenset[int]:
        t = self.table
        return frozenset(z for z in range(self.order) if all(t[z][g] == t[g][z] for g in range(self.order)))

    def commutator_subgroup(self) -> frozenset[int]:
        comms = {
            self.prod(self.inv(a), self.inv(b), a, b) for a in range(self.order) for b in range(self.order)
        }
        return self.subgroup_closure(sorted(comms))

    def label(self, g: int) -> str:
        return self.labels[g] if self.labels else str(g)

    def index_of_label(self, text: str) -> int:
        if self.labels and text in self.labels:
            return self.labels.index(text)
        return int(text)

    def fingerprint(self) -> tuple:
        """Cheap isomorphism invariants: element orders, centre, derived subgroup, centralizer sizes, squares."""
        n = self.order
        t = self.table
        orders = sorted(self.element_order(g) for g in range(n))
        cent = sorted(
            (self.element_order(g), sum(1 for h in range(n) if t[g][h] == t[h][g])) for g in range(n)
        )
        squares = sorted(self.element_order(t[g][g]) for g in range(n))
        center = self.center()
        return (
            n,
            tuple(orders),
            len(center),
            tuple(sorted(self.element_order(z) for z in center)),
            len(self.commutator_subgroup()),
            tuple(cent),
            tuple(squares),
            len({t[g][g] for g in range(n)}),
        )


# --- constructions ----------------------------------------------------------


def cyclic(n: int) -> CayleyGroup:
    return CayleyGroup.from_elements(list(range(n)), lambda x, y: (x + y) % n, 0, f"C{n}")


def direct_product(g: CayleyGroup, h: CayleyGroup, name: str | None = None) -> CayleyGroup:
    elems = list(product(range(g.order), range(h.order)))
    return CayleyGroup.from_elements(
        elems,
        lambda x, y: (g.mul(x[0], y[0]), h.mul(x[1], y[1])),
        (0, 0),
        name or f"{g.name}x{h.name}",
        lambda x: f"({g.label(x[0])},{h.label(x[1])})",
    )


def metacyclic(m: int, n: int, r: int, s: int, name: str) -> CayleyGroup:
    """``<x, y | x^m = 1, y^n = x^s, y x y^-1 = x^r>`` on normal forms ``x^i y^j``."""
    if pow(r, n, m) != 1 % m or (r * s - s) % m:
        raise GroupTableError("inconsistent metacyclic parameters")

    def mul(p, q):
        i, j = p
        k, l = q
        e = i + pow(r, j, m) * k
        jl = j + l
        if jl >= n:
            e += s
            jl -= n
        return (e % m, jl)

    elems = [(i, j) for j in range(n) for i in range(m)]
    return CayleyGroup.from_elements(elems, mul, (0, 0), name, lambda p: f"x^{p[0]}y^{p[1]}")


def dihedral(n: int) -> CayleyGroup:
    """Dihedral group of order ``2n``."""
    return metacyclic(n, 2, n - 1, 0, f"D{2 * n}")


def symmetric(k: int) -> CayleyGroup:
    gens = [Permutation.from_cycles([(0, 1)], k)]
    if k > 2:
        gens.append(Permutation.from_cycles([tuple(range(k))], k))
    if k == 1:
        gens = [Permutation.identity(1)]
    return CayleyGroup.from_permutations(gens, f"S{k}")


def alternating4() -> CayleyGroup:
    gens = [Permutation.from_cycles([(0, 1, 2)], 4), Permutation.from_cycles([(0, 1), (2, 3)], 4)]
    return CayleyGroup.from_permutations(gens, "A4")


def _pauli() -> CayleyGroup:
    # i^k X^x Z^z with Z X = -X Z
    elems = list(product(range(4), range(2), range(2)))
    return CayleyGroup.from_elements(
        elems,
        lambda p, q: ((p[0] + q[0] + 2 * p[2] * q[1]) % 4, (p[1] + q[1]) % 2, (p[2] + q[2]) % 2),
        (0, 0, 0),
        "C4oD8",
        lambda p: f"i^{p[0]}X^{p[1]}Z^{p[2]}",
    )


def _c4c2_semidirect_c2() -> CayleyGroup:
    # (C4 x C2) : C2 where the C2 sends a -> ab, b -> b
    def act(t, v):
        i, j = v
        return (i, (j + i * t) % 2)

    def mul(p, q):
        (i, j, t), (k, l, u) = p, q
        k2, l2 = act(t, (k, l))
        return ((i + k2) % 4, (j + l2) % 2, (t + u) % 2)

    elems = list(product(range(4), range(2), range(2)))
    return CayleyGroup.from_elements(
        elems, mul, (0, 0, 0), "(C4xC2):C2", lambda p: f"a^{p[0]}b^{p[1]}c^{p[2]}"
    )


def small_groups(max_order: int = 16) -> list[CayleyGroup]:
    """Every group of order at most ``max_order`` (supported up to 16), one per isomorphism class."""
    if max_order > 16:
        raise ValueError("the catalog covers orders up to 16")
    c = cyclic
    d8 = dihedral(4)
    q8 = metacyclic(4, 2, 3, 2, "Q8")
    by_order: dict[int, list[Callable[[], CayleyGroup]]] = {
        1: [lambda: c(1)],
        2: [lambda: c(2)],
        3: [lambda: c(3)],
        4: [lambda: c(4), lambda: direct_product(c(2), c(2))],
        5: [lambda: c(5)],
        6: [lambda: c(6), lambda: symmetric(3)],
        7: [lambda: c(7)],
        8: [
            lambda: c(8),
            lambda: direct_product(c(4), c(2)),
            lambda: direct_product(direct_product(c(2), c(2)), c(2), "C2xC2xC2"),
            lambda: d8,
            lambda: q8,
        ],
        9: [lambda: c(9), lambda: direct_product(c(3), c(3))],
        10: [lambda: c(10), lambda: dihedral(5)],
        11: [lambda: c(11)],
        12: [
            lambda: c(12),
            lambda: direct_product(c(6), c(2)),
            lambda: dihedral(6),
            alternating4,
            lambda: metacyclic(3, 4, 2, 0, "Dic12"),
        ],
        13: [lambda: c(13)],
        14: [lambda: c(14), lambda: dihedral(7)],
        15: [lambda: c(15)],
        16: [
            lambda: c(16),
            lambda: direct_product(c(4), c(4)),
            _c4c2_semidirect_c2,
            lambda: metacyclic(4, 4, 3, 0, "C4:C4"),
            lambda: direct_product(c(8), c(2)),
            lambda: metacyclic(8, 2, 5, 0, "M16"),
            lambda: dihedral(8),
            lambda: metacyclic(8, 2, 3, 0, "SD16"),
            lambda: metacyclic(8, 2, 7, 4, "Q16"),
            lambda: direct_product(direct_product(c(4), c(2)), c(2), "C4xC2xC2"),
            lambda: direct_product(c(2), d8, "C2xD8"),
            lambda: direct_product(c(2), q8, "C2xQ8"),
            _pauli,
            lambda: direct_product(
                direct_product(c(2), c(2)), direct_product(c(2), c(2)), "C2xC2xC2xC2"
            ),
        ],
    }
    out = []
    for order in range(1, max_order + 1):
        out.extend(make() for make in by_order[order])
    return out


def catalog() -> dict[str, CayleyGroup]:
    """All groups of order at most 16, plus S4."""
    groups = small_groups(16) + [symmetric(4)]
    return {g.name: g for g in groups}


# --- triads and the construction --------------------------------------------


@dataclass(frozen=True)
class TriadSpec:
    group: CayleyGroup
    a: int
    b: int
    c: int

    @classmethod
    def completing(cls, group: CayleyGroup, a: int, b: int) -> TriadSpec:
        """The triad with ``c = (ab)^-1``, so that ``abc = 1``."""
        return cls(group, a, b, group.inv(group.mul(a, b)))


@dataclass(frozen=True)
class TriadReport:
    g1: bool
    g2: bool
    g3: bool

    def to_json(self) -> dict:
        return {"G1": self.g1, "G2": self.g2, "G3": self.g3}


def check_triad(spec: TriadSpec) -> TriadReport:
    g = spec.group
    for name in ("a", "b", "c"):
        x = getattr(spec, name)
        if not 0 <= x < g.order:
            raise TriadError(f"{name}={x} is not an element of a group of order {g.order}")
        if x == 0:
            raise TriadError(f"{name} is the identity; a, b, c must be non-identity elements")
    g1 = g.prod(spec.a, spec.b, spec.c) == 0
    subs = [set(g.cyclic_subgroup(x)) for x in (spec.a, spec.b, spec.c)]
    g2 = all(len(subs[i] & subs[j]) == 1 for i, j in ((0, 1), (0, 2), (1, 2)))
    g3 = len(g.subgroup_closure([spec.a, spec.b, spec.c])) == g.order
    return TriadReport(g1, g2, g3)


@dataclass(frozen=True)
class CosetLabelling:
    """Row, column and symbol index of each group element ``g`` (cosets gA, gB, gC)."""

    row_of: tuple[int, ...]
    col_of: tuple[int, ...]
    sym_of: tuple[int, ...]
    A: tuple[int, ...]
    B: tuple[int, ...]
    C: tuple[int, ...]

    def entry_of(self, g: int) -> tuple[int, int, int]:
        return (self.row_of[g], self.col_of[g], self.sym_of[g])


def group_based_bitrade(spec: TriadSpec) -> tuple[Bitrade, CosetLabelling]:
    """T_circ = {(gA, gB, gC)}, T_star = {(gA, gB, g a^-1 C)} over left cosets."""
    report = check_triad(spec)
    if not report.g1:
        raise TriadError("(G1) fails: abc is not the identity")
    if not report.g2:
        raise TriadError("(G2) fails: the cyclic subgroups do not intersect trivially")
    g = spec.group
    A, B, C = (g.cyclic_subgroup(x) for x in (spec.a, spec.b, spec.c))
    rows, cols, syms = g.left_cosets(A), g.left_cosets(B), g.left_cosets(C)
    sizes = (g.order // len(A), g.order // len(B), g.order // len(C))
    ainv = g.inv(spec.a)
    circ = [(rows[x], cols[x], syms[x]) for x in range(g.order)]
    star = [(rows[x], cols[x], syms[g.mul(x, ainv)]) for x in range(g.order)]

    def coset_labels(coset_of, letter):
        reps: dict[int, int] = {}
        for x in range(g.order):
            reps.setdefault(coset_of[x], x)
        return [f"{g.label(reps[k])}{letter}" for k in range(len(reps))]

    labels = (coset_labels(rows, "A"), coset_labels(cols, "B"), coset_labels(syms, "C"))
    bitrade = Bitrade(
        PartialLatinSquare.from_triples(circ, sizes, labels),
        PartialLatinSquare.from_triples(star, sizes, labels),
    )
    return bitrade, CosetLabelling(rows, cols, syms, A, B, C)


def triads(group: CayleyGroup, require_g2: bool = True):
    """Triads ``(a, b, (ab)^-1)`` of non-identity elements satisfying (G1), and (G2) if asked."""
    for a in range(1, group.order):
        for b in range(1, group.order):
            c = group.inv(group.mul(a, b))
            if c == 0:
                continue
            spec = TriadSpec(group, a, b, c)
            if require_g2 and not check_triad(spec).g2:
                continue
            yield spec


def verify_theorem1(spec: TriadSpec, primary_cap: int = 24, fixture: str = "") -> VerifierReport:
    """Check the construction's claims: validity, size counts, and primary under (G3)."""
    from .analysis import is_primary

    report = VerifierReport(fixture or spec.group.name, "verify_theorem1")
    tr = check_triad(spec)
    report.hypothesis("G1", tr.g1)
    report.hypothesis("G2", tr.g2)
    report.hypothesis("G3", tr.g3)
    if not (tr.g1 and tr.g2):
        report.claim("construction", "inapplicable", "(G1) or (G2) fails")
        return report
    g = spec.group
    b, lab = group_based_bitrade(spec)
    valid = validate_bitrade(b)
    report.check("latin bitrade", valid.ok, None if valid.ok else valid.violations[0].message)
    report.check("size |T| = |G|", len(b.t_circ) == g.order == len(b.t_star), len(b.t_circ))
    for coord, sub, name in ((0, lab.A, "rows"), (1, lab.B, "columns"), (2, lab.C, "symbols")):
        deg = b.t_circ.degrees[coord]
        want_count = g.order // len(sub)
        ok = len(deg) == want_count and all(d == len(sub) for d in deg)
        report.check(f"{want_count} {name} each of size {len(sub)}", ok, list(deg))
    if not tr.g3:
        report.claim("primary", "inapplicable", "(G3) fails")
    elif g.order > primary_cap:
        report.claim("primary", "capped", f"|G| = {g.order} > {primary_cap}")
    else:
        res = is_primary(b)
        report.check("primary", res.status == "primary", res.to_json())
    return report
