"""Slow, obviously-correct reference implementations used to check the library.

Nothing here shares code with the package beyond the plain data classes: each
oracle recomputes its answer straight from the definitions, usually by
exhausting every candidate.
"""

from __future__ import annotations

import random
from itertools import combinations, permutations

from bitrades.core import Bitrade, PartialLatinSquare
from bitrades.groups import TriadSpec, catalog, group_based_bitrade, triads


def is_latin(entries, sizes) -> bool:
    for i, j in ((0, 1), (0, 2), (1, 2)):
        seen = set()
        for e in entries:
            key = (e[i], e[j])
            if key in seen:
                return False
            seen.add(key)
    return all(0 <= e[k] < sizes[k] for e in entries for k in range(3))


def is_bitrade(circ, star, sizes) -> bool:
    """(R1)-(R3) read literally: disjoint, and a unique partner agreeing in each coordinate pair."""
    circ, star = set(map(tuple, circ)), set(map(tuple, star))
    if circ & star or not is_latin(circ, sizes) or not is_latin(star, sizes):
        return False
    for src, dst in ((circ, star), (star, circ)):
        for e in src:
            for i, j in ((0, 1), (0, 2), (1, 2)):
                if sum(1 for f in dst if f[i] == e[i] and f[j] == e[j]) != 1:
                    return False
    return True


def tau_naive(b: Bitrade):
    """tau_r as image lists on circ ordinals, from the defining partner walks.

    tau1 = beta2^-1 beta3: step from a circ entry to the star entry sharing
    its row and symbol, then back to the circ entry sharing that star
    entry's row and column.
    """
    circ, star = list(b.t_circ.entries), list(b.t_star.entries)

    def partner(e, side, keep):
        return next(f for f in side if all(f[k] == e[k] for k in keep))

    out = []
    # beta_r changes coordinate r: tau_r = beta_{r+1}^-1 beta_{r+2}
    for r in range(3):
        first = [k for k in range(3) if k != (r + 1) % 3]
        second = [k for k in range(3) if k != (r + 2) % 3]
        images = []
        for e in circ:
            s = partner(e, star, first)
            images.append(circ.index(partner(s, circ, second)))
        out.append(images)
    return out


def cycles_naive(images):
    seen, out = set(), []
    for x in range(len(images)):
        if x in seen:
            continue
        cyc = [x]
        seen.add(x)
        y = images[x]
        while y != x:
            cyc.append(y)
            seen.add(y)
            y = images[y]
        out.append(cyc)
    return out


def genus_naive(b: Bitrade) -> int:
    counts = [len(cycles_naive(t)) for t in tau_naive(b)]
    return (2 + len(b.t_circ) - sum(counts)) // 2


def autotopisms_naive(p: PartialLatinSquare) -> set[tuple[tuple, tuple, tuple]]:
    """Every (a1, a2, a3) fixing ``p``: rows and columns exhaustively, symbols by forcing."""
    r, c, s = p.sizes
    entries = set(p.entries)
    out = set()
    for a1 in permutations(range(r)):
        for a2 in permutations(range(c)):
            a3: dict[int, int] = {}
            ok = True
            for e in entries:
                img = p.cell(a1[e[0]], a2[e[1]])
                if img is None or a3.setdefault(e[2], img) != img:
                    ok = False
                    break
            if not ok or len(set(a3.values())) != len(a3):
                continue
            free_src = [x for x in range(s) if x not in a3]
            free_dst = [x for x in range(s) if x not in a3.values()]
            for rest in permutations(free_dst):
                full = dict(a3)
                full.update(zip(free_src, rest))
                if {(a1[e[0]], a2[e[1]], full[e[2]]) for e in entries} == entries:
                    out.add((a1, a2, tuple(full[x] for x in range(s))))
    return out


def mates_naive(p: PartialLatinSquare) -> list[tuple]:
    """All disjoint mates, by cell-by-cell backtracking over the symbols each line must reuse."""
    cells = [(e.row, e.col, e.sym) for e in p.entries]
    rows = {i: set(p.line_symbols(0, i)) for i in p.occupied(0)}
    cols = {j: set(p.line_symbols(1, j)) for j in p.occupied(1)}
    used_r = {i: set() for i in rows}
    used_c = {j: set() for j in cols}
    pick: list[int] = []
    out = []

    def step(k):
        if k == len(cells):
            out.append(tuple(sorted((r, c, s) for (r, c, _), s in zip(cells, pick))))
            return
        r, c, old = cells[k]
        for s in sorted((rows[r] & cols[c]) - used_r[r] - used_c[c] - {old}):
            used_r[r].add(s)
            used_c[c].add(s)
            pick.append(s)
            step(k + 1)
            pick.pop()
            used_r[r].discard(s)
            used_c[c].discard(s)

    step(0)
    return sorted(out)


def has_proper_subbitrade(b: Bitrade) -> bool:
    """Try every nonempty proper subset of the trade with the mate restricted to the same cells."""
    circ = list(b.t_circ.entries)
    star = {(e.row, e.col): e for e in b.t_star.entries}
    for k in range(1, len(circ)):
        for sub in combinations(circ, k):
            mate = [star[(e.row, e.col)] for e in sub]
            if is_bitrade(sub, mate, b.sizes):
                return True
    return False


def centralizer_naive(gens, n: int) -> set[tuple[int, ...]]:
    out = set()
    for p in permutations(range(n)):
        if all(all(p[g[x]] == g[p[x]] for x in range(n)) for g in gens):
            out.add(p)
    return out


def is_group_table(table) -> bool:
    n = len(table)
    rng = range(n)
    return (
        all(sorted(row) == list(rng) for row in table)
        and all(sorted(table[i][j] for i in rng) == list(rng) for j in rng)
        and all(table[0][x] == x == table[x][0] for x in rng)
        and all(table[table[a][b]][c] == table[a][table[b][c]] for a in rng for b in rng for c in rng)
    )


# --- generators ---------------------------------------------------------------


def random_isotope(b: Bitrade, rng: random.Random) -> Bitrade:
    maps = []
    for n in b.sizes:
        perm = list(range(n))
        rng.shuffle(perm)
        maps.append(perm)

    def move(p):
        return PartialLatinSquare.from_triples(
            [(maps[0][e.row], maps[1][e.col], maps[2][e.sym]) for e in p.entries], p.sizes
        )

    return Bitrade(move(b.t_circ), move(b.t_star))


def group_bitrades(max_order: int = 16, require_g3: bool = False):
    """(group name, triad, bitrade) for every (G1)+(G2) triad of each catalog group up to ``max_order``."""
    for name, g in catalog().items():
        if g.order > max_order:
            continue
        for spec in triads(g):
            if require_g3 and len(g.subgroup_closure([spec.a, spec.b, spec.c])) != g.order:
                continue
            yield name, spec, group_based_bitrade(spec)[0]


def random_bitrades(count: int, seed: int, max_order: int = 16):
    pool = [(name, spec) for name, spec, _ in group_bitrades(max_order)]
    rng = random.Random(seed)
    for _ in range(count):
        name, spec = rng.choice(pool)
        b = group_based_bitrade(TriadSpec(spec.group, spec.a, spec.b, spec.c))[0]
        yield name, random_isotope(b, rng)
