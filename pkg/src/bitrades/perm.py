"""Permutations and small permutation groups.

Permutations act on the right: ``x * (p * q)`` means apply ``p`` first and
then ``q``.  In image-array terms ``(p * q)[x] == q[p[x]]``.  Every group
here is small enough to enumerate in full, so there is no stabilizer chain
machinery; enumeration is capped instead.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

DEFAULT_GROUP_CAP = 20160


class CapExceeded(RuntimeError):
    """Raised when an enumeration or search would exceed its configured cap."""

    def __init__(self, what: str, cap: int, reached: int):
        super().__init__(f"{what}: cap {cap} exceeded (reached {reached})")
        self.what = what
        self.cap = cap
        self.reached = reached


class Permutation:
    """A bijection of ``{0, ..., degree - 1}`` stored as its image array."""

    __slots__ = ("images", "_hash")

    def __init__(self, images: Iterable[int]):
        images = tuple(images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation: {images}")
        self.images = images
        self._hash = hash(images)

    @classmethod
    def identity(cls, degree: int) -> Permutation:
        return cls(range(degree))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> Permutation:
        images = list(range(degree))
        seen: set[int] = set()
        for cyc in cycles:
            for x in cyc:
                if not 0 <= x < degree:
                    raise ValueError(f"point {x} outside degree {degree}")
                if x in seen:
                    raise ValueError(f"point {x} repeated in cycle notation")
                seen.add(x)
            for i, x in enumerate(cyc):
                images[x] = cyc[(i + 1) % len(cyc)]
        return cls(images)

    @classmethod
    def parse(cls, text: str, degree: int) -> Permutation:
        """Parse disjoint-cycle notation such as ``"(0,1,2)(3,4)"``; ``"()"`` is the identity."""
        text = text.strip()
        if not re.fullmatch(r"(\(\s*(\d+(\s*,\s*\d+)*)?\s*\))+", text):
            raise ValueError(f"bad cycle notation: {text!r}")
        cycles = []
        for body in re.findall(r"\(([^)]*)\)", text):
            if body.strip():
                cycles.append([int(tok) for tok in body.split(",")])
        return cls.from_cycles(cycles, degree)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __getitem__(self, x: int) -> int:
        return self.images[x]

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: Permutation) -> Permutation:
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        o = other.images
        return Permutation(o[x] for x in self.images)

    def __pow__(self, k: int) -> Permutation:
        if k < 0:
            return (~self) ** (-k)
        result = Permutation.identity(self.degree)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __invert__(self) -> Permutation:
        inv = [0] * self.degree
        for x, y in enumerate(self.images):
            inv[y] = x
        return Permutation(inv)

    inverse = __invert__

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __lt__(self, other: Permutation) -> bool:
        return self.images < other.images

    def __hash__(self) -> int:
        return self._hash

    def is_identity(self) -> bool:
        return all(x == y for x, y in enumerate(self.images))

    def fixed_points(self) -> list[int]:
        return [x for x, y in enumerate(self.images) if x == y]

    def moved_points(self) -> set[int]:
        return {x for x, y in enumerate(self.images) if x != y}

    def cycles(self, include_fixed: bool = False) -> list[tuple[int, ...]]:
        """Disjoint cycles, each starting at its least point, ordered by that point."""
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            x = self.images[start]
            while x != start:
                cyc.append(x)
                seen[x] = True
                x = self.images[x]
            if len(cyc) > 1 or include_fixed:
                out.append(tuple(cyc))
        return out

    def cycle_count(self) -> int:
        """Number of cycles, fixed points included."""
        return len(self.cycles(include_fixed=True))

    def order(self) -> int:
        from math import lcm

        return lcm(*(len(c) for c in self.cycles(include_fixed=True))) if self.degree else 1

    def to_cycle_string(self, offset: int = 0) -> str:
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join("(" + ",".join(str(x + offset) for x in c) + ")" for c in cycles)

    def __str__(self) -> str:
        return self.to_cycle_string()

    def __repr__(self) -> str:
        return f"Permutation({self.to_cycle_string()}, degree={self.degree})"


def compose(*perms: Permutation) -> Permutation:
    """Left-to-right product ``perms[0] * perms[1] * ...``."""
    if not perms:
        raise ValueError("compose needs at least one permutation")
    result = perms[0]
    for p in perms[1:]:
        result = result * p
    return result


@dataclass
class PermGroup:
    """A finite permutation group with its full element list.

    ``elements`` is sorted lexicographically by image array, so reports and
    iteration order never depend on discovery order.
    """

    degree: int
    generators: tuple[Permutation, ...]
    elements: tuple[Permutation, ...]
    _members: frozenset[Permutation] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self._members = frozenset(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, p: Permutation) -> bool:
        return p in self._members

    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    def same_elements(self, other: PermGroup) -> bool:
        return self.degree == other.degree and self._members == other._members

    def is_subgroup_of(self, other: PermGroup) -> bool:
        return self._members <= other._members

    def orbits(self) -> list[list[int]]:
        return orbits(self.generators, self.degree)

    def is_transitive(self) -> bool:
        return len(self.orbits()) <= 1

    def is_abelian(self) -> bool:
        gens = self.generators
        return all(g * h == h * g for i, g in enumerate(gens) for h in gens[i + 1:])

    def natural_action(self) -> GroupAction:
        return GroupAction(self, self.degree)


def group_closure(
    gens: Sequence[Permutation], degree: int | None = None, cap: int = DEFAULT_GROUP_CAP
) -> PermGroup:
    """Enumerate ``<gens>`` breadth-first; raise :class:`CapExceeded` past ``cap`` elements."""
    gens = tuple(gens)
    if degree is None:
        if not gens:
            raise ValueError("degree is required when there are no generators")
        degree = gens[0].degree
    if any(g.degree != degree for g in gens):
        raise ValueError("generators must share a degree")
    ident = Permutation.identity(degree)
    seen = {ident}
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = x * g
            if y not in seen:
                seen.add(y)
                if len(seen) > cap:
                    raise CapExceeded("group closure", cap, len(seen))
                queue.append(y)
    return PermGroup(degree, gens, tuple(sorted(seen)))


def group_from_elements(elements: Iterable[Permutation], degree: int) -> PermGroup:
    """Wrap an element set known to be a group, picking a small generating set greedily."""
    elements = sorted(set(elements))
    members = set(elements)
    gens: list[Permutation] = []
    span = {Permutation.identity(degree)}
    for g in elements:
        if g not in span:
            gens.append(g)
            try:
                span = set(group_closure(gens, degree, cap=len(members)).elements)
            except CapExceeded:
                raise ValueError("element set is not closed under multiplication") from None
    if span != members:
        raise ValueError("element set is not closed under multiplication")
    return PermGroup(degree, tuple(gens), tuple(elements))


def orbits(gens: Sequence[Permutation], degree: int) -> list[list[int]]:
    seen = [False] * degree
    out = []
    for start in range(degree):
        if seen[start]:
            continue
        orb = [start]
        seen[start] = True
        i = 0
        while i < len(orb):
            x = orb[i]
            i += 1
            for g in gens:
                y = g[x]
                if not seen[y]:
                    seen[y] = True
                    orb.append(y)
        out.append(sorted(orb))
    return out


def _extend_from_base(
    gens: Sequence[Permutation], orbit: Sequence[int], base: int, image: int, degree: int
) -> dict[int, int] | None:
    """Try to build a map commuting with ``gens`` on ``orbit`` that sends base to image.

    The map is forced along the Schreier tree (``z(p*g) = z(p)*g``); every
    generator edge is then re-checked.  Returns ``None`` if inconsistent or
    not injective.
    """
    z = {base: image}
    queue = deque([base])
    while queue:
        p = queue.popleft()
        for g in gens:
            q = g[p]
            zq = g[z[p]]
            if q in z:
                if z[q] != zq:
                    return None
            else:
                z[q] = zq
                queue.append(q)
    if len(set(z.values())) != len(z) or len(z) != len(orbit):
        return None
    return z


def centralizer_in_sym(group: PermGroup, cap: int = DEFAULT_GROUP_CAP) -> PermGroup:
    """All permutations of the group's points commuting with every generator."""
    return centralizer_of_generators(group.generators, group.degree, cap)


def centralizer_of_generators(
    gens: Sequence[Permutation], degree: int, cap: int = DEFAULT_GROUP_CAP
) -> PermGroup:
    """Centralizer in the symmetric group of ``<gens>``, without enumerating ``<gens>``.

    A centralizing element is fixed by where it sends one base point per
    orbit, so candidates are the at most ``degree`` images per orbit rather
    than a scan of the symmetric group.
    """
    gens = tuple(gens)
    orbs = orbits(gens, degree)
    orbit_of = {}
    for i, orb in enumerate(orbs):
        for x in orb:
            orbit_of[x] = i
    options: list[list[tuple[int, dict[int, int]]]] = []
    for orb in orbs:
        base = orb[0]
        opts = []
        for y in range(degree):
            if len(orbs[orbit_of[y]]) != len(orb):
                continue
            z = _extend_from_base(gens, orb, base, y, degree)
            if z is not None:
                opts.append((orbit_of[y], z))
        options.append(opts)

    found: list[Permutation] = []

    def assign(i: int, used: set[int], images: list[int]) -> None:
        if i == len(orbs):
            found.append(Permutation(images))
            if len(found) > cap:
                raise CapExceeded("centralizer", cap, len(found))
            return
        for target, z in options[i]:
            if target in used:
                continue
            for x, y in z.items():
                images[x] = y
            used.add(target)
            assign(i + 1, used, images)
            used.discard(target)

    assign(0, set(), list(range(degree)))
    return group_from_elements(found, degree)


def commutes_with_all(p: Permutation, perms: Iterable[Permutation]) -> bool:
    return all(p * g == g * p for g in perms)


def simultaneous_conjugator(
    src: Sequence[Permutation], dst: Sequence[Permutation]
) -> Permutation | None:
    """Some ``s`` with ``s^-1 * src[i] * s == dst[i]`` for every ``i``, or ``None``.

    ``<src>`` must be transitive: then ``s`` is fixed by the image of point
    0, so trying every image is a complete search.
    """
    if len(src) != len(dst):
        raise ValueError("need equally many permutations on each side")
    if not src:
        raise ValueError("need at least one permutation")
    n = src[0].degree
    if any(p.degree != n for p in (*src, *dst)):
        raise ValueError("degree mismatch")
    if len(orbits(src, n)) > 1:
        raise ValueError("source permutations must generate a transitive group")
    for start in range(n):
        s = {0: start}
        queue = deque([0])
        ok = True
        while queue and ok:
            x = queue.popleft()
            for a, b in zip(src, dst):
                y, t = a[x], b[s[x]]
                if y not in s:
                    s[y] = t
                    queue.append(y)
                elif s[y] != t:
                    ok = False
                    break
        if ok and len(set(s.values())) == n:
            return Permutation(s[x] for x in range(n))
    return None


@dataclass
class GroupAction:
    """A permutation group acting on ``{0..n_points-1}``.

    ``act(g, x)`` defaults to the natural action ``g[x]``; induced actions
    (for instance autotopisms moving latin square entries) pass their own.
    """

    group: PermGroup
    n_points: int
    act: Callable[[Permutation, int], int] | None = None

    def image(self, g: Permutation, x: int) -> int:
        return g[x] if self.act is None else self.act(g, x)

    def point_permutation(self, g: Permutation) -> Permutation:
        return Permutation(self.image(g, x) for x in range(self.n_points))

    def orbits(self) -> list[list[int]]:
        perms = [self.point_permutation(g) for g in self.group.generators]
        return orbits(perms, self.n_points)


def is_transitive_action(action: GroupAction) -> bool:
    return len(action.orbits()) == 1 if action.n_points else True


def is_regular_action(action: GroupAction) -> bool:
    """Regularity checked twice: by counting mappers per pair, and as transitive with ``|G| = |X|``."""
    n = action.n_points
    images = [action.point_permutation(g) for g in action.group.elements]
    by_pairs = True
    for x in range(n):
        counts = [0] * n
        for p in images:
            counts[p[x]] += 1
        if any(c != 1 for c in counts):
            by_pairs = False
            break
    by_counting = is_transitive_action(action) and action.group.order == n
    if by_pairs != by_counting:
        raise AssertionError("regularity routes disagree")
    return by_pairs


def regular_representations(group) -> tuple[PermGroup, PermGroup]:
    """Right and left regular representations of a Cayley-table group.

    Right: ``x`` sends ``a`` to ``a*x``.  Left: ``y`` sends ``a`` to ``y^-1 * a``.
    Element ``k`` of each returned list corresponds to group element ``k``;
    use :func:`right_regular_perm` / :func:`left_regular_perm` for that pairing.
    """
    n = group.order
    right = [right_regular_perm(group, x) for x in range(n)]
    left = [left_regular_perm(group, y) for y in range(n)]
    return group_from_elements(right, n), group_from_elements(left, n)


def right_regular_perm(group, x: int) -> Permutation:
    return Permutation(group.mul(a, x) for a in range(group.order))


def left_regular_perm(group, y: int) -> Permutation:
    yinv = group.inv(y)
    return Permutation(group.mul(yinv, a) for a in range(group.order))
