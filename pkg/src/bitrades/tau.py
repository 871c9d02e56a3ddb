"""The beta maps, the tau representation, separatedness and genus.

Entries of the trade are numbered row-major (by row, then column); that
ordinal is the point set every tau permutation acts on.  Products follow the
right-action convention of :mod:`bitrades.perm`, so ``tau1 * tau2 * tau3`` is
"apply tau1, then tau2, then tau3".
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import Bitrade, Triple, require_bitrade
from .perm import Permutation, orbits


class GenusError(ValueError):
    """Genus refused: the bitrade is not separated, or its tau group is intransitive."""

    def __init__(self, reason: str, orbit_genera: list | None = None):
        super().__init__(reason)
        self.reason = reason
        self.orbit_genera = orbit_genera


@dataclass(frozen=True)
class TauRepresentation:
    m: int
    tau1: Permutation
    tau2: Permutation
    tau3: Permutation
    # beta_r as index maps from star ordinals to circ ordinals; absent when
    # the representation was given directly rather than computed.
    beta1: tuple[int, ...] | None = None
    beta2: tuple[int, ...] | None = None
    beta3: tuple[int, ...] | None = None
    circ_entries: tuple[Triple, ...] | None = field(default=None, repr=False)
    star_entries: tuple[Triple, ...] | None = field(default=None, repr=False)

    @classmethod
    def from_perms(cls, tau1: Permutation, tau2: Permutation, tau3: Permutation) -> TauRepresentation:
        return cls(tau1.degree, tau1, tau2, tau3)

    @property
    def taus(self) -> tuple[Permutation, Permutation, Permutation]:
        return (self.tau1, self.tau2, self.tau3)

    @property
    def cycles1(self) -> list[tuple[int, ...]]:
        return self.tau1.cycles(include_fixed=True)

    @property
    def cycles2(self) -> list[tuple[int, ...]]:
        return self.tau2.cycles(include_fixed=True)

    @property
    def cycles3(self) -> list[tuple[int, ...]]:
        return self.tau3.cycles(include_fixed=True)

    def cycle_sets(self) -> tuple[list, list, list]:
        return (self.cycles1, self.cycles2, self.cycles3)

    def cycle_counts(self) -> tuple[int, int, int]:
        return tuple(t.cycle_count() for t in self.taus)  # type: ignore[return-value]

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "tau1": self.tau1.to_cycle_string(),
            "tau2": self.tau2.to_cycle_string(),
            "tau3": self.tau3.to_cycle_string(),
            "entries": None if self.circ_entries is None else [list(e) for e in self.circ_entries],
        }


def compute_beta(b: Bitrade, r: int) -> tuple[int, ...]:
    """beta_r: the star entry at ordinal ``k`` goes to the circ entry differing only in coordinate ``r`` (1..3)."""
    require_bitrade(b)
    return _beta(b, r)


def _beta(b: Bitrade, r: int) -> tuple[int, ...]:
    if r not in (1, 2, 3):
        raise ValueError("coordinate must be 1, 2 or 3")
    keep = tuple(i for i in range(3) if i != r - 1)
    circ_index = b.t_circ.index_of
    images = []
    for e in b.t_star.entries:
        hit = b.t_circ.lookup(keep, (e[keep[0]], e[keep[1]]))
        images.append(circ_index[hit])
    return tuple(images)


def compute_tau(b: Bitrade) -> TauRepresentation:
    require_bitrade(b)
    m = len(b.t_circ)
    if m == 0:
        raise ValueError("tau representation of an empty bitrade")
    betas = [_beta(b, r) for r in (1, 2, 3)]
    perms = [Permutation(bt) for bt in betas]  # star ordinal -> circ ordinal
    inv = [~p for p in perms]
    tau1 = inv[1] * perms[2]
    tau2 = inv[2] * perms[0]
    tau3 = inv[0] * perms[1]
    rep = TauRepresentation(
        m, tau1, tau2, tau3, *betas, b.t_circ.entries, b.t_star.entries
    )
    q = verify_Q_properties(rep)
    if not q.ok:
        raise AssertionError(f"tau representation of a valid bitrade breaks the Q properties: {q}")
    return rep


@dataclass(frozen=True)
class QReport:
    q1: tuple | None
    q2: tuple | None
    q3: tuple | None

    @property
    def ok(self) -> bool:
        return self.q1 is None and self.q2 is None and self.q3 is None

    def to_json(self) -> dict:
        fmt = lambda w: "ok" if w is None else {"witness": repr(w)}  # noqa: E731
        return {"q1": fmt(self.q1), "q2": fmt(self.q2), "q3": fmt(self.q3)}


def verify_Q_properties(t: TauRepresentation) -> QReport:
    """Check the three tau properties independently, each with a witness on failure.

    q1: cycles of different taus share at most one moved point;
    q2: no tau has a fixed point;
    q3: tau1 * tau2 * tau3 is the identity.
    """
    q1 = None
    cycle_sets = [tuple(c for c in p.cycles()) for p in t.taus]
    for r in range(3):
        for s in range(r + 1, 3):
            for rho in cycle_sets[r]:
                srho = set(rho)
                for mu in cycle_sets[s]:
                    common = srho.intersection(mu)
                    if len(common) > 1:
                        q1 = (r + 1, rho, s + 1, mu, tuple(sorted(common)))
                        break
                if q1:
                    break
            if q1:
                break
        if q1:
            break
    q2 = None
    for i, p in enumerate(t.taus):
        fixed = p.fixed_points()
        if fixed:
            q2 = (i + 1, fixed[0])
            break
    product = t.tau1 * t.tau2 * t.tau3
    q3 = None if product.is_identity() else (product.to_cycle_string(),)
    return QReport(q1, q2, q3)


@dataclass(frozen=True)
class SeparationReport:
    separated: bool
    row_counts: dict[int, int]
    col_counts: dict[int, int]
    sym_counts: dict[int, int]
    # literal |A_i|: total cycle count of each tau
    cycle_totals: tuple[int, int, int]

    def __bool__(self) -> bool:
        return self.separated

    def to_json(self) -> dict:
        return {
            "separated": self.separated,
            "row_cycle_counts": {str(k): v for k, v in self.row_counts.items()},
            "col_cycle_counts": {str(k): v for k, v in self.col_counts.items()},
            "sym_cycle_counts": {str(k): v for k, v in self.sym_counts.items()},
            "cycle_totals": list(self.cycle_totals),
        }


def is_separated(b: Bitrade, rep: TauRepresentation | None = None) -> SeparationReport:
    """Per-label reading: each occupied row meets exactly one tau1 cycle, and so on."""
    rep = rep or compute_tau(b)
    entries = b.t_circ.entries
    counts = []
    for coord, cycles in enumerate(rep.cycle_sets()):
        per: dict[int, int] = {}
        for cyc in cycles:
            labels = {entries[x][coord] for x in cyc}
            if len(labels) != 1:
                raise AssertionError(f"tau{coord + 1} cycle {cyc} leaves its line")
            lab = labels.pop()
            per[lab] = per.get(lab, 0) + 1
        counts.append(dict(sorted(per.items())))
    separated = all(v == 1 for c in counts for v in c.values())
    return SeparationReport(separated, *counts, rep.cycle_counts())


def tau_orbits(rep: TauRepresentation) -> list[list[int]]:
    return orbits(rep.taus, rep.m)


def genus(b: Bitrade, rep: TauRepresentation | None = None) -> int:
    """Genus g from ``2 - 2g = z(tau1) + z(tau2) + z(tau3) - |T|``.

    Refuses non-separated bitrades and, for intransitive tau groups, reports
    each orbit's genus in the raised :class:`GenusError`.
    """
    rep = rep or compute_tau(b)
    sep = is_separated(b, rep)
    if not sep.separated:
        raise GenusError("bitrade is not separated; genus is not defined here")
    orbs = tau_orbits(rep)
    if len(orbs) > 1:
        per = []
        for orb in orbs:
            pts = set(orb)
            z = sum(
                sum(1 for c in p.cycles(include_fixed=True) if c[0] in pts) for p in rep.taus
            )
            per.append(_genus_of(z, len(orb)))
        raise GenusError("tau group is intransitive; the embedding is disconnected", per)
    z = sum(rep.cycle_counts())
    g = _genus_of(z, rep.m)
    if not isinstance(g, int):
        raise GenusError(f"Euler characteristic gives non-integral or negative genus: {g}")
    return g


def _genus_of(z: int, m: int):
    two_minus_2g = z - m
    num = 2 - two_minus_2g
    if num % 2 or num < 0:
        return f"invalid (2-2g = {two_minus_2g})"
    return num // 2
