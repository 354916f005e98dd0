"""G-sets as disjoint unions of coset orbits G/H.

Every orbit whose declared stabilizer is conjugate to a class representative
``H_i`` is stored as a copy of ``G/H_i`` (the two are isomorphic G-sets), so all
orbits of one stratum share a single coset table and the orbit's designated
representative ``(i, λ, 0)`` has stabilizer exactly ``H_i``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, NamedTuple, Sequence

from .errors import MalformedInput, UnsupportedCase
from .groups import FiniteGroup, Subgroup, SubgroupConjClass

INF = math.inf

ALL_FINITE = "all-finite"
CASE1 = "case1"
CASE2 = "case2"
UNSUPPORTED = "unsupported-infinite"


class Point(NamedTuple):
    stratum: int
    orbit: int
    coset: int


@dataclass(frozen=True)
class OrbitSpec:
    stabilizer: Subgroup
    multiplicity: int | float = 1  # finite m >= 1, or INF


@dataclass(frozen=True)
class CollapseTarget:
    subgroup: Subgroup            # K_{i,j}
    point: Point                  # y_{i,j}, stabilizer exactly K_{i,j}
    n_class: tuple[Subgroup, ...]  # [K_{i,j}]_{N_i}


@dataclass(eq=False)
class Stratum:
    index: int
    conj_class: SubgroupConjClass
    orbit_count: int | float
    normalizer: Subgroup
    coset_reps: tuple[int, ...]
    coset_of: tuple[int, ...]
    act_table: tuple[tuple[int, ...], ...]   # act_table[g][c]
    coset_stabilizers: tuple[Subgroup, ...]
    collapse_targets: list[CollapseTarget] = field(default_factory=list)

    @property
    def H(self) -> Subgroup:
        return self.conj_class.representative

    @property
    def index_in_group(self) -> int:
        return len(self.coset_reps)

    @property
    def is_infinite(self) -> bool:
        return self.orbit_count == INF

    @property
    def x(self) -> Point:
        return Point(self.index, 0, 0)

    @property
    def x_prime(self) -> Point | None:
        return Point(self.index, 1, 0) if self.orbit_count >= 2 else None

    def reps(self) -> Iterator[Point]:
        """Orbit representatives X_i (lazy; unbounded on an infinite stratum)."""
        lam = 0
        while lam < self.orbit_count:
            yield Point(self.index, lam, 0)
            lam += 1


def _coset_data(g: FiniteGroup, h: Subgroup):
    reps = []
    coset_of = [-1] * g.order
    for a in g.elements:
        if coset_of[a] >= 0:
            continue
        cid = len(reps)
        reps.append(a)
        for x in h.members:
            coset_of[g.mul(a, x)] = cid
    act = tuple(tuple(coset_of[g.mul(s, a)] for a in reps) for s in g.elements)
    # stabilizer of aH is aHa^-1, i.e. the conjugate by a^-1
    stabs = tuple(g.conjugate(h, g.inv(a)) for a in reps)
    return tuple(reps), tuple(coset_of), act, stabs


class GSet:
    def __init__(self, group: FiniteGroup, orbits: Sequence[OrbitSpec]):
        self.group = group
        self.orbit_specs = tuple(orbits)
        if not self.orbit_specs:
            raise MalformedInput("a G-set needs at least one orbit")
        counts: dict[int, int | float] = {}
        for spec in self.orbit_specs:
            k = spec.stabilizer
            if not all(0 <= x < group.order for x in k.members):
                raise MalformedInput("stabilizer is not a subgroup of the group")
            group.subgroup(k.members)
            m = spec.multiplicity
            if not (m == INF or (isinstance(m, int) and m >= 1)):
                raise MalformedInput(f"orbit multiplicity must be a positive integer or inf, got {m!r}")
            c = group.class_of(k)
            counts[c] = counts.get(c, 0) + m
        if sum(1 for s in self.orbit_specs if s.multiplicity == INF) > 1:
            raise MalformedInput("at most one orbit family may be countably infinite")

        classes = group.conj_classes_of_subgroups()
        self.strata: list[Stratum] = []
        self._stratum_of_class: dict[int, int] = {}
        for c in sorted(counts):
            cc = classes[c]
            reps, coset_of, act, stabs = _coset_data(group, cc.representative)
            st = Stratum(
                index=len(self.strata),
                conj_class=cc,
                orbit_count=counts[c],
                normalizer=group.normalizer(cc.representative),
                coset_reps=reps,
                coset_of=coset_of,
                act_table=act,
                coset_stabilizers=stabs,
            )
            self._stratum_of_class[c] = st.index
            self.strata.append(st)

        inf = [s.index for s in self.strata if s.is_infinite]
        self.infinite_stratum: int | None = inf[0] if inf else None
        if self.infinite_stratum is None:
            self.case_tag = ALL_FINITE
        else:
            h = self.strata[self.infinite_stratum].H
            if h == group.trivial:
                self.case_tag = CASE2
            elif h == group.whole:
                self.case_tag = CASE1
            else:
                self.case_tag = UNSUPPORTED
        for st in self.strata:
            st.collapse_targets = self._collapse_targets(st)

    # -- structure -----------------------------------------------------------

    def _collapse_targets(self, st: Stratum) -> list[CollapseTarget]:
        g = self.group
        h = st.H
        cands = [k for k in self.stab_subgroups if h.issubgroup(k) and k != h]
        done: set[Subgroup] = set()
        out = []
        for k in cands:
            if k in done:
                continue
            ncls = tuple(g.n_conj_class(k, st.normalizer))
            done.update(ncls)
            out.append(CollapseTarget(k, self.point_with_stabilizer(k), ncls))
        return out

    def point_with_stabilizer(self, k: Subgroup) -> Point:
        """Lowest-index point whose stabilizer is exactly k."""
        s = self._stratum_of_class.get(self.group.class_of(k))
        if s is None:
            raise MalformedInput(f"{k} is not a stabilizer in this G-set")
        st = self.strata[s]
        for c, stab in enumerate(st.coset_stabilizers):
            if stab == k:
                return Point(s, 0, c)
        raise AssertionError("conjugate stabilizer must occur in the orbit")

    @cached_property
    def stab_subgroups(self) -> list[Subgroup]:
        """Stab_G(X), sorted by (size, members)."""
        out = []
        for st in self.strata:
            out.extend(st.conj_class.members)
        return sorted(out, key=Subgroup.key)

    def stab_classes(self) -> tuple[list[Subgroup], list[SubgroupConjClass]]:
        return self.stab_subgroups, [st.conj_class for st in self.strata]

    def stratum_of_subgroup(self, k: Subgroup) -> int | None:
        return self._stratum_of_class.get(self.group.class_of(k))

    @property
    def is_finite(self) -> bool:
        return self.infinite_stratum is None

    @property
    def finite_strata(self) -> list[Stratum]:
        return [s for s in self.strata if not s.is_infinite]

    def require_supported(self) -> None:
        if self.case_tag == UNSUPPORTED:
            raise UnsupportedCase("infinite stratum at an intermediate subgroup is not supported")

    def require_finite(self) -> None:
        if not self.is_finite:
            raise UnsupportedCase("operation requires an all-finite G-set")

    # -- points --------------------------------------------------------------

    def validate_point(self, p) -> Point:
        try:
            s, lam, c = (int(v) for v in p)
        except (TypeError, ValueError):
            raise MalformedInput(f"invalid point {p!r}") from None
        if not 0 <= s < len(self.strata):
            raise MalformedInput(f"invalid point {p!r}: no stratum {s}")
        st = self.strata[s]
        if not (0 <= lam < st.orbit_count and 0 <= c < st.index_in_group):
            raise MalformedInput(f"invalid point {p!r}")
        return Point(s, lam, c)

    def act(self, g: int, p: Point) -> Point:
        """g·(λ, aH) = (λ, gaH)."""
        return Point(p.stratum, p.orbit, self.strata[p.stratum].act_table[g][p.coset])

    def coset_rep(self, p: Point) -> int:
        return self.strata[p.stratum].coset_reps[p.coset]

    def stabilizer_of(self, p: Point) -> Subgroup:
        return self.strata[p.stratum].coset_stabilizers[p.coset]

    def rep_of(self, p: Point) -> Point:
        return Point(p.stratum, p.orbit, 0)

    def orbit(self, p: Point) -> list[Point]:
        st = self.strata[p.stratum]
        return [Point(p.stratum, p.orbit, c) for c in range(st.index_in_group)]

    def same_orbit(self, p: Point, q: Point) -> bool:
        return p.stratum == q.stratum and p.orbit == q.orbit

    @cached_property
    def points(self) -> tuple[Point, ...]:
        """All points, stratum-major, orbit-minor, coset-minor (finite only)."""
        self.require_finite()
        return tuple(
            Point(st.index, lam, c)
            for st in self.strata
            for lam in range(st.orbit_count)
            for c in range(st.index_in_group)
        )

    @cached_property
    def point_index(self) -> dict[Point, int]:
        return {p: i for i, p in enumerate(self.points)}

    @property
    def size(self) -> int | float:
        return sum(st.orbit_count * st.index_in_group for st in self.strata)

    def finite_reps(self) -> list[Point]:
        return [Point(st.index, lam, 0) for st in self.finite_strata for lam in range(st.orbit_count)]

    @cached_property
    def finite_orbits(self) -> list[tuple[int, int]]:
        return [(st.index, lam) for st in self.finite_strata for lam in range(st.orbit_count)]

    def candidates(self, rep: Point) -> list[Point]:
        """Images allowed for ``rep``: points y with G_rep <= G_y (finite strata only)."""
        h = self.stabilizer_of(rep)
        out = []
        for st in self.finite_strata:
            ok = [c for c, k in enumerate(st.coset_stabilizers) if h.issubgroup(k)]
            for lam in range(st.orbit_count):
                out.extend(Point(st.index, lam, c) for c in ok)
        return out

    def __repr__(self) -> str:
        parts = []
        for st in self.strata:
            m = "inf" if st.is_infinite else st.orbit_count
            parts.append(f"{m}x G/{list(st.H.members)}")
        return f"GSet(|G|={self.group.order}, {' + '.join(parts)}, {self.case_tag})"


def build_gset(g: FiniteGroup, orbits: Sequence[OrbitSpec | tuple]) -> GSet:
    specs = [o if isinstance(o, OrbitSpec) else OrbitSpec(*o) for o in orbits]
    return GSet(g, specs)


def act(s: GSet, g: int, p: Point) -> Point:
    return s.act(g, s.validate_point(p))


def stabilizer_of(s: GSet, p: Point) -> Subgroup:
    return s.stabilizer_of(s.validate_point(p))


def stab_classes(s: GSet):
    return s.stab_classes()
