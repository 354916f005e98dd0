"""Finite groups stored as Cayley tables, with subgroup machinery.

Element 0 is always the identity. ``cayley[a][b]`` is the product ``ab``; for
groups built from permutations this is the composition ``a∘b`` (apply ``b``
first), so the natural action on points is a left action.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import GroupTooLarge, MalformedInput

DEFAULT_ORDER_CAP = 10_000


@dataclass(frozen=True, order=False)
class Subgroup:
    """A subgroup, identified by its sorted member ids."""

    members: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(sorted(set(self.members))))

    @property
    def order(self) -> int:
        return len(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, g) -> bool:
        return g in self._set

    def __iter__(self):
        return iter(self.members)

    @cached_property
    def _set(self) -> frozenset[int]:
        return frozenset(self.members)

    def key(self) -> tuple:
        return (len(self.members), self.members)

    def issubgroup(self, other: "Subgroup") -> bool:
        return self._set <= other._set

    def __repr__(self) -> str:
        return f"Subgroup{set(self.members) if self.members else '{}'}"


@dataclass(frozen=True)
class SubgroupConjClass:
    representative: Subgroup
    members: tuple[Subgroup, ...]
    # conjugators[k] = g with g^-1 * representative * g == members[k]
    conjugators: tuple[int, ...]


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    cayley: tuple[tuple[int, ...], ...]
    inverse: tuple[int, ...] = field(default=())
    degree: int | None = None
    perms: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self):
        n = len(self.cayley)
        if n == 0 or any(len(row) != n for row in self.cayley):
            raise MalformedInput("Cayley table must be a non-empty square table")
        if list(self.cayley[0]) != list(range(n)) or [r[0] for r in self.cayley] != list(range(n)):
            raise MalformedInput("element 0 must be the identity")
        if not self.inverse:
            inv = []
            for a in range(n):
                row = self.cayley[a]
                try:
                    inv.append(row.index(0))
                except ValueError:
                    raise MalformedInput(f"element {a} has no inverse") from None
            object.__setattr__(self, "inverse", tuple(inv))

    # -- construction -------------------------------------------------------

    @classmethod
    def from_cayley(cls, table: Sequence[Sequence[int]], check: bool = True) -> "FiniteGroup":
        g = cls(tuple(tuple(int(x) for x in row) for row in table))
        if check:
            g.validate()
        return g

    @classmethod
    def from_permutation_generators(cls, degree: int, generators: Iterable[Sequence[int]],
                                    cap: int = DEFAULT_ORDER_CAP) -> "FiniteGroup":
        """Close the generators under composition.

        Enumeration is breadth-first from the identity, left-multiplying by the
        generators in the given order; each new layer is sorted lexicographically.
        """
        gens = [tuple(int(x) for x in p) for p in generators]
        for p in gens:
            if len(p) != degree or sorted(p) != list(range(degree)):
                raise MalformedInput(f"not a permutation of 0..{degree - 1}: {list(p)}")
        ident = tuple(range(degree))
        elements = [ident]
        index = {ident: 0}
        layer = [ident]
        while layer:
            fresh = set()
            for e in layer:
                for s in gens:
                    p = tuple(s[e[x]] for x in range(degree))
                    if p not in index and p not in fresh:
                        fresh.add(p)
            layer = sorted(fresh)
            for p in layer:
                index[p] = len(elements)
                elements.append(p)
            if len(elements) > cap:
                raise GroupTooLarge(f"group too large (order exceeds cap {cap})")
        n = len(elements)
        table = tuple(
            tuple(index[tuple(a[b[x]] for x in range(degree))] for b in elements)
            for a in elements
        )
        return cls(table, degree=degree, perms=tuple(elements))

    @classmethod
    def cyclic(cls, n: int) -> "FiniteGroup":
        return cls(tuple(tuple((a + b) % n for b in range(n)) for a in range(n)))

    @classmethod
    def klein(cls) -> "FiniteGroup":
        return cls(tuple(tuple(a ^ b for b in range(4)) for a in range(4)))

    @classmethod
    def symmetric(cls, n: int) -> "FiniteGroup":
        if n < 2:
            return cls.from_permutation_generators(max(n, 1), [])
        gens = [tuple([1, 0] + list(range(2, n))), tuple(list(range(1, n)) + [0])]
        return cls.from_permutation_generators(n, gens)

    def validate(self) -> None:
        n = self.order
        t = self.cayley
        for a in range(n):
            if sorted(t[a]) != list(range(n)):
                raise MalformedInput("Cayley table rows must be permutations")
        for a in range(n):
            ta = t[a]
            for b in range(n):
                tab = t[ta[b]]
                tb = t[b]
                for c in range(n):
                    if tab[c] != ta[tb[c]]:
                        raise MalformedInput(f"not associative at ({a}, {b}, {c})")

    # -- basics ------------------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.cayley)

    def __len__(self) -> int:
        return len(self.cayley)

    @property
    def elements(self) -> range:
        return range(self.order)

    def mul(self, a: int, b: int) -> int:
        return self.cayley[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def is_abelian(self) -> bool:
        t = self.cayley
        return all(t[a][b] == t[b][a] for a in self.elements for b in range(a))

    def conjugate(self, h: Subgroup, g: int) -> Subgroup:
        """g^-1 H g."""
        gi = self.inverse[g]
        t = self.cayley
        return Subgroup(tuple(t[t[gi][x]][g] for x in h.members))

    def generate(self, gens: Iterable[int]) -> Subgroup:
        seen = {0}
        frontier = [0]
        gens = list(gens)
        t = self.cayley
        while frontier:
            nxt = []
            for a in frontier:
                for s in gens:
                    b = t[a][s]
                    if b not in seen:
                        seen.add(b)
                        nxt.append(b)
            frontier = nxt
        return Subgroup(tuple(seen))

    def subgroup(self, members: Iterable[int]) -> Subgroup:
        """Validate and wrap a member set."""
        s = set(int(x) for x in members)
        if not s or not all(0 <= x < self.order for x in s):
            raise MalformedInput("subgroup members must be element ids")
        if 0 not in s:
            raise MalformedInput("subgroup must contain the identity")
        t = self.cayley
        if any(t[a][b] not in s for a in s for b in s) or any(self.inverse[a] not in s for a in s):
            raise MalformedInput(f"{sorted(s)} is not a subgroup")
        return Subgroup(tuple(s))

    @cached_property
    def whole(self) -> Subgroup:
        return Subgroup(tuple(self.elements))

    @cached_property
    def trivial(self) -> Subgroup:
        return Subgroup((0,))

    # -- subgroup lattice ----------------------------------------------------

    @cached_property
    def _all_subgroups(self) -> tuple[Subgroup, ...]:
        found = {}
        for a in self.elements:
            c = self.generate([a])
            found[c.members] = c
        frontier = list(found.values())
        # Join every new subgroup with every known one until nothing new appears.
        while frontier:
            fresh = []
            known = list(found.values())
            for h in frontier:
                for k in known:
                    if h.issubgroup(k) or k.issubgroup(h):
                        continue
                    j = self.generate(set(h.members) | set(k.members))
                    if j.members not in found:
                        found[j.members] = j
                        fresh.append(j)
            frontier = fresh
        return tuple(sorted(found.values(), key=Subgroup.key))

    def all_subgroups(self) -> list[Subgroup]:
        return list(self._all_subgroups)

    def normalizer(self, h: Subgroup) -> Subgroup:
        return Subgroup(tuple(n for n in self.elements if self.conjugate(h, n) == h))

    def n_conj_class(self, h: Subgroup, n: Subgroup) -> list[Subgroup]:
        """[H]_N: conjugates of h by elements of n, sorted."""
        return sorted({self.conjugate(h, x) for x in n.members}, key=Subgroup.key)

    @cached_property
    def _conj_classes(self) -> tuple[SubgroupConjClass, ...]:
        assigned = set()
        classes = []
        for h in self._all_subgroups:
            if h in assigned:
                continue
            conj = {}
            for g in self.elements:
                k = self.conjugate(h, g)
                conj.setdefault(k, g)
            members = sorted(conj, key=Subgroup.key)
            assigned.update(members)
            classes.append(SubgroupConjClass(h, tuple(members), tuple(conj[m] for m in members)))
        classes.sort(key=lambda c: c.representative.key())
        return tuple(classes)

    def conj_classes_of_subgroups(self) -> list[SubgroupConjClass]:
        return list(self._conj_classes)

    def class_of(self, h: Subgroup) -> int:
        """Index of the conjugacy class containing h."""
        for i, c in enumerate(self._conj_classes):
            if h in c.members:
                return i
        raise MalformedInput(f"{h} is not a subgroup")

    def conjugator(self, src: Subgroup, dst: Subgroup, within: Subgroup | None = None) -> int | None:
        """Smallest g (optionally in ``within``) with g^-1 src g == dst."""
        pool = within.members if within is not None else self.elements
        for g in pool:
            if self.conjugate(src, g) == dst:
                return g
        return None


def from_permutation_generators(degree, generators, cap=DEFAULT_ORDER_CAP):
    return FiniteGroup.from_permutation_generators(degree, generators, cap)


def all_subgroups(g: FiniteGroup) -> list[Subgroup]:
    return g.all_subgroups()


def normalizer(g: FiniteGroup, h: Subgroup) -> Subgroup:
    return g.normalizer(h)


def conj_classes_of_subgroups(g: FiniteGroup) -> list[SubgroupConjClass]:
    return g.conj_classes_of_subgroups()


def n_conj_class(g: FiniteGroup, h: Subgroup, n: Subgroup) -> list[Subgroup]:
    return g.n_conj_class(h, n)
