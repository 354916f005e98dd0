"""Brute-force oracles on finite G-sets.

Maps are handled as point-index arrays; ``a∘b`` is ``tuple(a[x] for x in b)``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .collapse import CollapseType, collapse_types, u_set
from .endo import EquivariantMap, aut_arrays, end_arrays, end_size
from .errors import CapExceeded
from .gset import GSet

CLOSURE_CAP = 10**5
DEFAULT_MAX_K = 3

Array = tuple[int, ...]


def _mul(a: Array, b: Array) -> Array:
    return tuple(a[x] for x in b)


def _closure(start: Array, gens: Sequence[Array], cap: int) -> tuple[dict[Array, int], int]:
    seen = {start: 0}
    frontier = [start]
    depth = 0
    while frontier:
        nxt = []
        for m in frontier:
            for g in gens:
                p = _mul(m, g)
                if p not in seen:
                    seen[p] = len(seen)
                    nxt.append(p)
                    if len(seen) > cap:
                        raise CapExceeded(f"closure exceeds cap {cap}")
        if nxt:
            depth += 1
        frontier = nxt
    return seen, depth


@dataclass
class ClosureResult:
    gset: GSet
    arrays: list[Array]
    generation_depth: int

    @property
    def size(self) -> int:
        return len(self.arrays)

    @cached_property
    def elements(self) -> list[EquivariantMap]:
        return [EquivariantMap.from_array(self.gset, a) for a in self.arrays]

    def __contains__(self, f) -> bool:
        a = f.array if isinstance(f, EquivariantMap) else tuple(f)
        return a in self._set

    @cached_property
    def _set(self) -> frozenset:
        return frozenset(self.arrays)


def _identity(s: GSet) -> Array:
    return tuple(range(len(s.points)))


def monoid_closure(s: GSet, gens: Iterable[EquivariantMap | Sequence[int]], cap: int = CLOSURE_CAP) -> ClosureResult:
    """Submonoid generated by ``gens``, elements in order of first discovery."""
    s.require_finite()
    arrs = [g.array if isinstance(g, EquivariantMap) else tuple(g) for g in gens]
    seen, depth = _closure(_identity(s), arrs, cap)
    return ClosureResult(s, list(seen), depth)


class Lab:
    """Indexed End_G(X) with a memoized composition table for rank searches."""

    def __init__(self, s: GSet, cap: int = CLOSURE_CAP):
        s.require_finite()
        if end_size(s) > cap:
            raise CapExceeded(f"|End| = {end_size(s)} exceeds cap {cap}")
        self.gset = s
        self.end = end_arrays(s)
        self.index = {a: i for i, a in enumerate(self.end)}
        self.aut = aut_arrays(s)
        aut_set = set(self.aut)
        self.non_units = [i for i, a in enumerate(self.end) if a not in aut_set]
        self.identity = self.index[_identity(s)]
        self._table: dict[tuple[int, int], int] = {}

    def mul(self, i: int, j: int) -> int:
        key = (i, j)
        r = self._table.get(key)
        if r is None:
            r = self.index[_mul(self.end[i], self.end[j])]
            self._table[key] = r
        return r

    @cached_property
    def aut_generators(self) -> list[int]:
        """A small generating set of Aut_G(X), chosen greedily."""
        gens: list[Array] = []
        reached = {_identity(self.gset)}
        for a in self.aut:
            if a not in reached:
                gens.append(a)
                reached = set(_closure(_identity(self.gset), gens, len(self.aut))[0])
            if len(reached) == len(self.aut):
                break
        return [self.index[a] for a in gens]

    def closure_size(self, extra: Sequence[int]) -> int:
        gens = list(self.aut_generators) + list(extra)
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for m in frontier:
                for g in gens:
                    p = self.mul(m, g)
                    if p not in seen:
                        seen.add(p)
                        nxt.append(p)
            frontier = nxt
        return len(seen)

    def generates(self, extra: Sequence[int]) -> bool:
        return self.closure_size(extra) == len(self.end)

    @cached_property
    def double_classes(self) -> list[list[int]]:
        """Aut×Aut orbits a∘f∘b on End∖Aut; ⟨Aut, f⟩ depends only on f's orbit."""
        ag = self.aut_generators
        cls_of: dict[int, int] = {}
        classes = []
        for f in self.non_units:
            if f in cls_of:
                continue
            c = len(classes)
            members = [f]
            cls_of[f] = c
            k = 0
            while k < len(members):
                m = members[k]
                k += 1
                for a in ag:
                    for nb in (self.mul(a, m), self.mul(m, a)):
                        if nb not in cls_of:
                            cls_of[nb] = c
                            members.append(nb)
            classes.append(sorted(members))
        return classes

    def minimal_generating_sets(self, max_k: int = DEFAULT_MAX_K) -> tuple[int, list[tuple[int, ...]]]:
        """Smallest k and every k-subset of class representatives that generates End."""
        reps = [c[0] for c in self.double_classes]
        for k in range(max_k + 1):
            found = [combo for combo in itertools.combinations(reps, k) if self.generates(combo)]
            if found:
                return k, found
        raise CapExceeded(f"no generating set of size <= {max_k}")


def relative_rank_bruteforce(s: GSet, max_k: int = DEFAULT_MAX_K, cap: int = CLOSURE_CAP) -> int:
    return Lab(s, cap).minimal_generating_sets(max_k)[0]


# -- collapse-type classification -------------------------------------------------------

def generated_partition(n: int, pairs: Iterable[tuple[int, int]]) -> frozenset:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[int]] = {}
    for x in range(n):
        groups.setdefault(find(x), []).append(x)
    return frozenset(frozenset(g) for g in groups.values() if len(g) > 1)


def collapse_type_of(s: GSet, f: EquivariantMap | Sequence[int]) -> CollapseType | None:
    """The collapse type of f's kernel signature, or None if it has none.

    f has type (H_i, [K]_{N_i}) when, for some x with G_x = H_i and some y outside
    the orbit of x with G_y ∈ [K]_{N_i}, ker f is the equivalence generated by the
    pairs (g·x, g·y).  The kernel is unchanged by composing with automorphisms, so
    σ∘[x↦y] has the same type as [x↦y].
    """
    arr = f.array if isinstance(f, EquivariantMap) else tuple(f)
    pts = s.points
    idx = s.point_index
    n = len(arr)
    classes: dict[int, list[int]] = {}
    for x, y in enumerate(arr):
        classes.setdefault(y, []).append(x)
    kernel = frozenset(frozenset(c) for c in classes.values() if len(c) > 1)
    if not kernel:
        return None
    g = s.group
    for r in s.finite_reps():
        x = idx[r]
        h = s.stabilizer_of(r)
        for y in classes[arr[x]]:
            p = pts[y]
            if s.same_orbit(r, p) or not h.issubgroup(s.stabilizer_of(p)):
                continue
            pairs = [(idx[s.act(a, r)], idx[s.act(a, p)]) for a in g.elements]
            if generated_partition(n, pairs) != kernel:
                continue
            k = s.stabilizer_of(p)
            for t, ncls in enumerate(u_set(s, r.stratum)):
                if k in ncls:
                    return CollapseType(r.stratum, t, ncls[0])
    return None


def necessity_check(s: GSet, gens: Iterable[EquivariantMap | Sequence[int]]) -> tuple[bool, list[CollapseType]]:
    """Whether ``gens`` contains an elementary collapse of every constructible type."""
    present = set()
    for f in gens:
        t = collapse_type_of(s, f)
        if t is not None:
            present.add((t.stratum, t.target))
    missing = [t for t in collapse_types(s) if (t.stratum, t.target) not in present]
    return not missing, missing
