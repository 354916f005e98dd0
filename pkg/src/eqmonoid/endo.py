"""Equivariant maps: representation, evaluation, composition, metrics, enumeration.

A map is a word of *layers*, the leftmost applied last.  Each layer is a total
equivariant map of X:

* ``Patch``  images of finitely many orbit representatives, identity elsewhere;
  images may land in any stratum.
* ``Mu``, ``Nu``, ``RuleBijection``  maps on the orbit indices of the infinite
  stratum (``x_n -> x_μ(n)`` etc.), identity on every finite stratum.

On an all-finite G-set every map is a single ``Patch``.  Words are kept in a
normal form: adjacent patches fused, identities dropped, and the pattern
``Nu ∘ RuleBijection ∘ Mu`` (which differs from the identity only where the
rule has exceptions on even indices) rewritten to a ``Patch``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from math import isqrt
from typing import Iterable, Mapping, Sequence

from .errors import (CapExceeded, InfeasibleMap, MalformedInput, MetricsUndecidable,
                     NotRepresentativeClosed, UnsupportedCase)
from .gset import INF, GSet, Point

DEFAULT_ENUM_CAP = 10**7


# -- index-level functions on ℕ ----------------------------------------------

def pair(i: int, j: int) -> int:
    """Cantor pairing ⟨i, j⟩."""
    return (i + j) * (i + j + 1) // 2 + j


def unpair(m: int) -> tuple[int, int]:
    w = (isqrt(8 * m + 1) - 1) // 2
    j = m - w * (w + 1) // 2
    return w - j, j


def mu(n: int) -> int:
    return 2 * n


def nu(m: int) -> int:
    return unpair(m)[0]


def route(k: int) -> int:
    """Base bijection of ℕ with ``nu(route(mu(n))) == n`` for every n.

    Evens go to the ν-class slots ⟨n, 0⟩, odds fill the slots ⟨a, b+1⟩.
    """
    if k % 2 == 0:
        return pair(k // 2, 0)
    a, b = unpair((k - 1) // 2)
    return pair(a, b + 1)


def route_inverse(m: int) -> int:
    i, j = unpair(m)
    return 2 * i if j == 0 else 2 * pair(i, j - 1) + 1


# -- layers ----------------------------------------------------------------------

class Patch:
    """Finitely supported map: ``images[(stratum, orbit)]`` is the image of the rep."""

    __slots__ = ("images",)

    def __init__(self, images: Mapping[tuple[int, int], Point] = ()):
        self.images = dict(images)

    def __eq__(self, other):
        return isinstance(other, Patch) and self.images == other.images

    def __hash__(self):
        return hash(frozenset(self.images.items()))

    def __repr__(self):
        return f"Patch({self.images})"

    @property
    def symbol(self) -> str:
        return "patch"


@dataclass(frozen=True)
class Mu:
    symbol = "mu"


@dataclass(frozen=True)
class Nu:
    symbol = "nu"


class RuleBijection:
    """``route`` with a finite table of exceptions; a bijection of ℕ."""

    __slots__ = ("exceptions", "_inverse")
    symbol = "rule"

    def __init__(self, exceptions: Mapping[int, int] = ()):
        self.exceptions = dict(sorted(dict(exceptions).items()))
        inv = {v: k for k, v in self.exceptions.items()}
        if len(inv) != len(self.exceptions):
            raise MalformedInput("rule exceptions are not injective")
        # Every value freed by an exception must be reclaimed by another one.
        freed = {route(k) for k in self.exceptions} - set(inv)
        taken = set(inv) - {route(k) for k in self.exceptions}
        if freed or taken:
            raise MalformedInput("rule exceptions do not define a bijection")
        self._inverse = inv

    def __call__(self, k: int) -> int:
        v = self.exceptions.get(k)
        return route(k) if v is None else v

    def inverse(self, m: int) -> int:
        v = self._inverse.get(m)
        return route_inverse(m) if v is None else v

    @property
    def max_index(self) -> int:
        return max(self.exceptions, default=0)

    def __eq__(self, other):
        return isinstance(other, RuleBijection) and self.exceptions == other.exceptions

    def __hash__(self):
        return hash(tuple(self.exceptions.items()))

    def __repr__(self):
        return f"RuleBijection({self.exceptions})"


MU = Mu()
NU = Nu()

_INDEX_FN = {Mu: mu, Nu: nu}


def apply_layer(s: GSet, layer, p: Point) -> Point:
    if isinstance(layer, Patch):
        img = layer.images.get((p.stratum, p.orbit))
        if img is None:
            return p
        if p.coset == 0:
            return img
        return s.act(s.coset_rep(p), img)
    if p.stratum != s.infinite_stratum:
        return p
    if isinstance(layer, RuleBijection):
        return Point(p.stratum, layer(p.orbit), p.coset)
    return Point(p.stratum, _INDEX_FN[type(layer)](p.orbit), p.coset)


def _fuse(s: GSet, left: Patch, right: Patch) -> Patch:
    out = {}
    for key in left.images.keys() | right.images.keys():
        rep = Point(key[0], key[1], 0)
        v = apply_layer(s, left, apply_layer(s, right, rep))
        if v != rep:
            out[key] = v
    return Patch(out)


def _nu_rule_mu(s: GSet, rule: RuleBijection) -> Patch:
    inf = s.infinite_stratum
    out = {}
    for k, v in rule.exceptions.items():
        if k % 2 == 0 and nu(v) != k // 2:
            out[(inf, k // 2)] = Point(inf, nu(v), 0)
    return Patch(out)


def normalize(s: GSet, layers: Sequence) -> tuple:
    out: list = []
    for layer in layers:
        if isinstance(layer, Patch) and not layer.images:
            continue
        out.append(layer)
        while True:
            if len(out) >= 2 and isinstance(out[-1], Patch) and isinstance(out[-2], Patch):
                right = out.pop()
                fused = _fuse(s, out.pop(), right)
                if fused.images:
                    out.append(fused)
                continue
            if (len(out) >= 3 and isinstance(out[-1], Mu) and isinstance(out[-2], RuleBijection)
                    and isinstance(out[-3], Nu)):
                rule = out[-2]
                del out[-3:]
                p = _nu_rule_mu(s, rule)
                if p.images:
                    out.append(p)
                continue
            break
    return tuple(out)


# -- maps ------------------------------------------------------------------------

class EquivariantMap:
    """An element of End_G(X)."""

    def __init__(self, gset: GSet, layers: Sequence = (), *, normal: bool = False):
        self.gset = gset
        self.layers = tuple(layers) if normal else normalize(gset, layers)

    # constructors

    @classmethod
    def identity(cls, s: GSet) -> "EquivariantMap":
        return cls(s, (), normal=True)

    @classmethod
    def from_images(cls, s: GSet, images: Mapping, check: bool = True) -> "EquivariantMap":
        """Build from images of orbit representatives, keyed by ``(stratum, orbit)``."""
        clean = {}
        for key, img in images.items():
            key = (int(key[0]), int(key[1]))
            rep = s.validate_point((key[0], key[1], 0))
            img = s.validate_point(img) if check else Point(*img)
            if check and not s.stabilizer_of(rep).issubgroup(s.stabilizer_of(img)):
                raise InfeasibleMap(f"no equivariant map sends {tuple(rep)} to {tuple(img)}: "
                                    "stabilizer containment fails")
            if img != rep:
                clean[key] = img
        return cls(s, (Patch(clean),) if clean else (), normal=True)

    @classmethod
    def from_array(cls, s: GSet, arr: Sequence[int]) -> "EquivariantMap":
        pts = s.points
        return cls.from_images(s, {(r.stratum, r.orbit): pts[arr[s.point_index[r]]]
                                   for r in s.finite_reps()}, check=False)

    @classmethod
    def from_layers(cls, s: GSet, layers: Sequence) -> "EquivariantMap":
        for layer in layers:
            if not isinstance(layer, Patch) and s.infinite_stratum is None:
                raise MalformedInput("index atoms need an infinite stratum")
            if isinstance(layer, Patch):
                cls.from_images(s, layer.images)
        return cls(s, layers)

    # evaluation

    def __call__(self, p) -> Point:
        return self.evaluate(p)

    def evaluate(self, p) -> Point:
        s = self.gset
        p = Point(*p)
        for layer in reversed(self.layers):
            p = apply_layer(s, layer, p)
        return p

    @property
    def is_patch(self) -> bool:
        return len(self.layers) == 0 or (len(self.layers) == 1 and isinstance(self.layers[0], Patch))

    @property
    def images(self) -> dict[tuple[int, int], Point]:
        """Non-identity representative images (patch-only maps)."""
        if not self.is_patch:
            raise MetricsUndecidable("map is not finitely supported")
        return dict(self.layers[0].images) if self.layers else {}

    @property
    def finite_part(self) -> dict[tuple[int, int], Point]:
        return {(r.stratum, r.orbit): self.evaluate(r) for r in self.gset.finite_reps()}

    @property
    def tail_symbols(self) -> tuple[str, ...]:
        return tuple(layer.symbol for layer in self.layers)

    @cached_property
    def array(self) -> tuple[int, ...]:
        """Images of every point as point indices (finite G-sets)."""
        s = self.gset
        idx = s.point_index
        return tuple(idx[self.evaluate(p)] for p in s.points)

    def max_index(self) -> int:
        """Largest infinite-stratum orbit index touched by any patch or rule."""
        inf = self.gset.infinite_stratum
        m = 0
        for layer in self.layers:
            if isinstance(layer, Patch):
                for (st, lam), img in layer.images.items():
                    if st == inf:
                        m = max(m, lam)
                    if img.stratum == inf:
                        m = max(m, img.orbit)
            elif isinstance(layer, RuleBijection):
                m = max(m, layer.max_index, *(v for v in layer.exceptions.values()))
        return m

    # algebra

    def __matmul__(self, other: "EquivariantMap") -> "EquivariantMap":
        return compose(self, other)

    def __eq__(self, other):
        if not isinstance(other, EquivariantMap):
            return NotImplemented
        return maps_equal(self, other)

    def __hash__(self):
        if self.gset.is_finite:
            return hash(self.array)
        return hash(self.tail_symbols)

    def __repr__(self):
        return f"EquivariantMap({list(self.layers)})"


def compose(f: EquivariantMap, g: EquivariantMap) -> EquivariantMap:
    """f ∘ g (apply g first)."""
    if f.gset is not g.gset:
        raise MalformedInput("maps live on different G-sets")
    return EquivariantMap(f.gset, f.layers + g.layers)


def compose_all(s: GSet, maps: Iterable[EquivariantMap]) -> EquivariantMap:
    layers: list = []
    for m in maps:
        layers.extend(m.layers)
    return EquivariantMap(s, layers)


def evaluate(f: EquivariantMap, p) -> Point:
    return f.evaluate(f.gset.validate_point(p))


def window_size(*maps: EquivariantMap) -> int:
    return 2 * max((m.max_index() for m in maps), default=0) + 64


def maps_equal(f: EquivariantMap, g: EquivariantMap, window: int | None = None) -> bool:
    """Exact for finitely supported maps; otherwise compared on an index window."""
    if f.gset is not g.gset:
        return False
    s = f.gset
    if s.is_finite:
        return f.array == g.array
    if f.is_patch and g.is_patch and window is None:
        return f.images == g.images
    w = window if window is not None else window_size(f, g)
    for r in s.finite_reps():
        if f.evaluate(r) != g.evaluate(r):
            return False
    return first_difference(f, g, w) is None


def first_difference(f: EquivariantMap, g: EquivariantMap, window: int) -> Point | None:
    s = f.gset
    for r in s.finite_reps():
        if f.evaluate(r) != g.evaluate(r):
            return r
    inf = s.infinite_stratum
    if inf is not None:
        for lam in range(window):
            r = Point(inf, lam, 0)
            if f.evaluate(r) != g.evaluate(r):
                return r
    return None


# -- named constructions -------------------------------------------------------------

def mu_hat(s: GSet) -> EquivariantMap:
    _need_infinite(s)
    return EquivariantMap(s, (MU,), normal=True)


def nu_hat(s: GSet) -> EquivariantMap:
    _need_infinite(s)
    return EquivariantMap(s, (NU,), normal=True)


def rule_map(s: GSet, rule: RuleBijection) -> EquivariantMap:
    _need_infinite(s)
    return EquivariantMap(s, (rule,))


def _need_infinite(s: GSet):
    if s.infinite_stratum is None:
        raise UnsupportedCase("μ̂ and ν̂ need an infinite stratum")


# -- equivariance --------------------------------------------------------------------

def check_equivariance(s: GSet, raw: Mapping[Point, Point] | Sequence[int]) -> bool:
    """Whether a raw point mapping on a finite G-set commutes with the action."""
    s.require_finite()
    pts = s.points
    if isinstance(raw, Mapping):
        f = {Point(*k): Point(*v) for k, v in raw.items()}
    else:
        f = {pts[i]: pts[v] for i, v in enumerate(raw)}
    if set(f) != set(pts):
        return False
    for g in s.group.elements:
        for x in pts:
            if f[s.act(g, x)] != s.act(g, f[x]):
                return False
    return True


# -- metrics ------------------------------------------------------------------------

@dataclass(frozen=True)
class MapMetrics:
    range: int | float
    defect: int | float
    kernel: tuple[tuple[int, ...], ...] | None
    contraction_index: int | float
    injective: bool
    surjective: bool


def _orbit_size(s: GSet, key) -> int:
    return s.strata[key[0]].index_in_group


def _patch_metrics(s: GSet, patch: Patch) -> MapMetrics:
    targets = {}
    point_injective = True
    for key, img in patch.images.items():
        t = (img.stratum, img.orbit)
        targets[t] = targets.get(t, 0) + 1
        if _orbit_size(s, key) != _orbit_size(s, t):
            point_injective = False
    keys = set(patch.images)
    unhit = keys - set(targets)
    defect = sum(_orbit_size(s, k) for k in unhit)
    # a target orbit outside the support is also hit by itself
    collision = any(n > 1 or t not in keys for t, n in targets.items())
    injective = point_injective and not collision
    return MapMetrics(INF, defect, None, 0, injective, defect == 0)


def _bijective(s: GSet, layer) -> bool:
    if isinstance(layer, RuleBijection):
        return True
    if isinstance(layer, Patch):
        m = _patch_metrics(s, layer)
        return m.injective and m.surjective
    return False


def metrics(f: EquivariantMap) -> MapMetrics:
    s = f.gset
    if s.is_finite:
        arr = f.array
        n = len(arr)
        classes: dict[int, list[int]] = {}
        for x, y in enumerate(arr):
            classes.setdefault(y, []).append(x)
        r = len(classes)
        kernel = tuple(sorted(tuple(c) for c in classes.values()))
        k = sum(1 for c in kernel if len(c) == n)
        return MapMetrics(r, n - r, kernel, k, r == n, r == n)
    bad = [layer for layer in f.layers if not _bijective(s, layer)]
    if not bad:
        return MapMetrics(INF, 0, None, 0, True, True)
    if len(bad) > 1:
        raise MetricsUndecidable(f"no exact metrics rule for word {f.tail_symbols}")
    # Composing with bijections preserves defect, kernel shape and contraction index.
    (layer,) = bad
    if isinstance(layer, Patch):
        return _patch_metrics(s, layer)
    size = s.strata[s.infinite_stratum].index_in_group
    if isinstance(layer, Mu):
        return MapMetrics(INF, INF, None, 0, True, False)
    if isinstance(layer, Nu):
        return MapMetrics(INF, 0, None, INF * size, False, True)
    raise MetricsUndecidable(f"unknown layer {layer!r}")


def is_bijective(f: EquivariantMap) -> bool:
    m = metrics(f)
    return m.injective and m.surjective


# -- restriction and induction --------------------------------------------------------

@dataclass(frozen=True, eq=False)
class StratumMap:
    """An equivariant self-map of one stratum B_i.

    ``images`` sends orbit index λ to the image of x_λ (a point of B_i); absent
    indices are fixed.  On the infinite stratum an index atom may stand in.
    """

    gset: GSet
    stratum: int
    images: dict | Mu | Nu | RuleBijection

    def evaluate(self, p: Point) -> Point:
        if p.stratum != self.stratum:
            raise MalformedInput("point outside the stratum")
        if isinstance(self.images, dict):
            img = self.images.get(p.orbit)
            return p if img is None else self.gset.act(self.gset.coset_rep(p), img)
        return apply_layer(self.gset, self.images, p)


def induce_tilde(s: GSet, rep_map, i: int) -> StratumMap:
    """Equivariant extension of a map X_i -> X_i to B_i."""
    st = s.strata[i]
    if isinstance(rep_map, (Mu, Nu, RuleBijection)):
        if not st.is_infinite:
            raise MalformedInput("index atoms act on the infinite stratum only")
        return StratumMap(s, i, rep_map)
    images = {}
    for lam, tgt in dict(rep_map).items():
        lam, tgt = int(lam), int(tgt)
        if not (0 <= lam < st.orbit_count and 0 <= tgt < st.orbit_count):
            raise MalformedInput(f"orbit index out of range in stratum {i}")
        if lam != tgt:
            images[lam] = Point(i, tgt, 0)
    return StratumMap(s, i, images)


def induce_hat(sm: StratumMap) -> EquivariantMap:
    """Extend a stratum map by the identity on the rest of X."""
    s = sm.gset
    if isinstance(sm.images, dict):
        return EquivariantMap.from_images(s, {(sm.stratum, lam): img for lam, img in sm.images.items()})
    return EquivariantMap(s, (sm.images,))


def _stratum_entries(f: EquivariantMap, i: int) -> dict[int, Point]:
    s = f.gset
    st = s.strata[i]
    if st.is_infinite:
        if not f.is_patch:
            raise MetricsUndecidable("restriction of a non-finitely-supported word")
        return {lam: img for (si, lam), img in f.images.items() if si == i}
    out = {}
    for lam in range(st.orbit_count):
        img = f.evaluate(Point(i, lam, 0))
        if img != (i, lam, 0):
            out[lam] = img
    return out


def restrict_to_reps(f: EquivariantMap, i: int):
    """f|_{X_i}; raises if some rep does not land on a rep of X_i."""
    s = f.gset
    st = s.strata[i]
    if st.is_infinite and len(f.layers) == 1 and not isinstance(f.layers[0], Patch):
        return f.layers[0]
    out = {}
    for lam, img in _stratum_entries(f, i).items():
        if img.stratum != i or img.coset != 0:
            raise NotRepresentativeClosed(
                f"rep {lam} of stratum {i} maps to {tuple(img)}, not a representative of X_{i}")
        out[lam] = img.orbit
    if not st.is_infinite:
        return {lam: out.get(lam, lam) for lam in range(st.orbit_count)}
    return out


def restrict_to_stratum(f: EquivariantMap, i: int) -> StratumMap:
    s = f.gset
    st = s.strata[i]
    if st.is_infinite and len(f.layers) == 1 and not isinstance(f.layers[0], Patch):
        return StratumMap(s, i, f.layers[0])
    entries = _stratum_entries(f, i)
    if any(img.stratum != i for img in entries.values()):
        raise NotRepresentativeClosed(f"map does not preserve stratum {i}")
    return StratumMap(s, i, entries)


# -- enumeration -----------------------------------------------------------------------

def _orbit_blocks(s: GSet, rep: Point, targets: Sequence[Point]) -> list[tuple[int, ...]]:
    """For each candidate y, the point indices of g·y over the rep's orbit."""
    idx = s.point_index
    st = s.strata[rep.stratum]
    return [tuple(idx[s.act(a, y)] for a in st.coset_reps) for y in targets]


def end_size(s: GSet) -> int:
    s.require_finite()
    return math.prod(len(s.candidates(r)) for r in s.finite_reps())


def end_arrays(s: GSet, cap: int = DEFAULT_ENUM_CAP) -> list[tuple[int, ...]]:
    """All of End_G(X) as point-index arrays, in candidate order."""
    if end_size(s) > cap:
        raise CapExceeded(f"|End| = {end_size(s)} exceeds cap {cap}")
    blocks = [_orbit_blocks(s, r, s.candidates(r)) for r in s.finite_reps()]
    return [tuple(itertools.chain.from_iterable(combo)) for combo in itertools.product(*blocks)]


def enumerate_end(s: GSet, cap: int = DEFAULT_ENUM_CAP) -> list[EquivariantMap]:
    return [EquivariantMap.from_array(s, a) for a in end_arrays(s, cap)]


def aut_arrays(s: GSet, cap: int = DEFAULT_ENUM_CAP) -> list[tuple[int, ...]]:
    """Bijective equivariant maps: orbit permutations within each stratum,
    times per-orbit automorphisms x_λ ↦ n·x_λ' with n in N(H_i)."""
    s.require_finite()
    per_stratum = []
    total = 1
    for st in s.strata:
        twists = [c for c, k in enumerate(st.coset_stabilizers) if k == st.H]
        m = st.orbit_count
        total *= math.factorial(m) * len(twists) ** m
        per_stratum.append((st, twists))
    if total > cap:
        raise CapExceeded(f"|Aut| = {total} exceeds cap {cap}")
    choices = []
    for st, twists in per_stratum:
        m = st.orbit_count
        opts = []
        for perm in itertools.permutations(range(m)):
            for tw in itertools.product(twists, repeat=m):
                imgs = [Point(st.index, perm[lam], tw[lam]) for lam in range(m)]
                opts.append([_orbit_blocks(s, Point(st.index, lam, 0), [imgs[lam]])[0] for lam in range(m)])
        choices.append(opts)
    out = []
    for combo in itertools.product(*choices):
        arr = tuple(itertools.chain.from_iterable(itertools.chain.from_iterable(combo)))
        assert len(set(arr)) == len(arr)
        out.append(arr)
    return out


def enumerate_aut(s: GSet, cap: int = DEFAULT_ENUM_CAP) -> list[EquivariantMap]:
    return [EquivariantMap.from_array(s, a) for a in aut_arrays(s, cap)]
