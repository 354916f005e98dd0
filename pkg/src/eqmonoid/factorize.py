"""Constructive factorization of endomorphisms over Aut_G(X) ∪ V (or ∪ W).

Words list their factors leftmost-applied-last, as in a product of functions.
Explicit factors are automorphisms; named factors refer to a ``GeneratorSet``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .collapse import MU_HAT, NU_HAT, CollapseType, GeneratorSet, collapse_name, make_transposition
from .endo import (EquivariantMap, Mu, Nu, Patch, RuleBijection, apply_layer, compose_all,
                   is_bijective, maps_equal, pair, route, route_inverse)
from .errors import FactorizationError, MalformedInput, UnsupportedTail
from .gset import GSet, Point


@dataclass(frozen=True, eq=False)
class Factor:
    name: str | None = None
    map: EquivariantMap | None = None
    label: str = ""

    @property
    def is_named(self) -> bool:
        return self.name is not None


@dataclass
class Word:
    factors: list[Factor] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.factors)

    def __add__(self, other: "Word") -> "Word":
        return Word(self.factors + other.factors)

    def names(self) -> list[str]:
        return [f.name for f in self.factors if f.is_named]


@dataclass
class FactorizationReport:
    word: Word
    verified: bool
    stages: list[dict]

    @property
    def length(self) -> int:
        return len(self.word)


def _aut(m: EquivariantMap, label: str = "aut") -> Factor:
    return Factor(map=m, label=label)


def _gen(name: str, gens: GeneratorSet) -> Factor:
    if name not in gens:
        raise FactorizationError(f"generator {name!r} is not in the generating set")
    return Factor(name=name, label=name)


def _resolve(f: Factor, gens: GeneratorSet) -> EquivariantMap:
    if f.is_named:
        if f.name not in gens:
            raise MalformedInput(f"unresolved generator name {f.name!r}")
        return gens[f.name]
    return f.map


def recompose(w: Word, gens: GeneratorSet) -> EquivariantMap:
    return compose_all(gens.gset, (_resolve(f, gens) for f in w.factors))


def evaluate_word(w: Word, gens: GeneratorSet, p: Point) -> Point:
    """Apply the factors one by one, rightmost first, without composing them."""
    s = gens.gset
    for f in reversed(w.factors):
        for layer in reversed(_resolve(f, gens).layers):
            p = apply_layer(s, layer, p)
    return p


# -- decomposition ------------------------------------------------------------------

def _entries(tau: EquivariantMap) -> dict[tuple[int, int], Point]:
    if not tau.is_patch:
        raise UnsupportedTail("map is not finitely supported")
    return tau.images


def stratum_decompose(tau: EquivariantMap) -> list[EquivariantMap]:
    """τ_1, …, τ_r with τ = τ_1 τ_2 … τ_r; τ_i agrees with τ on B_i."""
    s = tau.gset
    parts: list[dict] = [{} for _ in s.strata]
    for key, img in _entries(tau).items():
        # images never drop to an earlier stratum (stabilizers only grow)
        assert img.stratum >= key[0], "equivariant maps cannot lower the stratum"
        parts[key[0]][key] = img
    return [EquivariantMap.from_images(s, p, check=False) for p in parts]


def split_prime(tau_i: EquivariantMap, i: int) -> tuple[EquivariantMap, EquivariantMap]:
    """(τ'_i, τ''_i): the stratum-preserving and the stratum-raising parts."""
    s = tau_i.gset
    keep, raise_ = {}, {}
    for key, img in _entries(tau_i).items():
        if key[0] != i:
            raise MalformedInput(f"τ_i must be supported on stratum {i}")
        (keep if img.stratum == i else raise_)[key] = img
    return (EquivariantMap.from_images(s, keep, check=False),
            EquivariantMap.from_images(s, raise_, check=False))


def _collapse_target_for(s: GSet, i: int, z: Point) -> tuple[int, int]:
    """(j, n): target K_{i,j} and the smallest n in N_i with n K_{i,j} n^-1 = G_z."""
    g = s.group
    st = s.strata[i]
    gz = s.stabilizer_of(z)
    for j, t in enumerate(st.collapse_targets):
        if t.subgroup.order != gz.order:
            continue
        for n in st.normalizer.members:
            if g.conjugate(t.subgroup, g.inv(n)) == gz:
                return j, n
    raise FactorizationError(f"collapse target not in action for {tuple(z)} from stratum {i}")


def _collapse_name(s: GSet, i: int, j: int) -> str:
    st = s.strata[i]
    return collapse_name(CollapseType(i, j + 1, st.collapse_targets[j].subgroup))


def _conjugated_collapse(s: GSet, i: int, x_i: Point, z: Point, gens: GeneratorSet) -> tuple[list[Factor], list[Factor]]:
    """Frame pieces sending n·x_i's orbit onto z's orbit via [x_i ↦ y_{i,j}].

    Returns (left, right) where left = [T, C, T^-1] and right = [R_n].
    """
    g = s.group
    j, n = _collapse_target_for(s, i, z)
    y = s.strata[i].collapse_targets[j].point
    w = s.act(g.inv(n), z)
    nx = s.act(n, x_i)
    left = [
        _aut(make_transposition(s, y, w), f"({_fmt(y)}↔{_fmt(w)})"),
        _gen(_collapse_name(s, i, j), gens),
        _aut(make_transposition(s, w, y), f"({_fmt(w)}↔{_fmt(y)})"),
    ]
    right = [_aut(make_transposition(s, x_i, nx), f"({_fmt(x_i)}↔{_fmt(nx)})")]
    return left, right


def _fmt(p: Point) -> str:
    return f"{p.stratum}.{p.orbit}.{p.coset}"


def factor_raising(tau2: EquivariantMap, i: int, gens: GeneratorSet) -> Word:
    """Seven-factor conjugated collapse block per raised orbit of stratum i."""
    s = tau2.gset
    st = s.strata[i]
    x_i = st.x
    factors: list[Factor] = []
    for key, z in sorted(_entries(tau2).items()):
        x_k = Point(i, key[1], 0)
        left, right = _conjugated_collapse(s, i, x_i, z, gens)
        j, n = _collapse_target_for(s, i, z)
        nx = s.act(n, x_i)
        swap = _aut(make_transposition(s, x_i, x_k), f"({_fmt(x_i)}↔{_fmt(x_k)})")
        r_inv = _aut(make_transposition(s, nx, x_i), f"({_fmt(nx)}↔{_fmt(x_i)})")
        factors += [swap, r_inv, *left, *right, swap]
    return Word(factors)


def _split_twist(s: GSet, i: int, entries: dict) -> tuple[dict[int, int], EquivariantMap]:
    """Write a stratum-preserving map as κ̂ ∘ α with α(x_λ) = h_λ·x_λ."""
    kappa = {}
    twist = {}
    for (_, lam), img in entries.items():
        kappa[lam] = img.orbit
        if img.coset:
            twist[(i, lam)] = Point(i, lam, img.coset)
    return kappa, EquivariantMap.from_images(s, twist, check=False)


def _index_map(s: GSet, i: int, f: dict[int, int]) -> EquivariantMap:
    return EquivariantMap.from_images(s, {(i, a): Point(i, b, 0) for a, b in f.items() if a != b}, check=False)


def factor_preserving_finite(tau1: EquivariantMap, i: int, gens: GeneratorSet) -> Word:
    s = tau1.gset
    st = s.strata[i]
    entries = _entries(tau1)
    if not entries:
        return Word()
    m = st.orbit_count
    kappa, alpha = _split_twist(s, i, entries)
    full = [kappa.get(lam, lam) for lam in range(m)]
    if len(set(full)) == m:
        return Word([_aut(tau1, f"aut on stratum {i}")])
    rep_of: dict[int, int] = {}
    for lam, v in enumerate(full):
        rep_of.setdefault(v, lam)
    reps = set(rep_of.values())
    pi = {rep_of[v]: v for v in rep_of}
    rest_dom = [lam for lam in range(m) if lam not in reps]
    rest_img = [v for v in range(m) if v not in rep_of]
    pi.update(zip(rest_dom, rest_img))
    factors = [_aut(_index_map(s, i, pi), f"orbit permutation on stratum {i}")]
    same = _gen(collapse_name(CollapseType(i, 0, st.H)), gens)
    for a in rest_dom:
        r = rep_of[full[a]]
        perm = [a, r] + [v for v in range(m) if v not in (a, r)]
        fwd = {lam: perm[lam] for lam in range(m)}
        back = {v: lam for lam, v in fwd.items()}
        factors += [_aut(_index_map(s, i, fwd), f"orbit relabel {a},{r}"), same,
                    _aut(_index_map(s, i, back), f"orbit relabel {a},{r} inverse")]
    if alpha.layers:
        factors.append(_aut(alpha, f"orbit twists on stratum {i}"))
    return Word(factors)


def routing_rule(f: dict[int, int]) -> RuleBijection:
    """σ with f = ν ∘ σ ∘ μ for a finitely supported f: ℕ → ℕ."""
    support = sorted(n for n, v in f.items() if v != n)
    slot: dict[int, int] = {}
    exc = {}
    used = []
    for n in support:
        v = f[n]
        slot[v] = slot.get(v, 0) + 1
        u = pair(v, slot[v])
        exc[2 * n] = u
        used.append(u)
    freed = [pair(n, 0) for n in support]
    for u, fr in zip(sorted(used), freed):
        exc[route_inverse(u)] = fr
    return RuleBijection(exc)


def factor_preserving_infinite(tau1: EquivariantMap, gens: GeneratorSet) -> Word:
    """τ' on the infinite stratum as ν̂ ∘ σ ∘ μ̂ ∘ α."""
    s = tau1.gset
    i = s.infinite_stratum
    entries = _entries(tau1)
    if not entries:
        return Word()
    if any(k[0] != i or img.stratum != i for k, img in entries.items()):
        raise MalformedInput("map must preserve the infinite stratum")
    kappa, alpha = _split_twist(s, i, entries)
    moved = {a: b for a, b in kappa.items() if a != b}
    if set(moved.values()) == set(moved):
        return Word([_aut(tau1, "finitary automorphism")])
    sigma = routing_rule(kappa)
    factors = [_gen(NU_HAT, gens), _aut(EquivariantMap(s, (sigma,)), "routing bijection"),
               _gen(MU_HAT, gens)]
    if alpha.layers:
        factors.append(_aut(alpha, "orbit twists on the infinite stratum"))
    return Word(factors)


def factor_case2_trivial_stratum(tau2: EquivariantMap, gens: GeneratorSet) -> Word:
    """Double product over target points z^t_p of the finite complement."""
    s = tau2.gset
    i = s.infinite_stratum
    x1 = s.strata[i].x
    groups: dict[Point, list[int]] = {}
    for (_, lam), z in _entries(tau2).items():
        groups.setdefault(z, []).append(lam)
    factors: list[Factor] = []
    for st, lam in s.finite_orbits:
        for c in range(s.strata[st].index_in_group):
            z = Point(st, lam, c)
            pre = sorted(groups.get(z, ()))
            if not pre:
                continue
            f = {k: 0 for k in pre}
            pivot = None
            if 0 not in pre:
                pivot = pre[0]
                f[0] = pivot
            f_word = factor_preserving_infinite(_index_map(s, i, f), gens)
            left, right = _conjugated_collapse(s, i, x1, z, gens)
            block = []
            if pivot is not None:
                a = Point(i, pivot, 0)
                block.append(_aut(make_transposition(s, x1, a), f"({_fmt(x1)}↔{_fmt(a)})"))
            factors += block + left + right + f_word.factors
    return Word(factors)


# -- driver ---------------------------------------------------------------------------

def _factor_patch(tau: EquivariantMap, gens: GeneratorSet, stages: list[dict]) -> Word:
    s = tau.gset
    if is_bijective(tau):
        stages.append({"kind": "automorphism", "length": 1})
        return Word([_aut(tau, "automorphism")]) if tau.layers else Word()
    word = Word()
    for i, tau_i in enumerate(stratum_decompose(tau)):
        t1, t2 = split_prime(tau_i, i)
        st = s.strata[i]
        w1 = factor_preserving_infinite(t1, gens) if st.is_infinite else factor_preserving_finite(t1, i, gens)
        if not t2.layers:
            w2 = Word()
        elif st.is_infinite:
            w2 = factor_case2_trivial_stratum(t2, gens)
        else:
            w2 = factor_raising(t2, i, gens)
        stages.append({
            "kind": "stratum",
            "stratum": i,
            "support": len(tau_i.images),
            "preserving_support": len(t1.images),
            "raising_support": len(t2.images),
            "preserving_length": len(w1),
            "raising_length": len(w2),
        })
        word = word + w1 + w2
    return word


def factor(tau: EquivariantMap, gens: GeneratorSet) -> FactorizationReport:
    s = tau.gset
    s.require_supported()
    if gens.gset is not s:
        raise MalformedInput("generator set belongs to another G-set")
    stages: list[dict] = []
    word = Word()
    if tau.is_patch:
        word = _factor_patch(tau, gens, stages)
    else:
        for layer in tau.layers:
            if isinstance(layer, Patch):
                word = word + _factor_patch(EquivariantMap(s, (layer,), normal=True), gens, stages)
            elif isinstance(layer, Mu):
                word.factors.append(_gen(MU_HAT, gens))
                stages.append({"kind": "mu", "length": 1})
            elif isinstance(layer, Nu):
                word.factors.append(_gen(NU_HAT, gens))
                stages.append({"kind": "nu", "length": 1})
            elif isinstance(layer, RuleBijection):
                word.factors.append(_aut(EquivariantMap(s, (layer,), normal=True), "routing bijection"))
                stages.append({"kind": "rule", "length": 1})
            else:
                raise UnsupportedTail(f"unsupported layer {layer!r}")
    word = Word([f for f in word.factors if f.is_named or f.map.layers])
    for f in word.factors:
        if not f.is_named and not is_bijective(f.map):
            raise FactorizationError(f"explicit factor {f.label} is not an automorphism")
    if not maps_equal(recompose(word, gens), tau):
        raise FactorizationError("recomposed word differs from the input map")
    return FactorizationReport(word, True, stages)
