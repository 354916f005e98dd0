"""Elementary collapses, the generating sets W and V, and the rank formulas."""
from __future__ import annotations

from dataclasses import dataclass, field

from .endo import EquivariantMap, mu_hat, nu_hat
from .errors import InfeasibleMap, MalformedInput, UnsupportedCase
from .groups import Subgroup
from .gset import ALL_FINITE, CASE1, CASE2, GSet, Point

MU_HAT = "mu-hat"
NU_HAT = "nu-hat"


@dataclass(frozen=True)
class CollapseType:
    """Type (H_i, [K]_{N_i}); ``target`` 0 is [H_i] itself, t > 0 is collapse target t-1."""

    stratum: int
    target: int
    subgroup: Subgroup

    @property
    def same_class(self) -> bool:
        return self.target == 0


def collapse_name(t: CollapseType) -> str:
    if t.same_class:
        return f"swap-collapse:{t.stratum}"
    return f"collapse:{t.stratum}→({t.stratum},{t.target - 1})"


@dataclass
class GeneratorSet:
    """Aut_G(X) (implicit) together with named generator maps."""

    gset: GSet
    named: dict[str, EquivariantMap] = field(default_factory=dict)
    types: dict[str, CollapseType] = field(default_factory=dict)
    aut_symbol: str = "Aut_G(X)"

    def __len__(self) -> int:
        return len(self.named)

    def __contains__(self, name) -> bool:
        return name in self.named

    def __getitem__(self, name: str) -> EquivariantMap:
        return self.named[name]

    def names(self) -> list[str]:
        return list(self.named)


def u_set(s: GSet, i: int) -> list[tuple[Subgroup, ...]]:
    """U(H_i): N_i-classes of stabilizers K >= H_i, starting with [H_i]_{N_i}."""
    st = s.strata[i]
    return [(st.H,)] + [t.n_class for t in st.collapse_targets]


def kappa_classes(s: GSet) -> list[int]:
    return [st.index for st in s.strata if st.orbit_count == 1]


def collapse_types(s: GSet) -> list[CollapseType]:
    out = []
    for st in s.strata:
        if st.orbit_count >= 2:
            out.append(CollapseType(st.index, 0, st.H))
        for j, t in enumerate(st.collapse_targets):
            out.append(CollapseType(st.index, j + 1, t.subgroup))
    return out


def collapse_type_count(s: GSet) -> int:
    return sum(len(u_set(s, st.index)) for st in s.strata) - len(kappa_classes(s))


def relative_rank_formula(s: GSet) -> int:
    s.require_supported()
    base = collapse_type_count(s)
    return base if s.case_tag == ALL_FINITE else base + 1


def make_point_collapse(s: GSet, x: Point, y: Point) -> EquivariantMap:
    """[x ↦ y]: g·x ↦ g·y, identity elsewhere."""
    x, y = s.validate_point(x), s.validate_point(y)
    if x == y:
        return EquivariantMap.identity(s)
    if s.same_orbit(x, y):
        raise MalformedInput("collapse endpoints must lie in distinct orbits")
    if not s.stabilizer_of(x).issubgroup(s.stabilizer_of(y)):
        raise InfeasibleMap("infeasible: G_x is not contained in G_y")
    a_inv = s.group.inv(s.coset_rep(x))
    return EquivariantMap.from_images(s, {(x.stratum, x.orbit): s.act(a_inv, y)})


def make_transposition(s: GSet, x: Point, y: Point) -> EquivariantMap:
    """(x ↔ y) for G_x = G_y.

    On distinct orbits this swaps g·x and g·y.  When y = h·x lies in the orbit
    of x it is the orbit automorphism g·x ↦ g·y, whose inverse is (y ↔ x).
    """
    x, y = s.validate_point(x), s.validate_point(y)
    if s.stabilizer_of(x) != s.stabilizer_of(y):
        raise InfeasibleMap("transposition needs equal stabilizers")
    g = s.group
    ax, ay = s.coset_rep(x), s.coset_rep(y)
    if s.same_orbit(x, y):
        return EquivariantMap.from_images(s, {(x.stratum, x.orbit): s.act(g.inv(ax), y)})
    return EquivariantMap.from_images(s, {
        (x.stratum, x.orbit): s.act(g.inv(ax), y),
        (y.stratum, y.orbit): s.act(g.inv(ay), x),
    })


def build_W(s: GSet) -> GeneratorSet:
    gens = GeneratorSet(s)
    for t in collapse_types(s):
        st = s.strata[t.stratum]
        if t.same_class:
            m = make_point_collapse(s, st.x, st.x_prime)
        else:
            m = make_point_collapse(s, st.x, st.collapse_targets[t.target - 1].point)
        name = collapse_name(t)
        gens.named[name] = m
        gens.types[name] = t
    return gens


def build_V(s: GSet) -> GeneratorSet:
    if s.case_tag not in (CASE1, CASE2):
        raise UnsupportedCase(f"V is defined for case1/case2 G-sets, not {s.case_tag}")
    w = build_W(s)
    drop = collapse_name(CollapseType(s.infinite_stratum, 0, s.strata[s.infinite_stratum].H))
    gens = GeneratorSet(s)
    for name, m in w.named.items():
        if name != drop:
            gens.named[name] = m
            gens.types[name] = w.types[name]
    gens.named[MU_HAT] = mu_hat(s)
    gens.named[NU_HAT] = nu_hat(s)
    return gens


def generators_for(s: GSet) -> GeneratorSet:
    """W for all-finite G-sets, V for case1/case2."""
    s.require_supported()
    return build_W(s) if s.is_finite else build_V(s)
