import pytest

from eqmonoid.closure_lab import generated_partition, collapse_type_of
from eqmonoid.collapse import (MU_HAT, NU_HAT, build_V, build_W, collapse_type_count, collapse_types,
                               generators_for, kappa_classes, make_point_collapse, make_transposition,
                               relative_rank_formula, u_set)
from eqmonoid.endo import EquivariantMap, metrics
from eqmonoid.errors import InfeasibleMap, MalformedInput, UnsupportedCase
from eqmonoid.gset import Point

from instances import (S3, S3_C2, TRIVIAL, Z2, battery, gset, s3_case1, trivial_infinite, z2_case2,
                       z2_reference)


def test_u_sets_z2():
    s = z2_reference()
    assert len(u_set(s, 0)) == 2
    assert len(u_set(s, 1)) == 1
    assert kappa_classes(s) == [0]
    assert collapse_type_count(s) == 2


def test_trivial_group_counts():
    s = gset(TRIVIAL, ([0], 4))
    assert len(u_set(s, 0)) == 1
    assert kappa_classes(s) == []
    assert collapse_type_count(s) == 1
    w = build_W(s)
    assert len(w) == 1
    assert metrics(next(iter(w.named.values()))).defect == 1


def test_single_fixed_orbit():
    s = gset(Z2, ([0, 1], 1))
    assert kappa_classes(s) == [0]
    assert collapse_type_count(s) == 0
    assert len(build_W(s)) == 0


def test_u_set_uses_normalizer_classes():
    # N({e}) = S3 merges the three order-2 subgroups into one class
    s = gset(S3, ([0], 1), (S3_C2, 1))
    assert len(u_set(s, 0)) == 2
    # N(C2) = C2 keeps conjugates of C2 apart, but only S3 contains C2 here
    s = gset(S3, (S3_C2, 1), ([0, 1, 2, 3, 4, 5], 1))
    assert [len(c) for c in u_set(s, 0)] == [1, 1]


def test_point_collapse_z2():
    s = z2_reference()
    x, y = Point(0, 0, 0), Point(1, 0, 0)
    assert make_point_collapse(s, x, y).array == (2, 2, 2, 3)
    assert make_point_collapse(s, x, x) == EquivariantMap.identity(s)
    with pytest.raises(InfeasibleMap):
        make_point_collapse(s, y, x)
    with pytest.raises(MalformedInput):
        make_point_collapse(s, x, Point(0, 0, 1))


def test_transposition():
    s = z2_reference()
    t = make_transposition(s, Point(1, 0, 0), Point(1, 1, 0))
    assert t.array == (0, 1, 3, 2)
    assert (t @ t) == EquivariantMap.identity(s)
    assert make_transposition(s, Point(1, 0, 0), Point(1, 0, 0)) == EquivariantMap.identity(s)
    with pytest.raises(InfeasibleMap):
        make_transposition(s, Point(0, 0, 0), Point(1, 0, 0))


def test_same_orbit_transposition_inverse():
    s = z2_reference()
    x, y = Point(0, 0, 0), Point(0, 0, 1)
    assert make_transposition(s, x, y) @ make_transposition(s, y, x) == EquivariantMap.identity(s)


def test_build_w_z2():
    w = build_W(z2_reference())
    assert sorted(w.names()) == ["collapse:0→(0,0)", "swap-collapse:1"]
    assert w["collapse:0→(0,0)"].array == (2, 2, 2, 3)
    assert w["swap-collapse:1"].array == (0, 1, 3, 3)


@pytest.mark.parametrize("name,s", battery())
def test_w_has_one_collapse_per_type(name, s):
    w = build_W(s)
    assert len(w) == collapse_type_count(s) == len(collapse_types(s))
    for n, m in w.named.items():
        t = collapse_type_of(s, m)
        assert t is not None
        assert (t.stratum, t.target) == (w.types[n].stratum, w.types[n].target)


def test_build_v_case2():
    s = z2_case2()
    v = build_V(s)
    assert sorted(v.names()) == sorted(["collapse:0→(0,0)", "swap-collapse:1", MU_HAT, NU_HAT])
    assert relative_rank_formula(s) == 4 == len(v)


def test_build_v_case1():
    s = s3_case1()
    v = build_V(s)
    assert "swap-collapse:2" not in v
    assert len(v) == relative_rank_formula(s) == collapse_type_count(s) + 1


def test_case1_infinite_only():
    s = gset(Z2, ([0, 1], "inf"))
    assert sorted(build_V(s).names()) == [MU_HAT, NU_HAT]
    assert relative_rank_formula(s) == 2


def test_trivial_infinite():
    s = trivial_infinite()
    assert relative_rank_formula(s) == 2
    assert sorted(build_V(s).names()) == [MU_HAT, NU_HAT]


def test_v_rejects_finite_and_unsupported():
    with pytest.raises(UnsupportedCase):
        build_V(z2_reference())
    with pytest.raises(UnsupportedCase):
        relative_rank_formula(gset(S3, (S3_C2, "inf")))
    assert len(generators_for(z2_reference())) == 2


@pytest.mark.parametrize("name,s", battery())
def test_named_collapse_kernel_condition(name, s):
    idx = s.point_index
    w = build_W(s)
    for n, m in w.named.items():
        x = s.strata[w.types[n].stratum].x
        fx = m(x)
        pairs = [(idx[s.act(g, x)], idx[s.act(g, fx)]) for g in s.group.elements]
        kernel = {frozenset(c) for c in metrics(m).kernel if len(c) > 1}
        # the kernel is the equivalence generated by the pairs (g·x, g·τ(x))
        assert kernel == set(generated_partition(len(s.points), pairs))
