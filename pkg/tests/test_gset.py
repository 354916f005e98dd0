import pytest

from eqmonoid.errors import MalformedInput, UnsupportedCase
from eqmonoid.gset import ALL_FINITE, CASE1, CASE2, UNSUPPORTED, Point, act, stab_classes, stabilizer_of

from instances import S3, S3_C2, S3_C3, V4, Z2, battery, gset, s3_case1, z2_case2, z2_reference


def test_z2_reference_structure():
    s = z2_reference()
    assert len(s.strata) == 2
    assert s.size == 4
    assert [st.orbit_count for st in s.strata] == [1, 2]
    assert [st.index_in_group for st in s.strata] == [2, 1]
    assert s.case_tag == ALL_FINITE


def test_case_tags():
    assert z2_case2().case_tag == CASE2
    assert gset(S3, (S3_C2, 1), ([0, 1, 2, 3, 4, 5], "inf")).case_tag == CASE1
    assert gset(S3, (S3_C2, "inf"), ([0], 1)).case_tag == UNSUPPORTED


def test_unsupported_rejected():
    s = gset(S3, (S3_C2, "inf"))
    with pytest.raises(UnsupportedCase):
        s.require_supported()


def test_two_infinite_families_rejected():
    with pytest.raises(MalformedInput):
        gset(Z2, ([0], "inf"), ([0, 1], "inf"))


def test_bad_multiplicity():
    with pytest.raises(MalformedInput):
        gset(Z2, ([0], 0))


def test_conjugate_stabilizers_share_a_stratum():
    s = gset(S3, ([0, 1], 1), ([0, 3], 1))
    assert len(s.strata) == 1
    assert s.strata[0].orbit_count == 2


def test_strata_ordered_by_stabilizer_size():
    for _, s in battery():
        sizes = [st.H.order for st in s.strata]
        assert sizes == sorted(sizes)


def test_free_orbit_moves_points():
    s = z2_reference()
    p = Point(0, 0, 0)
    assert act(s, 0, p) == p
    assert act(s, 1, p) == Point(0, 0, 1)


@pytest.mark.parametrize("name,s", battery())
def test_action_laws(name, s):
    g = s.group
    for p in s.points:
        assert s.act(0, p) == p
        for a in g.elements:
            for b in g.elements:
                assert s.act(a, s.act(b, p)) == s.act(g.mul(a, b), p)


@pytest.mark.parametrize("name,s", battery())
def test_stabilizers(name, s):
    g = s.group
    for p in s.points:
        stab = stabilizer_of(s, p)
        assert list(stab.members) == [a for a in g.elements if s.act(a, p) == p]
        assert stab in s.strata[p.stratum].conj_class.members
        for a in g.elements:
            assert s.stabilizer_of(s.act(a, p)) == g.conjugate(stab, g.inv(a))
    for st in s.strata:
        assert s.stabilizer_of(st.x) == st.H
        assert len([p for p in s.points if p.stratum == st.index]) == st.orbit_count * st.index_in_group


def test_stab_classes():
    stab, conj = stab_classes(z2_reference())
    assert stab == [Z2.trivial, Z2.whole]
    stab, _ = stab_classes(gset(S3, (S3_C2, 1)))
    assert [list(h.members) for h in stab] == [[0, 1], [0, 3], [0, 5]]
    stab, conj = stab_classes(gset(V4, ([0, 1, 2, 3], 1)))
    assert stab == [V4.whole] and len(conj) == 1


def test_collapse_targets_contain_rep():
    s = gset(S3, ([0], 1), (S3_C2, 1), (S3_C3, 1), ([0, 1, 2, 3, 4, 5], 1))
    st = s.strata[0]
    # {e} collapses onto one class of order-2, the order-3 and the whole group
    assert [t.subgroup.order for t in st.collapse_targets] == [2, 3, 6]
    for t in st.collapse_targets:
        assert s.stabilizer_of(t.point) == t.subgroup
        assert st.H.issubgroup(t.subgroup)
    c2 = s.strata[1]
    assert [t.subgroup.order for t in c2.collapse_targets] == [6]


def test_validate_point():
    s = z2_reference()
    with pytest.raises(MalformedInput):
        s.validate_point((0, 1, 0))
    with pytest.raises(MalformedInput):
        s.validate_point((5, 0, 0))
    with pytest.raises(MalformedInput):
        s.validate_point("abc")
    assert s.validate_point([1, 1, 0]) == Point(1, 1, 0)


def test_infinite_gset_points_on_demand():
    s = s3_case1()
    i = s.infinite_stratum
    p = s.validate_point((i, 10**6, 0))
    assert s.act(3, p) == p
    with pytest.raises(UnsupportedCase):
        s.points
