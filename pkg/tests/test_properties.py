"""Property-based checks of the algebraic laws."""
import random

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from eqmonoid import serialize as ser
from eqmonoid.closure_lab import Lab
from eqmonoid.collapse import build_W, generators_for
from eqmonoid.endo import (MU, NU, EquivariantMap, maps_equal, metrics, mu, nu, pair, route, route_inverse,
                           unpair, window_size)
from eqmonoid.factorize import factor, recompose, routing_rule
from eqmonoid.groups import FiniteGroup
from eqmonoid.gset import INF, GSet, OrbitSpec

from instances import S3, V4, Z2, Z3, Z4, random_finite_map, random_sparse_map, s3_case1, z2_case2

SETTINGS = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
GROUPS = [Z2, Z3, Z4, V4, S3]


@st.composite
def perm_groups(draw):
    n = draw(st.integers(1, 4))
    gens = draw(st.lists(st.permutations(list(range(n))), min_size=1, max_size=2))
    return FiniteGroup.from_permutation_generators(n, gens)


@st.composite
def finite_gsets(draw, max_orbits=3):
    g = draw(st.sampled_from(GROUPS))
    subs = g.all_subgroups()
    k = draw(st.integers(1, max_orbits))
    specs = [OrbitSpec(draw(st.sampled_from(subs)), 1) for _ in range(k)]
    return GSet(g, specs)


@st.composite
def infinite_gsets(draw):
    g = draw(st.sampled_from(GROUPS))
    subs = g.all_subgroups()
    inf = draw(st.sampled_from([g.trivial, g.whole]))
    others = [h for h in subs if g.class_of(h) != g.class_of(inf)]
    k = draw(st.integers(0, 2))
    specs = [OrbitSpec(inf, INF)] + [OrbitSpec(draw(st.sampled_from(others)), 1) for _ in range(k) if others]
    return GSet(g, specs)


@SETTINGS
@given(perm_groups())
def test_group_laws(g):
    for a in g.elements:
        assert g.mul(a, g.inv(a)) == 0
        assert g.mul(0, a) == a
        for b in g.elements:
            for c in g.elements:
                assert g.mul(g.mul(a, b), c) == g.mul(a, g.mul(b, c))


@SETTINGS
@given(perm_groups())
def test_subgroup_lattice(g):
    subs = g.all_subgroups()
    for h in subs:
        assert g.order % h.order == 0
        assert h.issubgroup(g.normalizer(h))
    members = [h for c in g.conj_classes_of_subgroups() for h in c.members]
    assert sorted(members, key=lambda h: h.key()) == subs


@SETTINGS
@given(finite_gsets())
def test_action_and_stabilizers(s):
    g = s.group
    for p in s.points:
        for a in g.elements:
            q = s.act(a, p)
            assert s.stabilizer_of(q) == g.conjugate(s.stabilizer_of(p), g.inv(a))


@SETTINGS
@given(finite_gsets(), st.randoms(use_true_random=False))
def test_maps_are_equivariant_and_compose(s, rnd):
    f, h = random_finite_map(s, rnd), random_finite_map(s, rnd)
    for p in s.points:
        for a in s.group.elements:
            assert f(s.act(a, p)) == s.act(a, f(p))
        assert (f @ h)(p) == f(h(p))
    mf, mh, mfh = metrics(f), metrics(h), metrics(f @ h)
    assert mfh.range <= min(mf.range, mh.range)
    assert mfh.defect >= max(mf.defect, mh.defect)


@SETTINGS
@given(finite_gsets(), st.randoms(use_true_random=False))
def test_factor_finite(s, rnd):
    gens = build_W(s)
    tau = random_finite_map(s, rnd)
    r = factor(tau, gens)
    assert r.verified and recompose(r.word, gens) == tau
    assert set(r.word.names()) <= set(gens.names())


@SETTINGS
@given(infinite_gsets(), st.randoms(use_true_random=False))
def test_factor_infinite(s, rnd):
    gens = generators_for(s)
    tau = random_sparse_map(s, rnd, support=8, bound=20)
    r = factor(tau, gens)
    assert maps_equal(recompose(r.word, gens), tau, window=200)


@SETTINGS
@given(st.integers(0, 10**12))
def test_index_bijections(k):
    assert route(route_inverse(k)) == k == route_inverse(route(k))
    assert pair(*unpair(k)) == k
    assert nu(route(mu(k))) == k


@SETTINGS
@given(st.dictionaries(st.integers(0, 40), st.integers(0, 40), max_size=15))
def test_routing_rule_factors_index_maps(f):
    sigma = routing_rule(f)
    for n in range(200):
        assert nu(sigma(mu(n))) == f.get(n, n)
        assert sigma.inverse(sigma(n)) == n


@st.composite
def tail_words(draw):
    s = z2_case2()
    atoms = []
    for _ in range(draw(st.integers(0, 5))):
        kind = draw(st.sampled_from(["mu", "nu", "patch", "rule"]))
        if kind == "mu":
            atoms.append(MU)
        elif kind == "nu":
            atoms.append(NU)
        elif kind == "patch":
            rnd = random.Random(draw(st.integers(0, 10**6)))
            atoms.extend(random_sparse_map(s, rnd, support=4, bound=12).layers)
        else:
            f = draw(st.dictionaries(st.integers(0, 12), st.integers(0, 12), max_size=4))
            atoms.append(routing_rule(f))
    return s, atoms


@SETTINGS
@given(tail_words())
def test_normal_form_preserves_values(word):
    s, atoms = word
    raw = EquivariantMap(s, atoms, normal=True)
    normal = EquivariantMap(s, atoms)
    w = window_size(raw, normal)
    assert maps_equal(raw, normal, window=4 * w)
    doc = ser.emit_map(normal)
    assert ser.parse_map(ser.loads(ser.dumps(doc)), s).layers == normal.layers


@SETTINGS
@given(st.randoms(use_true_random=False))
def test_case1_serialization_round_trip(rnd):
    s = s3_case1()
    f = random_sparse_map(s, rnd)
    g = ser.parse_map(ser.emit_map(f), s)
    assert g.layers == f.layers


@SETTINGS
@given(finite_gsets(max_orbits=2), st.lists(st.integers(0, 10**6), max_size=3))
def test_closure_monotone(s, picks):
    lab = Lab(s)
    if not lab.non_units:
        return
    extra = [lab.non_units[p % len(lab.non_units)] for p in picks]
    sizes = [lab.closure_size(extra[:k]) for k in range(len(extra) + 1)]
    assert sizes == sorted(sizes)
