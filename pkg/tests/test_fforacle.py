import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from doublecosets.fforacle import (
    Budget,
    BudgetExceeded,
    UnsupportedField,
    build_formed_space,
    build_full_group,
    build_subgroup_instance,
    count_orbits,
    definite_point_orbits,
    enumerate_flags,
    expected_flag_count,
    judge,
    orbit_count,
    prime_field,
    stabilization_test,
    verify_section3_properties,
)
from doublecosets.fforacle.flags import canonical, singular_subspace_count
from doublecosets.fforacle.properties import (
    all_vectors,
    check_lemma_34_quadratic,
    check_lemma_35,
    check_lemma_37,
    lasso_values,
)
from doublecosets.rootsys import build_root_system
from doublecosets.subgroups import make_parabolic, parse_subgroup


def G_(name):
    return build_root_system(name[0], int(name[1:]))


def setup(name, x, nodes, q):
    G = G_(name)
    space = build_formed_space(G.family, G.rank, q)
    return G, space, parse_subgroup(G, x), make_parabolic(G, nodes)


def test_prime_fields():
    F = prime_field(5)
    assert all((a * F.inv[a]) % 5 == 1 for a in range(1, 5))
    assert F.squares() == {1, 4}
    with pytest.raises(UnsupportedField):
        prime_field(4)
    with pytest.raises(UnsupportedField):
        prime_field(11)


def test_forms():
    sp = build_formed_space("C", 2, 2)
    B = sp.bilinear
    assert ((B + B.T) % 2 == 0).all()
    assert all(sp.beta(v, v) == 0 for v in all_vectors(4, 2))
    assert round(np.linalg.det(B)) % 2 == 1
    od = build_formed_space("D", 2, 3)
    v = np.array([1, 2, 1, 1])
    assert od.Q(v) == (1 * 1 + 2 * 1) % 3
    ob = build_formed_space("B", 2, 3)
    vecs = all_vectors(5, 3)[1:]
    singular = sum(ob.Q(v) == 0 for v in vecs)
    assert singular // 2 == 40  # singular points of the parabolic quadric in PG(4, 3)


@pytest.mark.parametrize("fam,n,q,order", [("C", 2, 2, 720), ("A", 2, 2, 168), ("B", 2, 2, 720),
                                           ("D", 3, 2, 20160), ("C", 1, 3, 24)])
def test_group_orders(fam, n, q, order):
    inst = build_full_group(build_formed_space(fam, n, q))
    assert inst.preserves_forms()
    assert inst.order() == order


def test_trivial_torus_over_f2():
    G = G_("C2")
    space = build_formed_space("C", 2, 2)
    X = parse_subgroup(G, "T2")
    assert build_subgroup_instance(space, X).order() == 1


@pytest.mark.parametrize("fam,n,q", [("C", 3, 3), ("D", 4, 2), ("B", 3, 3), ("A", 3, 2)])
def test_subgroup_generators_preserve_forms(fam, n, q):
    from doublecosets.subgroups import enumerate_maximal_rank_subgroups
    G = G_(f"{fam}{n}")
    space = build_formed_space(fam, n, q)
    for X, _ in enumerate_maximal_rank_subgroups(G):
        assert build_subgroup_instance(space, X).preserves_forms()


@pytest.mark.parametrize("fam,n,q,nodes,count", [
    ("C", 2, 2, [1], 15), ("C", 2, 2, [2], 15), ("D", 4, 2, [1], 135), ("D", 4, 2, [4], 135),
    ("B", 3, 3, [3], 1120), ("A", 3, 3, [1, 2], 520), ("B", 2, 2, [2], 15), ("C", 3, 3, [3], 1120),
])
def test_flag_counts(fam, n, q, nodes, count):
    space = build_formed_space(fam, n, q)
    fs = enumerate_flags(space, make_parabolic(G_(f"{fam}{n}"), nodes))
    assert len(fs) == count == expected_flag_count(space, fs.parabolic)
    if fam != "A":
        assert space.is_totally_singular(fs.flags.astype(np.int64)).all()


def test_singular_counts_formula():
    assert singular_subspace_count("C", 2, 2, 2) == 15
    assert singular_subspace_count("D", 3, 3, 2) == 15  # one class of planes in Q+(5, 2)


def test_budget():
    space = build_formed_space("C", 4, 5)
    with pytest.raises(BudgetExceeded):
        enumerate_flags(space, make_parabolic(G_("C4"), [4]), Budget(1000, 10))


def test_csv_export():
    space = build_formed_space("C", 1, 2)
    fs = enumerate_flags(space, make_parabolic(G_("C1"), [1]))
    lines = fs.to_csv().strip().splitlines()
    assert lines[0] == "flag,member,dim,basis" and len(lines) == 1 + 3


@pytest.mark.parametrize("q", [2, 3, 5])
def test_sp2_sp2_three_orbits(q):
    G, space, X, P = setup("C2", "C1*C1", [1], q)
    rep = orbit_count(G, X, P, q)
    assert rep.orbit_count == 3 and sum(rep.orbit_sizes) == rep.point_count
    assert json.loads(json.dumps(rep.to_json()))["orbits"] == 3


def test_full_group_is_transitive():
    for name, nodes in (("C3", [2]), ("D4", [3]), ("B3", [1, 3]), ("A3", [2])):
        G = G_(name)
        rep = orbit_count(G, parse_subgroup(G, name), make_parabolic(G, nodes), 3)
        assert rep.orbit_count == 1


def test_generator_order_does_not_change_partition():
    G, space, X, P = setup("C3", "C1*C1*C1", [3], 3)
    fs = enumerate_flags(space, P)
    inst = build_subgroup_instance(space, X)
    a = count_orbits(inst, fs)
    inst.generators = inst.generators[::-1]
    assert count_orbits(inst, fs).orbit_sizes == a.orbit_sizes


@pytest.mark.parametrize("n", [2, 3])
def test_d_classes_swapped_by_reflection(n):
    for q in (2, 3):
        space = build_formed_space("D", n, q)
        G = G_(f"D{n}")
        plus = enumerate_flags(space, make_parabolic(G, [n]))
        minus = enumerate_flags(space, make_parabolic(G, [n - 1]))
        assert not set(plus.keys.tolist()) & set(minus.keys.tolist())
        s = np.eye(2 * n, dtype=np.int64)
        s[[n - 1, 2 * n - 1]] = s[[2 * n - 1, n - 1]]
        assert round(np.linalg.det(s)) == -1
        for src, dst in ((plus, minus), (minus, plus)):
            img = canonical((src.flags.astype(np.int64) @ s.T) % q, src.dims, space)
            hit = dst.index_of(img)
            assert (hit >= 0).all() and len(set(hit.tolist())) == len(dst)
        assert len(plus) + len(minus) == 2 * singular_subspace_count("D", n, n, q)


@pytest.mark.parametrize("n,q", [(2, 3), (2, 5), (3, 3), (2, 2), (3, 2)])
def test_definite_points_match_square_classes(n, q):
    orbits, classes = definite_point_orbits(n, q)
    assert orbits == classes <= 2


def test_judge():
    assert judge([3, 3, 3]) == "Bounded"
    assert judge([18, 19]) == "Growing"
    assert judge([4, 5, 5]) == "Bounded"
    assert judge([1, 5, 2]) == "Inconclusive"
    assert judge([5]) == "Inconclusive"


def test_stabilization_examples():
    G, _, X, P = setup("C2", "C1*C1", [1], 2)
    assert stabilization_test(G, X, P, [2, 3, 5]).counts == [3, 3, 3]
    G, _, X, P = setup("C4", "C1*C1*C1*C1", [4], 2)
    ev = stabilization_test(G, X, P, [2, 3])
    assert ev.verdict == "Growing"
    G = G_("B3")
    ev = stabilization_test(G, parse_subgroup(G, "B3"), make_parabolic(G, [2]), [2, 3])
    assert ev.counts == [1, 1] and ev.verdict == "Bounded"
    with pytest.raises(ValueError):
        stabilization_test(G, parse_subgroup(G, "B3"), make_parabolic(G, [2]), [3, 2])


def test_stabilization_partial():
    G, _, X, P = setup("C4", "C1*C1*C1*C1", [4], 2)
    ev = stabilization_test(G, X, P, [2, 3, 5], Budget(100_000, 60))
    assert ev.partial and ev.verdict == "Inconclusive" and ev.counts[0] is not None


@pytest.mark.parametrize("name,x", [("D2", "T2"), ("D3", "A1[gl]*T2")])
def test_lemma_39_bounded(name, x):
    # GL_{n_1} x GL_{n_2} in SO_{2n}, P_1
    G = G_(name)
    ev = stabilization_test(G, parse_subgroup(G, x), make_parabolic(G, [1]), [2, 3, 5])
    assert ev.verdict == "Bounded"


@pytest.mark.parametrize("fam,n,k,wd", [("C", 2, 1, False), ("B", 2, 1, True), ("B", 2, 1, False), ("D", 3, 1, False)])
def test_section3_report(fam, n, k, wd):
    rep = verify_section3_properties(build_formed_space(fam, n, 3).split(k, wd))
    assert rep.ok, rep.failures


def test_section3_needs_decomposition():
    with pytest.raises(ValueError):
        verify_section3_properties(build_formed_space("C", 2, 2))


def test_lemma_37_examples():
    assert set(lasso_values(build_formed_space("C", 2, 2).split(1))) == {0}
    vals = set(lasso_values(build_formed_space("B", 2, 2).split(1)))
    assert vals <= {0, 1}
    assert check_lemma_37(build_formed_space("B", 2, 2).split(1, True)).passed


def test_lemma_34_identity_case():
    # u = x: the quadratic relation is a function, so equal first values give equal second values
    c = check_lemma_34_quadratic(build_formed_space("D", 2, 3).split(1))
    assert c.passed


@pytest.mark.parametrize("x1", ["trivial", "full"])
def test_lemma_35(x1):
    c = check_lemma_35(build_formed_space("C", 3, 2).split(1), 2, x1)
    assert c.passed, c.detail


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(["C2", "B2", "D3", "C3"]), st.sampled_from([2, 3]), st.data())
def test_random_subgroup_preserves_flag_set(name, q, data):
    from doublecosets.subgroups import enumerate_maximal_rank_subgroups
    G = G_(name)
    X, _ = data.draw(st.sampled_from(enumerate_maximal_rank_subgroups(G)))
    node = data.draw(st.integers(1, G.rank))
    rep = orbit_count(G, X, make_parabolic(G, [node]), q)
    assert sum(rep.orbit_sizes) == rep.point_count
