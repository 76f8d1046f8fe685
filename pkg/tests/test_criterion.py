from fractions import Fraction

import pytest

from doublecosets.criterion import (
    analyse,
    criterion_value,
    find_witness,
    lemma_bases,
    prefilter_theorem41,
    verify_table,
)
from doublecosets.rootsys import build_root_system, closed_hull, standard_levi, weyl_conjugate
from doublecosets.subgroups import (
    levi_subsystem,
    make_parabolic,
    parse_parabolic,
    parse_subgroup,
    subsystem_of_X,
)


def G_(name):
    return build_root_system(name[0], int(name[1:]))


def unit(m, *pairs):
    v = [0] * m
    for i, c in pairs:
        v[i - 1] += c
    return tuple(v)


def pattern(G, node):
    """X = maximal torus, Phi1 = Phi2 = Phi(G), L the Levi of P_node."""
    phiX = G.empty()
    phiL = levi_subsystem(G, make_parabolic(G, [node]))
    return G.full(), G.full(), phiX, phiL


def test_b2_pattern_value():
    G = G_("C2")
    p1, p2, X, L = pattern(G, 1)
    assert p1.type_name == "B2" and (p2.roots & L.roots) and len(p2.roots & L.roots) == 2
    assert criterion_value(p1, p2, X, L) == Fraction(7, 2)
    assert criterion_value(p1, p2, X, L, "levi") == 1


def test_a3_pattern_value():
    G = G_("A3")
    p1, p2, X, L = pattern(G, 2)
    assert L.type_name == "A1A1"
    assert criterion_value(p1, p2, X, L) == Fraction(9, 2)
    assert criterion_value(p1, p2, X, L, "levi") == 1


def test_phi1_inside_x_is_negative():
    G = G_("C2")
    a1 = closed_hull(G, [(2, 0)])
    v = criterion_value(a1, G.empty(), a1, G.empty())
    assert v == Fraction(-3, 2)


def test_unknown_convention():
    G = G_("C2")
    with pytest.raises(ValueError):
        criterion_value(G.full(), G.full(), G.empty(), G.empty(), "other")


def test_prefilter():
    G = G_("A5")
    assert prefilter_theorem41(G, parse_subgroup(G, "A1*A1*A1*T2"), parse_parabolic(G, "P3")) is None
    G = G_("C4")
    v = prefilter_theorem41(G, parse_subgroup(G, "C1*C1*C1*C1"), parse_parabolic(G, "P2"))
    assert v is not None and v.value == "Infinite"
    assert prefilter_theorem41(G, parse_subgroup(G, "C2*C2"), parse_parabolic(G, "P2")) is None


def test_lemma_an_base_verbatim():
    G = G_("A7")
    X = parse_subgroup(G, "A1*A1*A1*A1*T3")
    m = 8
    # alpha_2, alpha_3 + alpha_4, alpha_5 + alpha_6
    expected = [unit(m, (2, 1), (3, -1)), unit(m, (3, 1), (5, -1)), unit(m, (5, 1), (7, -1))]
    for i in range(2, 7):
        b1, b2, _ = lemma_bases(G, X, make_parabolic(G, [i]))
        assert b1 == expected
        assert b2 == [unit(m, (k, 1), (k + 1, -1)) for k in (i - 1, i, i + 1)]
        w = find_witness(G, X, make_parabolic(G, [i]), "lemma")
        assert w.source.startswith("lemma: A_n") and list(w.phi1.base) == expected
        assert w.value > 0


@pytest.mark.parametrize("n", [5, 6])
def test_lemma_dn_base_verbatim(n):
    G = G_(f"D{n}")
    X = parse_subgroup(G, f"A1[gl]*A{n - 3}[gl]*T2@+")
    expected = [unit(n, (1, 1), (n, -1)), unit(n, (n - 1, 1), (n, 1)), unit(n, (2, 1), (n - 1, -1))]
    b1, b2, label = lemma_bases(G, X, make_parabolic(G, [n]))
    assert b1 == b2 == expected
    w = find_witness(G, X, make_parabolic(G, [n]), "lemma")
    assert w is not None and list(w.phi1.base) == expected


def test_d4_exclusion():
    G = G_("D4")
    L23 = parse_subgroup(G, "A1[gl]*A1[gl]*T2@-")
    L24 = parse_subgroup(G, "A1[gl]*A1[gl]*T2@+")
    for strategy in ("lemma", "b2a3", "full"):
        assert find_witness(G, L23, make_parabolic(G, [4]), strategy) is None
        assert find_witness(G, L24, make_parabolic(G, [3]), strategy) is None
    assert find_witness(G, L23, make_parabolic(G, [3])) is not None
    assert find_witness(G, L24, make_parabolic(G, [4])) is not None


def test_spherical_has_no_witness():
    G = G_("C5")
    X = parse_subgroup(G, "C2*C3")
    for k in range(1, 6):
        assert find_witness(G, X, make_parabolic(G, [k]), "full") is None


def test_witness_is_consistent():
    G = G_("C4")
    X = parse_subgroup(G, "C1*C1*C1*C1")
    P = make_parabolic(G, [4])
    w = find_witness(G, X, P)
    assert weyl_conjugate(w.phi1, w.phi2)[0]
    v = criterion_value(w.phi1, w.phi2, subsystem_of_X(G, X), levi_subsystem(G, P), "levi")
    assert v == w.value > 0
    rep = analyse(G, X, P)
    assert rep.verdict == "InfiniteWitnessed" and rep.to_json()["witness"]["value"] == str(w.value)


def test_verify_table_small():
    empty = verify_table(1)
    assert empty.ok and empty.infinite_checked == 0
    rep = verify_table(4)
    assert rep.soundness_violations == [] and rep.completeness_failures == []
    assert rep.infinite_checked > 0 and rep.finite_checked > 0


def test_semisimple_convention_fires_on_a_finite_case():
    # L_{2,3} with P_4 in D_4 is finite, yet this A_3 pair scores 7/2 under |psi| + rank psi
    G = G_("D4")
    X = parse_subgroup(G, "A1[gl]*A1[gl]*T2@-")
    phiX, phiL = subsystem_of_X(G, X), levi_subsystem(G, make_parabolic(G, [4]))
    phi = closed_hull(G, [(1, 0, 0, 1), (0, 1, -1, 0), (0, 0, 1, -1)])
    assert phi.type_name == "A3" and not (phi.roots & phiX.roots)
    assert (phi & phiL).type_name == "A2"
    assert criterion_value(phi, phi, phiX, phiL) == Fraction(7, 2)
    assert criterion_value(phi, phi, phiX, phiL, "levi") <= 0
