import itertools
from functools import lru_cache

import pytest

from leibalg import autgroup as ag
from leibalg.errors import NotAGroup, NotSubset, PartialMap
from leibalg.exactfield import Field
from leibalg.grouptool import (MatrixGroupSet, analyze, certify_decomposition, element_order, hom_check,
                               is_normal, iso_to_cyclic, set_product)
from leibalg.leibniz import make_L1
from leibalg.linalg import SquareMatrix, mat_mul

F2, F3, F5, F7 = (Field.gf(p) for p in (2, 3, 5, 7))


def trivial(F, n=3):
    return MatrixGroupSet.build(F, n, [SquareMatrix.identity(F, n)])


@lru_cache(maxsize=None)
def C1C2(F):
    # closure of G itself is covered in test_analyze_examples and the acceptance suite
    L, G = make_L1(F), ag.family1_set(F)
    return G, ag.centralizer_of_basis(L, G, 1, False), ag.centralizer_of_basis(L, G, 2, False)


def test_analyze_examples():
    r = analyze(ag.family1_set(F2))
    assert (r.is_group, r.order, r.abelian) == (True, 6, False)
    a, b = r.abelian_failure.elements
    assert mat_mul(a, b) != mat_mul(b, a)
    r = analyze(ag.family2_set(F5))
    assert (r.is_group, r.order, r.abelian) == (True, 20, True)
    r = analyze(trivial(F5))
    assert (r.is_group, r.order, r.abelian) == (True, 1, True)


def test_analyze_non_group():
    G = ag.family1_set(F3)
    S = MatrixGroupSet.build(F3, 3, G.elements[:5])
    r = analyze(S)
    assert not r.is_group and r.group_failure is not None
    with pytest.raises(NotAGroup):
        iso_to_cyclic(S, 5)


def test_group_associativity_spot():
    G = ag.family1_set(F2)
    for a, b, c in itertools.product(G, repeat=3):
        assert mat_mul(mat_mul(a, b), c) == mat_mul(a, mat_mul(b, c))


def test_set_product_examples():
    G, C1, C2 = C1C2(F2)
    P = set_product(C2, C1)
    assert P.order == 4 and P.issubset(G) and not G.issubset(P)
    B = ag.family2_set(F3)
    assert set_product(trivial(F3), B).same_elements(B)
    _, C1, _ = C1C2(F3)
    assert set_product(ag.c3_set(F3), ag.c4_set(F3)).same_elements(C1)


def test_is_normal_examples():
    _, C1, _ = C1C2(F5)
    assert is_normal(ag.c3_set(F5), C1)
    res = is_normal(ag.c4_set(F5), C1)
    assert not res
    g, x = res.witness
    from leibalg.linalg import mat_inv
    assert mat_mul(mat_mul(g, x), mat_inv(g)) not in ag.c4_set(F5)
    G = ag.family1_set(F2)
    assert is_normal(G, G)
    with pytest.raises(NotSubset):
        is_normal(ag.family2_set(F5), C1)


def test_certify_examples():
    _, C1, _ = C1C2(F5)
    cert = certify_decomposition("Semidirect", ag.c3_set(F5), ag.c4_set(F5), C1)
    assert cert.certified and cert.coverage == 1 and cert.coverage_text == "20/20"
    G = ag.family2_set(F7)
    C, A = ag.l2_decomposition(G)
    cert = certify_decomposition("Direct", C, A, G)
    assert cert.certified and cert.H_normal
    G, C1, C2 = C1C2(F2)
    cert = certify_decomposition("SetProduct", C1, C2, G)
    assert not cert.product_covers and cert.coverage_text == "4/6"
    assert not cert.certified


def test_certify_rejects_non_normal():
    _, C1, _ = C1C2(F5)
    cert = certify_decomposition("Semidirect", ag.c4_set(F5), ag.c3_set(F5), C1)
    assert not cert.N_normal and not cert.certified and cert.normality_witness is not None


def test_iso_to_cyclic_examples():
    c = iso_to_cyclic(ag.c3_set(F7), 7)
    assert c and c.generator == ag.c1_matrix(1, 1, F7)
    c = iso_to_cyclic(ag.c4_set(F7), 6)
    assert c and c.generator == ag.c1_matrix(3, 0, F7)
    _, A = ag.l2_decomposition(ag.family2_set(F2))
    assert iso_to_cyclic(A, 1)
    assert not iso_to_cyclic(ag.c3_set(F7), 6)
    # GL2(GF(2)) is not cyclic
    assert not iso_to_cyclic(ag.family1_set(F2), 6)


def test_element_order():
    assert element_order(ag.c1_matrix(1, 1, F5), 10) == 5
    assert element_order(ag.c1_matrix(2, 0, F5), 3) is None


def test_hom_check_examples():
    G = ag.family1_set(F2)
    h = hom_check(G, ag.phi_L1, ag.gl2_set(F2))
    assert (h.homomorphism, h.injective, h.surjective) == (True, True, True)
    _, _, C2 = C1C2(F3)
    h = hom_check(C2, ag.phi_L1, ag.unit_upper_triangular_2x2(F3))
    assert h.isomorphism
    I = G.identity()
    h = hom_check(G, lambda g: I, G)
    assert h.homomorphism and not h.injective and h.kernel_order == 6
    with pytest.raises(PartialMap):
        hom_check(G, {I: I}, G)


def test_hom_check_failure_witness():
    G = ag.family2_set(F3)
    # transpose is an anti-homomorphism; on this abelian group it is a homomorphism
    t = lambda m: SquareMatrix.of(m.field, [list(r) for r in zip(*m.rows)])
    T = MatrixGroupSet.build(F3, 3, [t(g) for g in G])
    assert hom_check(G, t, T).isomorphism
    G1 = ag.family1_set(F2)
    T1 = MatrixGroupSet.build(F2, 3, [t(g) for g in G1])
    h = hom_check(G1, t, T1)
    assert not h.homomorphism and h.failure is not None
