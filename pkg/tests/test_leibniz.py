import json
import random
from fractions import Fraction

import pytest

from leibalg.errors import DimensionMismatch, FieldMismatch, NotLeibniz, ShapeMismatch, ZeroLambda
from leibalg.exactfield import Field, enumerate_elements
from leibalg.leibniz import (algebra_from_json, automorphism_defect, bracket, check_leibniz, invariants,
                             is_automorphism, make_algebra, make_L1, make_L2)
from leibalg.linalg import SquareMatrix, Vector, rref_span

F5 = Field.gf(5)


def e(F, i, n=3):
    return Vector.basis(F, n, i)


def mutated_L1(F):
    # L1 plus [e3,e1] = e2
    return make_algebra(F, 3, [
        [[0, 0, 1], [0, 1, 0], [0, 0, 1]],
        [[0, 0, 0]] * 3,
        [[0, 1, 0], [0, 0, 0], [0, 0, 0]],
    ])


def test_brackets_L1():
    L = make_L1(F5)
    assert bracket(L, e(F5, 1), e(F5, 1)) == e(F5, 3)
    assert bracket(L, e(F5, 1), e(F5, 2)) == e(F5, 2)
    assert bracket(L, e(F5, 1), e(F5, 3)) == e(F5, 3)
    assert bracket(L, e(F5, 2), e(F5, 1)).is_zero()


def test_brackets_L2():
    L = make_L2(F5, 2)
    assert bracket(L, e(F5, 1), e(F5, 2)) == e(F5, 2) + e(F5, 3).scale(2)
    with pytest.raises(ZeroLambda):
        make_L2(F5, 0)
    with pytest.raises(ZeroLambda):
        make_L2(F5, 5)


def test_identity_holds(prime_field):
    assert check_leibniz(make_L1(prime_field)) is None
    for lam in enumerate_elements(prime_field):
        if lam:
            assert check_leibniz(make_L2(prime_field, lam)) is None


def test_mutated_violation():
    v = check_leibniz(mutated_L1(F5))
    assert v.triple == (1, 1, 1)
    assert v.lhs == e(F5, 3)
    assert v.rhs == e(F5, 2) + e(F5, 3)
    with pytest.raises(NotLeibniz):
        invariants(mutated_L1(F5))


def test_trivial_algebra():
    Z = make_algebra(F5, 3, [[[0, 0, 0]] * 3] * 3)
    inv = invariants(Z)
    assert inv.derived.dim == 0 and inv.center.dim == 3


def test_invariants(prime_field):
    F = prime_field
    d23 = rref_span([e(F, 2), e(F, 3)])
    right = rref_span([e(F, 1) - e(F, 3)])
    lams = [x for x in enumerate_elements(F) if x]
    for L in [make_L1(F)] + [make_L2(F, lam) for lam in lams]:
        inv = invariants(L)
        assert inv.derived == inv.leib == inv.left_center == d23
        assert inv.right_center == right
        assert inv.center.dim == 0


def test_invariants_rationals(QQ):
    inv = invariants(make_L2(QQ, Fraction(-3, 7)))
    assert inv.derived.describe() == "span{e2, e3}"
    assert inv.right_center.describe() == "span{e1 - e3}"


def test_automorphism_defect():
    L = make_L1(F5)
    assert is_automorphism(L, SquareMatrix.identity(F5, 3))
    swap = SquareMatrix.of(F5, [[0, 1, 0], [1, 0, 0], [0, 0, 1]])
    d = automorphism_defect(L, swap)
    assert d.pair == (1, 1)
    zero = SquareMatrix.of(F5, [[0] * 3] * 3)
    assert automorphism_defect(L, zero).singular
    with pytest.raises(DimensionMismatch):
        automorphism_defect(L, SquareMatrix.identity(F5, 2))
    with pytest.raises(FieldMismatch):
        automorphism_defect(L, SquareMatrix.identity(Field.gf(7), 3))


def test_bilinearity_random_triples(QQ):
    rng = random.Random(7)
    for F in (F5, Field.gf(7), QQ):
        for L in (make_L1(F), make_L2(F, 3)):
            for _ in range(200):
                x, y, z = (Vector.of(F, [rng.randint(-9, 9) for _ in range(3)]) for _ in range(3))
                c = F(rng.randint(-9, 9))
                assert bracket(L, x + y.scale(c), z) == bracket(L, x, z) + bracket(L, y, z).scale(c)
                assert bracket(L, x, y + z.scale(c)) == bracket(L, x, y) + bracket(L, x, z).scale(c)
                lhs = bracket(L, x, bracket(L, y, z))
                assert lhs == bracket(L, bracket(L, x, y), z) + bracket(L, y, bracket(L, x, z))


def test_table_validation():
    with pytest.raises(ShapeMismatch):
        make_algebra(F5, 3, [[[0, 0, 0]] * 3] * 2)
    with pytest.raises(ShapeMismatch):
        make_algebra(F5, 2, [[[0, 0, 0]] * 2] * 2)


def test_json_roundtrip(QQ):
    for L in (make_L1(F5), make_L2(Field.gf(7), 3), make_L2(QQ, Fraction(2, 3))):
        doc = json.loads(json.dumps(L.to_json()))
        assert algebra_from_json(doc) == L
