"""Automorphism groups of L1 and L2(lambda).

Two independent routes produce the automorphism group over a prime field:

* enumeration: every candidate matrix filtered by the automorphism
  condition, either over all of ``GF(p)^(3x3)`` (brute force, scalar
  arithmetic) or over the candidates sending e2, e3 into ``[L, L]``
  (pruned, vectorised with numpy);
* the closed-form families, built directly from their free parameters.

Matrices use the layout of :mod:`leibalg.linalg` (columns are images).
The L1 family is::

    [1   0    0     ]
    [a2  b2   a2    ]
    [a3  b3   1 + a3]

and the L2 family, with ``beta != 0``::

    [1         0      0   ]
    [0         beta   0   ]
    [beta - 1  sigma  beta]
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import (FieldTooLarge, InfiniteField, NotFactorable, NotInFamily, ShapeUnsupported,
                     SingularInput, SingularParams)
from .exactfield import Field, FieldElement, enumerate_elements
from .grouptool import MatrixGroupSet, require_group
from .leibniz import Algebra, invariants, is_automorphism
from .linalg import SquareMatrix, Vector, mat_det, rref_span

BRUTE_FORCE_MAX_P = 3
PRUNED_MAX_P = 13


@dataclass(frozen=True)
class AutFamilyParams1:
    alpha2: FieldElement
    alpha3: FieldElement
    beta2: FieldElement
    beta3: FieldElement

    @classmethod
    def of(cls, field: Field, alpha2, alpha3, beta2, beta3) -> "AutFamilyParams1":
        return cls(field(alpha2), field(alpha3), field(beta2), field(beta3))

    @property
    def field(self) -> Field:
        return self.alpha2.field

    def det(self) -> FieldElement:
        return self.beta2 * (1 + self.alpha3) - self.alpha2 * self.beta3

    @property
    def admissible(self) -> bool:
        return bool(self.det())

    def as_tuple(self) -> tuple:
        return (self.alpha2, self.alpha3, self.beta2, self.beta3)

    def to_json(self) -> dict:
        return {k: getattr(self, k).to_json() for k in ("alpha2", "alpha3", "beta2", "beta3")}


@dataclass(frozen=True)
class AutFamilyParams2:
    """``beta`` and ``sigma`` are the two free entries of the L2 family.

    Other write-ups name them beta_1, beta_2 or beta_2, beta_3.
    """

    beta: FieldElement
    sigma: FieldElement

    @classmethod
    def of(cls, field: Field, beta, sigma) -> "AutFamilyParams2":
        return cls(field(beta), field(sigma))

    @property
    def field(self) -> Field:
        return self.beta.field

    def to_json(self) -> dict:
        return {"beta": self.beta.to_json(), "sigma": self.sigma.to_json()}


# ---------------------------------------------------------------------------
# closed-form families


def family1_matrix(p: AutFamilyParams1) -> SquareMatrix:
    if not p.admissible:
        raise SingularParams("beta2*(1+alpha3) - alpha2*beta3 must be nonzero")
    one, zero = p.field.one, p.field.zero
    return SquareMatrix.of(p.field, [
        [one, zero, zero],
        [p.alpha2, p.beta2, p.alpha2],
        [p.alpha3, p.beta3, 1 + p.alpha3],
    ])


def family1_params(m: SquareMatrix) -> AutFamilyParams1:
    """Read the L1-family parameters back off a matrix."""
    if m.n != 3:
        raise NotInFamily("L1 family matrices are 3x3")
    r = m.rows
    f = m.field
    if r[0] != (f.norm(1), f.norm(0), f.norm(0)) or r[1][0] != r[1][2] or r[2][2] != f.norm(1 + r[2][0]):
        raise NotInFamily(f"matrix does not match the L1 family template\n{m}")
    return AutFamilyParams1(m[1, 0], m[2, 0], m[1, 1], m[2, 1])


def in_family1(m: SquareMatrix) -> bool:
    try:
        family1_params(m)
    except NotInFamily:
        return False
    return True


def family2_matrix(p: AutFamilyParams2) -> SquareMatrix:
    if not p.beta:
        raise SingularParams("beta must be nonzero")
    one, zero = p.field.one, p.field.zero
    return SquareMatrix.of(p.field, [
        [one, zero, zero],
        [zero, p.beta, zero],
        [p.beta - 1, p.sigma, p.beta],
    ])


def family2_params(m: SquareMatrix) -> AutFamilyParams2:
    if m.n != 3:
        raise NotInFamily("L2 family matrices are 3x3")
    f = m.field
    r = m.rows
    b = r[1][1]
    expected = ((f.norm(1), f.norm(0), f.norm(0)), (f.norm(0), b, f.norm(0)))
    if r[:2] != expected or r[2][0] != f.norm(b - 1) or r[2][2] != b:
        raise NotInFamily(f"matrix does not match the L2 family template\n{m}")
    return AutFamilyParams2(m[1, 1], m[2, 1])


def _prime_field(field: Field) -> int:
    if field.modulus is None:
        raise InfiniteField("closed-form sets need a finite prime field")
    return field.modulus


def family1_set(field: Field) -> MatrixGroupSet:
    """All admissible L1-family matrices; (p^2 - 1)(p^2 - p) of them."""
    _prime_field(field)
    elts = enumerate_elements(field)
    mats = []
    for a2, a3, b2, b3 in itertools.product(elts, repeat=4):
        params = AutFamilyParams1(a2, a3, b2, b3)
        if params.admissible:
            mats.append(family1_matrix(params))
    return MatrixGroupSet.build(field, 3, mats, "ClosedFormFamily", check_invertible=False)


def family2_set(field: Field) -> MatrixGroupSet:
    _prime_field(field)
    elts = enumerate_elements(field)
    mats = [family2_matrix(AutFamilyParams2(b, s)) for b in elts[1:] for s in elts]
    return MatrixGroupSet.build(field, 3, mats, "ClosedFormFamily", check_invertible=False)


# ---------------------------------------------------------------------------
# the map to GL_2


def phi_L1(m: SquareMatrix) -> SquareMatrix:
    """L1-family matrix -> [[b2, a2], [b3, 1 + a3]]."""
    p = family1_params(m)
    return SquareMatrix.of(m.field, [[p.beta2, p.alpha2], [p.beta3, 1 + p.alpha3]])


def phi_L1_inverse(g: SquareMatrix) -> SquareMatrix:
    if g.n != 2:
        raise SingularInput("expected a 2x2 matrix")
    if not mat_det(g):
        raise SingularInput("matrix is not invertible")
    f = g.field
    s11, s12, s21, s22 = g[0, 0], g[0, 1], g[1, 0], g[1, 1]
    return SquareMatrix.of(f, [[f.one, f.zero, f.zero], [s12, s11, s12], [s22 - 1, s21, s22]])


def gl2_set(field: Field) -> MatrixGroupSet:
    """Every invertible 2x2 matrix, by direct enumeration of all p^4 candidates."""
    p = _prime_field(field)
    mats = []
    for a, b, c, d in itertools.product(range(p), repeat=4):
        if (a * d - b * c) % p:
            mats.append(SquareMatrix(field, ((a, b), (c, d))))
    return MatrixGroupSet.build(field, 2, mats, "BruteForce", check_invertible=False)


def unit_upper_triangular_2x2(field: Field) -> MatrixGroupSet:
    """Matrices [[1, s12], [0, s22]] with s22 != 0: the image of C2 under phi."""
    elts = enumerate_elements(field)
    one, zero = field.one, field.zero
    return MatrixGroupSet.build(field, 2, (SquareMatrix.of(field, [[one, a], [zero, d]])
                                           for a in elts for d in elts[1:]), "ClosedFormFamily")


# ---------------------------------------------------------------------------
# subgroups of Aut(L1)


def c1_matrix(beta2, beta3, field: Field) -> SquareMatrix:
    """Template of C_G(e1): [[1,0,0],[0,b2,0],[0,b3,1]]."""
    b2, b3 = field(beta2), field(beta3)
    return SquareMatrix.of(field, [[1, 0, 0], [0, b2, 0], [0, b3, 1]])


def c2_matrix(alpha2, alpha3, field: Field) -> SquareMatrix:
    """Template of C_G(e2): [[1,0,0],[a2,1,a2],[a3,0,1+a3]]."""
    a2, a3 = field(alpha2), field(alpha3)
    return SquareMatrix.of(field, [[1, 0, 0], [a2, 1, a2], [a3, 0, 1 + a3]])


def c1_template_set(field: Field) -> MatrixGroupSet:
    elts = enumerate_elements(field)
    return MatrixGroupSet.build(field, 3, (c1_matrix(b2, b3, field) for b2 in elts[1:] for b3 in elts),
                                "ClosedFormFamily")


def c2_template_set(field: Field) -> MatrixGroupSet:
    elts = enumerate_elements(field)
    return MatrixGroupSet.build(field, 3, (c2_matrix(a2, a3, field) for a2 in elts for a3 in elts if 1 + a3),
                                "ClosedFormFamily")


def c3_set(field: Field) -> MatrixGroupSet:
    """Unitriangular part of C1: b2 = 1."""
    return MatrixGroupSet.build(field, 3, (c1_matrix(1, b3, field) for b3 in enumerate_elements(field)),
                                "ClosedFormFamily")


def c4_set(field: Field) -> MatrixGroupSet:
    """Diagonal part of C1: b3 = 0."""
    return MatrixGroupSet.build(field, 3, (c1_matrix(b2, 0, field) for b2 in enumerate_elements(field)[1:]),
                                "ClosedFormFamily")


def centralizer_of_basis(L: Algebra, G: MatrixGroupSet, i: int, check_group: bool = True) -> MatrixGroupSet:
    """``{g in G : g e_i = e_i}`` for a 1-based basis label ``i``.

    ``check_group`` runs the exhaustive closure check on ``G`` first.
    """
    if check_group:
        require_group(G)
    e = Vector.basis(L.field, L.dim, i)
    return G.filter(lambda g: g.column(i - 1) == e)


def factor_c2c1(m: SquareMatrix) -> tuple[SquareMatrix, SquareMatrix]:
    """Split an L1 automorphism as ``c2 @ c1`` with c2 in C_G(e2), c1 in C_G(e1).

    Only defined when ``1 + alpha3 != 0``.
    """
    p = family1_params(m)
    d = 1 + p.alpha3
    if not d:
        raise NotFactorable("1 + alpha3 = 0; the C2.C1 formula divides by it")
    k3 = p.beta3 / d
    k2 = p.beta2 - p.alpha2 * p.beta3 / d
    return c2_matrix(p.alpha2, p.alpha3, m.field), c1_matrix(k2, k3, m.field)


# ---------------------------------------------------------------------------
# subgroups of Aut(L2)


def l2_c_matrix(sigma, field: Field) -> SquareMatrix:
    return family2_matrix(AutFamilyParams2.of(field, 1, sigma))


def l2_a_matrix(beta, field: Field) -> SquareMatrix:
    return family2_matrix(AutFamilyParams2.of(field, beta, 0))


def l2_decomposition(G: MatrixGroupSet) -> tuple[MatrixGroupSet, MatrixGroupSet]:
    """Split the L2 family group into C (beta = 1) and A (sigma = 0)."""
    params = {g: family2_params(g) for g in G}
    C = G.filter(lambda g: params[g].beta == 1, "ClosedFormFamily")
    A = G.filter(lambda g: not params[g].sigma, "ClosedFormFamily")
    return C, A


def l2_factor(m: SquareMatrix) -> tuple[SquareMatrix, SquareMatrix]:
    """``m = a @ c`` with a in A, c in C; c carries sigma / beta."""
    p = family2_params(m)
    return l2_a_matrix(p.beta, m.field), l2_c_matrix(p.sigma / p.beta, m.field)


# ---------------------------------------------------------------------------
# enumeration oracles


def _guard(L: Algebra, max_p: int) -> int:
    p = L.field.modulus
    if p is None:
        raise InfiniteField("enumeration needs a finite field")
    if p > max_p:
        raise FieldTooLarge(f"GF({p}) exceeds the enumeration limit p <= {max_p}")
    return p


def _brute_block(args) -> list[tuple]:
    L, first_cols = args
    f, n = L.field, L.dim
    p = f.modulus
    found = []
    rest = list(itertools.product(range(p), repeat=n * (n - 1)))
    for c0 in first_cols:
        for tail in rest:
            cols = [c0] + [tail[k * n:(k + 1) * n] for k in range(n - 1)]
            m = SquareMatrix(f, tuple(tuple(cols[j][i] for j in range(n)) for i in range(n)))
            if is_automorphism(L, m):
                found.append(m.rows)
    return found


def _run_blocks(func, blocks: list, workers: int) -> Iterator:
    if workers <= 1 or len(blocks) <= 1:
        for b in blocks:
            yield from func(b)
        return
    with ProcessPoolExecutor(max_workers=workers) as ex:
        for res in ex.map(func, blocks):
            yield from res


def _split(items: list, parts: int) -> list[list]:
    parts = max(1, min(parts, len(items)))
    size = -(-len(items) // parts)
    return [items[i:i + size] for i in range(0, len(items), size)]


def resolve_workers(workers: int | None) -> int:
    if workers is None:
        workers = int(os.environ.get("LEIBALG_WORKERS", "1") or 1)
    return max(1, workers)


def enumerate_aut_bruteforce(L: Algebra, workers: int | None = None) -> MatrixGroupSet:
    """Filter every n x n matrix over GF(p), p <= 3, by the automorphism test."""
    p = _guard(L, BRUTE_FORCE_MAX_P)
    workers = resolve_workers(workers)
    firsts = list(itertools.product(range(p), repeat=L.dim))
    blocks = [(L, chunk) for chunk in _split(firsts, workers * 4)]
    rows = _run_blocks(_brute_block, blocks, workers)
    return MatrixGroupSet.build(L.field, L.dim, (SquareMatrix(L.field, r) for r in rows), "BruteForce",
                                check_invertible=False)


def _det3(M: np.ndarray, p: int) -> np.ndarray:
    d = (M[:, 0, 0] * (M[:, 1, 1] * M[:, 2, 2] - M[:, 1, 2] * M[:, 2, 1])
         - M[:, 0, 1] * (M[:, 1, 0] * M[:, 2, 2] - M[:, 1, 2] * M[:, 2, 0])
         + M[:, 0, 2] * (M[:, 1, 0] * M[:, 2, 1] - M[:, 1, 1] * M[:, 2, 0]))
    return d % p


def _column_order(T: np.ndarray) -> list[int]:
    """Greedy order in which to fix columns so bracket checks fire early."""
    n = T.shape[0]
    support = {(i, j): set(np.nonzero(T[i, j])[0].tolist()) for i in range(n) for j in range(n)}
    order = [0]
    while len(order) < n:
        def gain(c):
            done = set(order) | {c}
            return sum(1 for (i, j), s in support.items() if {i, j} <= done and s <= done)
        rest = [c for c in range(n) if c not in order]
        order.append(max(rest, key=lambda c: (gain(c), -c)))
    return order


def _checkable(T: np.ndarray, assigned: set) -> list[tuple[int, int]]:
    n = T.shape[0]
    return [(i, j) for i in range(n) for j in range(n)
            if i in assigned and j in assigned and set(np.nonzero(T[i, j])[0].tolist()) <= assigned]


def _pruned_block(args) -> list[tuple]:
    """Extend partial matrices column by column, dropping failures as soon
    as both sides of some f([e_i, e_j]) = [f(e_i), f(e_j)] are determined.

    The surviving set is exactly the full filter over all p^7 candidates.
    """
    table, p, first_cols = args
    T = np.asarray(table, dtype=np.int64)
    n = T.shape[0]
    derived = np.array([(0, a, b) for a in range(p) for b in range(p)], dtype=np.int64)
    M = np.zeros((len(first_cols), n, n), dtype=np.int64)
    M[:, :, 0] = np.asarray(first_cols, dtype=np.int64)
    assigned = {0}
    checked: set = set()
    for col in _column_order(T)[1:]:
        k = len(M)
        M = np.repeat(M, len(derived), axis=0)
        M[:, :, col] = np.tile(derived, (k, 1))
        assigned.add(col)
        pairs = [pr for pr in _checkable(T, assigned) if pr not in checked]
        checked.update(pairs)
        keep = np.ones(len(M), dtype=bool)
        for i, j in pairs:
            lhs = M @ T[i, j]
            rhs = np.einsum("na,nb,abk->nk", M[:, :, i], M[:, :, j], T)
            keep &= ((lhs - rhs) % p == 0).all(axis=1)
        M = M[keep]
    M = M[_det3(M, p) != 0]
    return [tuple(map(tuple, m)) for m in M.tolist()]


def enumerate_aut_pruned(L: Algebra, workers: int | None = None) -> MatrixGroupSet:
    """Enumerate automorphisms with f(e2), f(e3) restricted to [L, L] = span{e2, e3}.

    The candidate space is p^3 choices for f(e1) times p^4 for the other
    two columns; it is searched column by column with early rejection.
    """
    p = _guard(L, PRUNED_MAX_P)
    if L.dim != 3:
        raise ShapeUnsupported("pruned enumeration handles 3-dimensional algebras only")
    f = L.field
    target = rref_span([Vector.basis(f, 3, 2), Vector.basis(f, 3, 3)])
    if invariants(L).derived != target:
        raise ShapeUnsupported("pruned enumeration needs [L, L] = span{e2, e3}")
    workers = resolve_workers(workers)
    table = [[list(cell) for cell in row] for row in L.table]
    firsts = list(itertools.product(range(p), repeat=3))
    blocks = [(table, p, chunk) for chunk in _split(firsts, workers * 4)]
    rows = _run_blocks(_pruned_block, blocks, workers)
    return MatrixGroupSet.build(f, 3, (SquareMatrix(f, r) for r in rows), "PrunedEnumeration",
                                check_invertible=False)
