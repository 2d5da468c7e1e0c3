"""Leibniz algebras given by structure constants.

``table[i][j]`` holds the coordinates of ``[e_{i+1}, e_{j+1}]``. The
identity checked is the left Leibniz identity
``[x,[y,z]] = [[x,y],z] + [y,[x,z]]``.

Basis labels in public results (violation triples, report text) count from
1 to match the usual ``e1, e2, e3`` notation; positions inside JSON tables
count from 0.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Sequence

from .errors import DimensionMismatch, FieldMismatch, MalformedSpec, NotLeibniz, ShapeMismatch, ZeroLambda
from .exactfield import Field, FieldElement, field_make
from .linalg import SquareMatrix, Subspace, Vector, mat_det, rref_span, solve_linear


@dataclass(frozen=True)
class Algebra:
    field: Field
    dim: int
    table: tuple  # table[i][j] is a raw coordinate tuple of length dim

    def bracket_basis(self, i: int, j: int) -> Vector:
        """``[e_i, e_j]`` with 1-based labels."""
        return Vector(self.field, self.table[i - 1][j - 1])

    def basis(self) -> list[Vector]:
        return [Vector.basis(self.field, self.dim, i) for i in range(1, self.dim + 1)]

    def to_json(self) -> dict:
        return {
            "field": self.field.descriptor,
            "dim": self.dim,
            "table": [[[self.field.raw_str(c) for c in cell] for cell in row] for row in self.table],
        }


def make_algebra(field: Field, dim: int, table: Sequence) -> Algebra:
    """Build an algebra from an ``n x n x n`` structure-constant table.

    Entries may be ints, Fractions, literal strings or field elements.
    The Leibniz identity is not checked here.
    """
    if dim < 1:
        raise ShapeMismatch("dimension must be positive")
    if len(table) != dim or any(len(row) != dim for row in table):
        raise ShapeMismatch(f"table must be {dim} x {dim} x {dim}")
    out = []
    for row in table:
        cells = []
        for cell in row:
            if len(cell) != dim:
                raise ShapeMismatch(f"structure-constant vector of length {len(cell)}, expected {dim}")
            if isinstance(cell, Vector) and cell.field != field:
                raise FieldMismatch(f"table entry over {cell.field}, algebra over {field}")
            cells.append(tuple(field.coerce_raw(c) for c in cell))
        out.append(tuple(cells))
    return Algebra(field, dim, tuple(out))


def _l1_like_table(lam: int | object) -> list:
    z = [0, 0, 0]
    return [
        [[0, 0, 1], [0, 1, lam], [0, 0, 1]],
        [z, z, z],
        [z, z, z],
    ]


def make_L1(field: Field) -> Algebra:
    """[e1,e1] = [e1,e3] = e3, [e1,e2] = e2, all other brackets zero."""
    return make_algebra(field, 3, _l1_like_table(0))


def make_L2(field: Field, lam) -> Algebra:
    """As L1 but with [e1,e2] = e2 + lam*e3 for a nonzero ``lam``."""
    lam = field(lam)
    if not lam:
        raise ZeroLambda("lambda must be nonzero")
    return make_algebra(field, 3, _l1_like_table(lam))


def bracket(L: Algebra, x: Vector, y: Vector) -> Vector:
    if len(x) != L.dim or len(y) != L.dim:
        raise DimensionMismatch(f"vectors must have length {L.dim}")
    if x.field != L.field or y.field != L.field:
        raise FieldMismatch("vector field differs from algebra field")
    f = L.field
    acc = [0] * L.dim
    for i, xi in enumerate(x.coords):
        if xi == 0:
            continue
        row = L.table[i]
        for j, yj in enumerate(y.coords):
            if yj == 0:
                continue
            c = xi * yj
            for k, t in enumerate(row[j]):
                if t:
                    acc[k] += c * t
    return Vector(f, tuple(f.norm(a) for a in acc))


@dataclass(frozen=True)
class LeibnizViolation:
    """First basis triple (1-based) where the identity fails."""

    triple: tuple[int, int, int]
    lhs: Vector
    rhs: Vector

    def __str__(self):
        i, j, k = self.triple
        return f"[e{i},[e{j},e{k}]] = {self.lhs} but [[e{i},e{j}],e{k}] + [e{j},[e{i},e{k}]] = {self.rhs}"


def check_leibniz(L: Algebra) -> LeibnizViolation | None:
    """Return ``None`` if the identity holds, else the lexicographically first violation."""
    e = L.basis()
    n = L.dim
    for i, j, k in itertools.product(range(n), repeat=3):
        x, y, z = e[i], e[j], e[k]
        lhs = bracket(L, x, bracket(L, y, z))
        rhs = bracket(L, bracket(L, x, y), z) + bracket(L, y, bracket(L, x, z))
        if lhs != rhs:
            return LeibnizViolation((i + 1, j + 1, k + 1), lhs, rhs)
    return None


def is_leibniz(L: Algebra) -> bool:
    return check_leibniz(L) is None


@dataclass(frozen=True)
class InvariantReport:
    derived: Subspace
    leib: Subspace
    left_center: Subspace
    right_center: Subspace
    center: Subspace

    def to_json(self) -> dict:
        return {
            name: {"dim": s.dim, "basis": s.to_json(), "text": s.describe()}
            for name, s in (
                ("derived", self.derived),
                ("leib", self.leib),
                ("left_center", self.left_center),
                ("right_center", self.right_center),
                ("center", self.center),
            )
        }


def _annihilator(L: Algebra, side: str) -> Subspace:
    # x with [x, e_j] = 0 for all j (left) or [e_j, x] = 0 (right); linear in x
    f, n = L.field, L.dim
    rows = []
    for j in range(n):
        for k in range(n):
            if side == "left":
                rows.append([L.table[i][j][k] for i in range(n)])
            else:
                rows.append([L.table[j][i][k] for i in range(n)])
    return solve_linear(f, rows, Vector.zero(f, len(rows)), ncols=n).nullspace


def invariants(L: Algebra) -> InvariantReport:
    if not is_leibniz(L):
        raise NotLeibniz("invariants are only defined for Leibniz algebras")
    f, n = L.field, L.dim
    e = L.basis()
    derived = rref_span([L.bracket_basis(i, j) for i in range(1, n + 1) for j in range(1, n + 1)], n, f)
    squares = [bracket(L, v, v) for v in e]
    squares += [bracket(L, e[i] + e[j], e[i] + e[j]) for i in range(n) for j in range(i + 1, n)]
    leib = rref_span(squares, n, f)
    left = _annihilator(L, "left")
    right = _annihilator(L, "right")
    center = left & right
    report = InvariantReport(derived, leib, left, right, center)
    assert leib.issubset(derived)
    return report


@dataclass(frozen=True)
class AutomorphismDefect:
    """Why a matrix is not an automorphism: singular, or a failing basis pair (1-based)."""

    pair: tuple[int, int] | None
    image_of_bracket: Vector | None = None
    bracket_of_images: Vector | None = None

    @property
    def singular(self) -> bool:
        return self.pair is None


def automorphism_defect(L: Algebra, f: SquareMatrix) -> AutomorphismDefect | None:
    if f.field != L.field:
        raise FieldMismatch("matrix and algebra over different fields")
    if f.n != L.dim:
        raise DimensionMismatch(f"{f.n}x{f.n} matrix for a {L.dim}-dimensional algebra")
    if not mat_det(f):
        return AutomorphismDefect(None)
    images = [f.column(j) for j in range(L.dim)]
    for i in range(L.dim):
        for j in range(L.dim):
            left = f.apply(Vector(L.field, L.table[i][j]))
            right = bracket(L, images[i], images[j])
            if left != right:
                return AutomorphismDefect((i + 1, j + 1), left, right)
    return None


def is_automorphism(L: Algebra, f: SquareMatrix) -> bool:
    return automorphism_defect(L, f) is None


def algebra_from_json(data: dict | str) -> Algebra:
    if isinstance(data, str):
        data = json.loads(data)
    try:
        field = field_make(data["field"])
        dim = int(data["dim"])
        table = data["table"]
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedSpec(f"bad algebra document: {exc}") from exc
    if not isinstance(table, list):
        raise ShapeMismatch("table must be a nested array")
    return make_algebra(field, dim, [[[_literal(c) for c in cell] for cell in row] for row in table])


def _literal(c):
    if isinstance(c, (int, str)) and not isinstance(c, bool):
        return c
    raise MalformedSpec(f"structure constant {c!r} must be an integer or a string literal")

