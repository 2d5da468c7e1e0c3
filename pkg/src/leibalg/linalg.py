"""Dense exact linear algebra over a :class:`~leibalg.exactfield.Field`.

Matrix convention: column ``j`` holds the coordinates of the image of
basis vector ``j``. Applying a map to a coordinate vector is
``matrix @ column``, and ``mat_mul(mf, mg)`` is the matrix of ``f o g``.

All containers keep canonical raw values (ints mod p, or Fractions) and
compare structurally, so two subspaces are equal iff their RREF bases are.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from operator import mul
from typing import Iterable, Sequence

from .errors import DimensionMismatch, EmptyAmbient, FieldMismatch, SingularMatrix
from .exactfield import Field, FieldElement, Raw


def _check_field(a: Field, b: Field) -> None:
    if a != b:
        raise FieldMismatch(f"{a} vs {b}")


@dataclass(frozen=True)
class Vector:
    field: Field
    coords: tuple

    @classmethod
    def of(cls, field: Field, values: Iterable) -> "Vector":
        return cls(field, tuple(field.coerce_raw(v) for v in values))

    @classmethod
    def zero(cls, field: Field, n: int) -> "Vector":
        return cls(field, (field.norm(0),) * n)

    @classmethod
    def basis(cls, field: Field, n: int, i: int) -> "Vector":
        """Standard basis vector e_i, ``i`` counted from 1."""
        if not 1 <= i <= n:
            raise DimensionMismatch(f"basis index {i} outside 1..{n}")
        return cls(field, tuple(field.norm(int(k == i - 1)) for k in range(n)))

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i: int) -> FieldElement:
        return FieldElement(self.field, self.coords[i])

    def __iter__(self):
        return (FieldElement(self.field, c) for c in self.coords)

    def _same(self, other: "Vector") -> None:
        _check_field(self.field, other.field)
        if len(self) != len(other):
            raise DimensionMismatch(f"vector lengths {len(self)} and {len(other)}")

    def __add__(self, other: "Vector") -> "Vector":
        self._same(other)
        f = self.field
        return Vector(f, tuple(f.norm(a + b) for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Vector") -> "Vector":
        self._same(other)
        f = self.field
        return Vector(f, tuple(f.norm(a - b) for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "Vector":
        f = self.field
        return Vector(f, tuple(f.norm(-a) for a in self.coords))

    def scale(self, c) -> "Vector":
        f = self.field
        c = f.coerce_raw(c)
        return Vector(f, tuple(f.norm(c * a) for a in self.coords))

    __rmul__ = scale

    def is_zero(self) -> bool:
        return not any(self.coords)

    def to_json(self) -> list[str]:
        return [self.field.raw_str(c) for c in self.coords]

    def __str__(self):
        return "(" + ", ".join(str(x) for x in self) + ")"


@dataclass(frozen=True)
class SquareMatrix:
    """n x n matrix; ``rows[i][j]`` is the e_i-coordinate of the image of e_j."""

    field: Field
    rows: tuple

    def __post_init__(self):
        n = len(self.rows)
        if n < 1 or any(len(r) != n for r in self.rows):
            raise DimensionMismatch("a square matrix needs n >= 1 rows of length n")

    @classmethod
    def _trusted(cls, field: Field, rows: tuple) -> "SquareMatrix":
        # skips validation; only for results of internal arithmetic
        m = object.__new__(cls)
        object.__setattr__(m, "field", field)
        object.__setattr__(m, "rows", rows)
        return m

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.field.modulus, self.rows))
            object.__setattr__(self, "_hash", h)
        return h

    def __eq__(self, other):
        if not isinstance(other, SquareMatrix):
            return NotImplemented
        return self.rows == other.rows and self.field == other.field

    @classmethod
    def of(cls, field: Field, rows: Iterable[Iterable]) -> "SquareMatrix":
        return cls(field, tuple(tuple(field.coerce_raw(v) for v in r) for r in rows))

    @classmethod
    def identity(cls, field: Field, n: int) -> "SquareMatrix":
        return cls(field, tuple(tuple(field.norm(int(i == j)) for j in range(n)) for i in range(n)))

    @classmethod
    def from_columns(cls, field: Field, columns: Sequence[Vector]) -> "SquareMatrix":
        n = len(columns)
        return cls(field, tuple(tuple(columns[j].coords[i] for j in range(n)) for i in range(n)))

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij: tuple[int, int]) -> FieldElement:
        i, j = ij
        return FieldElement(self.field, self.rows[i][j])

    def column(self, j: int) -> Vector:
        return Vector(self.field, tuple(r[j] for r in self.rows))

    def apply(self, v: Vector) -> Vector:
        _check_field(self.field, v.field)
        if len(v) != self.n:
            raise DimensionMismatch(f"{self.n}x{self.n} matrix applied to length-{len(v)} vector")
        f = self.field
        return Vector(f, tuple(f.norm(sum(a * b for a, b in zip(r, v.coords))) for r in self.rows))

    def __matmul__(self, other):
        if isinstance(other, SquareMatrix):
            return mat_mul(self, other)
        if isinstance(other, Vector):
            return self.apply(other)
        return NotImplemented

    def sort_key(self) -> tuple:
        return tuple(x for r in self.rows for x in r)

    def __lt__(self, other: "SquareMatrix") -> bool:
        return self.sort_key() < other.sort_key()

    def is_identity(self) -> bool:
        return all(x == (i == j) for i, r in enumerate(self.rows) for j, x in enumerate(r))

    def to_json(self) -> list[list[str]]:
        return [[self.field.raw_str(x) for x in r] for r in self.rows]

    def __str__(self):
        cells = [[str(FieldElement(self.field, x)) for x in r] for r in self.rows]
        w = max(len(c) for r in cells for c in r)
        return "\n".join("[" + " ".join(c.rjust(w) for c in r) + "]" for r in cells)


def mat_mul(a: SquareMatrix, b: SquareMatrix) -> SquareMatrix:
    _check_field(a.field, b.field)
    if a.n != b.n:
        raise DimensionMismatch(f"cannot multiply {a.n}x{a.n} by {b.n}x{b.n}")
    cols = tuple(zip(*b.rows))
    p = a.field.modulus
    if p is None:
        rows = tuple(tuple(Fraction(sum(map(mul, r, c))) for c in cols) for r in a.rows)
    else:
        rows = tuple(tuple(sum(map(mul, r, c)) % p for c in cols) for r in a.rows)
    return SquareMatrix._trusted(a.field, rows)


def _eliminate(field: Field, rows: list[list[Raw]], ncols: int) -> tuple[list[list[Raw]], list[int], int]:
    """In-place reduction to RREF over the first ``ncols`` columns.

    Returns the rows, the pivot columns and the number of row swaps.
    """
    pivots: list[int] = []
    swaps = 0
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
            swaps += 1
        inv = field.inv_raw(rows[r][c])
        rows[r] = [field.norm(x * inv) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                k = rows[i][c]
                rows[i] = [field.norm(x - k * y) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots, swaps


def mat_det(a: SquareMatrix) -> FieldElement:
    """Determinant by Gaussian elimination."""
    f = a.field
    rows = [list(r) for r in a.rows]
    n = a.n
    det = f.norm(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if piv is None:
            return f.zero
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            det = -det
        det = det * rows[c][c]
        inv = f.inv_raw(rows[c][c])
        for i in range(c + 1, n):
            if rows[i][c] != 0:
                k = f.norm(rows[i][c] * inv)
                rows[i] = [f.norm(x - k * y) for x, y in zip(rows[i], rows[c])]
    return FieldElement(f, f.norm(det))


def mat_inv(a: SquareMatrix) -> SquareMatrix:
    f = a.field
    n = a.n
    aug = [list(r) + [f.norm(int(i == j)) for j in range(n)] for i, r in enumerate(a.rows)]
    aug, pivots, _ = _eliminate(f, aug, n)
    if len(pivots) < n:
        raise SingularMatrix("matrix is not invertible")
    return SquareMatrix(f, tuple(tuple(r[n:]) for r in aug))


@dataclass(frozen=True)
class Subspace:
    """Subspace of F^n stored by its unique RREF basis."""

    field: Field
    ambient_dim: int
    basis: tuple  # tuple of raw coordinate tuples

    @property
    def dim(self) -> int:
        return len(self.basis)

    def vectors(self) -> list[Vector]:
        return [Vector(self.field, b) for b in self.basis]

    def contains(self, v: Vector) -> bool:
        return rref_span(self.vectors() + [v], self.ambient_dim, self.field).dim == self.dim

    def __contains__(self, v: Vector) -> bool:
        return self.contains(v)

    def issubset(self, other: "Subspace") -> bool:
        return all(other.contains(v) for v in self.vectors())

    def __add__(self, other: "Subspace") -> "Subspace":
        return rref_span(self.vectors() + other.vectors(), self.ambient_dim, self.field)

    def annihilator_rows(self) -> list[list[Raw]]:
        """Rows ``a`` with ``a . v = 0`` exactly for ``v`` in this subspace."""
        sol = solve_linear(self.field, [list(b) for b in self.basis], Vector.zero(self.field, self.dim),
                           ncols=self.ambient_dim)
        return [list(b) for b in sol.nullspace.basis]

    def intersect(self, other: "Subspace") -> "Subspace":
        _check_field(self.field, other.field)
        if self.ambient_dim != other.ambient_dim:
            raise DimensionMismatch("subspaces of different ambient spaces")
        rows = self.annihilator_rows() + other.annihilator_rows()
        return solve_linear(self.field, rows, Vector.zero(self.field, len(rows)),
                            ncols=self.ambient_dim).nullspace

    def __and__(self, other: "Subspace") -> "Subspace":
        return self.intersect(other)

    def image(self, m: SquareMatrix) -> "Subspace":
        return rref_span([m.apply(v) for v in self.vectors()], self.ambient_dim, self.field)

    def to_json(self) -> list[list[str]]:
        return [[self.field.raw_str(x) for x in b] for b in self.basis]

    def describe(self) -> str:
        """Render like ``span{e2, e3}`` or ``span{e1 + 4e3}``; ``<0>`` for zero."""
        if not self.basis:
            return "<0>"
        return "span{" + ", ".join(format_vector(Vector(self.field, b)) for b in self.basis) + "}"


def format_vector(v: Vector) -> str:
    terms = []
    for i, c in enumerate(v):
        if not c:
            continue
        s = str(c)
        if s == "1":
            s = ""
        elif s == "-1":
            s = "-"
        elif s.startswith("-") or "/" in s:
            s = f"({s})"
        terms.append(f"{s}e{i + 1}")
    if not terms:
        return "0"
    out = terms[0]
    for t in terms[1:]:
        out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
    return out


def rref_span(vectors: Sequence[Vector], ambient: int | None = None, field: Field | None = None) -> Subspace:
    """Canonical subspace spanned by ``vectors``."""
    if not vectors:
        if ambient is None or field is None:
            raise EmptyAmbient("empty span needs an explicit ambient dimension and field")
        return Subspace(field, ambient, ())
    f = vectors[0].field
    n = len(vectors[0])
    if field is not None:
        _check_field(field, f)
    if ambient is not None and ambient != n:
        raise DimensionMismatch(f"vectors of length {n} in ambient dimension {ambient}")
    for v in vectors:
        _check_field(f, v.field)
        if len(v) != n:
            raise DimensionMismatch("vectors of different lengths")
    rows, pivots, _ = _eliminate(f, [list(v.coords) for v in vectors], n)
    return Subspace(f, n, tuple(tuple(r) for r in rows[: len(pivots)]))


@dataclass(frozen=True)
class LinearSolution:
    """Solution set ``particular + nullspace``; ``particular`` is None if inconsistent."""

    particular: Vector | None
    nullspace: Subspace

    @property
    def consistent(self) -> bool:
        return self.particular is not None


def solve_linear(field: Field, A: Sequence[Sequence], b: Vector, ncols: int | None = None) -> LinearSolution:
    """Solve ``A x = b`` for a possibly rectangular ``A`` (list of rows).

    ``ncols`` is required when ``A`` has no rows.
    """
    m = len(A)
    if ncols is None:
        if m == 0:
            raise DimensionMismatch("ncols needed for a matrix with no rows")
        ncols = len(A[0])
    if any(len(r) != ncols for r in A):
        raise DimensionMismatch("ragged coefficient matrix")
    if len(b) != m:
        raise DimensionMismatch(f"{m} equations but right-hand side of length {len(b)}")
    _check_field(field, b.field)
    aug = [[field.coerce_raw(x) for x in r] + [b.coords[i]] for i, r in enumerate(A)]
    aug, pivots, _ = _eliminate(field, aug, ncols)
    rank = len(pivots)
    # a nonzero right-hand side in a zero row means no solution
    inconsistent = any(r[ncols] != 0 for r in aug[rank:])
    particular = None
    if not inconsistent:
        x = [field.norm(0)] * ncols
        for r, c in zip(aug, pivots):
            x[c] = r[ncols]
        particular = Vector(field, tuple(x))
    free = [c for c in range(ncols) if c not in pivots]
    kernel = []
    for fc in free:
        v = [field.norm(0)] * ncols
        v[fc] = field.norm(1)
        for r, c in zip(aug, pivots):
            v[c] = field.norm(-r[fc])
        kernel.append(Vector(field, tuple(v)))
    return LinearSolution(particular, rref_span(kernel, ncols, field))
