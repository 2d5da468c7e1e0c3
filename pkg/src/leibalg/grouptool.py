"""Exhaustive analysis of small finite matrix groups.

Everything here works on explicit element lists: closure, inverses,
commutativity, normality, set products, decomposition certificates,
cyclicity and homomorphism checks. Witnesses are always the
lexicographically first failure in canonical element order, so results
do not depend on iteration details.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .errors import FieldMismatch, NotAGroup, NotSubset, PartialMap, SingularMatrix
from .exactfield import Field
from .linalg import SquareMatrix, mat_det, mat_inv, mat_mul

PROVENANCES = ("BruteForce", "PrunedEnumeration", "ClosedFormFamily", "Derived")


@dataclass(frozen=True)
class MatrixGroupSet:
    """Canonically ordered, duplicate-free set of invertible matrices.

    Use :meth:`build`; it sorts, deduplicates and validates.
    """

    field: Field
    n: int
    elements: tuple
    provenance: str = "Derived"
    _lookup: frozenset = dc_field(default=frozenset(), repr=False, compare=False)

    @classmethod
    def build(cls, field: Field, n: int, elements: Iterable[SquareMatrix], provenance: str = "Derived",
              check_invertible: bool = True) -> "MatrixGroupSet":
        if provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {provenance!r}")
        uniq = set()
        for m in elements:
            if m.field != field:
                raise FieldMismatch(f"element over {m.field} in a set over {field}")
            if m.n != n:
                raise ValueError(f"{m.n}x{m.n} element in a set of {n}x{n} matrices")
            uniq.add(m)
        if check_invertible:
            for m in uniq:
                if not mat_det(m):
                    raise SingularMatrix(f"singular element\n{m}")
        ordered = tuple(sorted(uniq, key=SquareMatrix.sort_key))
        return cls(field, n, ordered, provenance, frozenset(ordered))

    def __post_init__(self):
        if len(self._lookup) != len(self.elements):
            object.__setattr__(self, "_lookup", frozenset(self.elements))

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, m) -> bool:
        return m in self._lookup

    @property
    def order(self) -> int:
        return len(self.elements)

    def same_elements(self, other: "MatrixGroupSet") -> bool:
        return self.field == other.field and self.n == other.n and self.elements == other.elements

    def issubset(self, other: "MatrixGroupSet") -> bool:
        return self._lookup <= other._lookup

    def identity(self) -> SquareMatrix:
        return SquareMatrix.identity(self.field, self.n)

    def filter(self, pred: Callable[[SquareMatrix], bool], provenance: str = "Derived") -> "MatrixGroupSet":
        return MatrixGroupSet.build(self.field, self.n, [m for m in self.elements if pred(m)], provenance,
                                    check_invertible=False)

    def to_json(self, algebra: str | None = None) -> dict:
        return {
            "field": self.field.descriptor,
            "algebra": algebra,
            "provenance": self.provenance,
            "order": self.order,
            "elements": [m.to_json() for m in self.elements],
        }


def _same_ambient(a: MatrixGroupSet, b: MatrixGroupSet) -> None:
    if a.field != b.field:
        raise FieldMismatch(f"{a.field} vs {b.field}")
    if a.n != b.n:
        raise ValueError(f"{a.n}x{a.n} vs {b.n}x{b.n} matrices")


@dataclass(frozen=True)
class Witness:
    reason: str
    elements: tuple

    def to_json(self) -> dict:
        return {"reason": self.reason, "elements": [m.to_json() for m in self.elements]}


@dataclass(frozen=True)
class GroupReport:
    order: int
    is_group: bool
    abelian: bool
    group_failure: Witness | None = None
    abelian_failure: Witness | None = None
    generator_witness: SquareMatrix | None = None

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "is_group": self.is_group,
            "abelian": self.abelian,
            "group_failure": self.group_failure.to_json() if self.group_failure else None,
            "abelian_failure": self.abelian_failure.to_json() if self.abelian_failure else None,
            "generator_witness": self.generator_witness.to_json() if self.generator_witness else None,
        }


def _group_failure(S: MatrixGroupSet) -> Witness | None:
    if S.identity() not in S:
        return Witness("no_identity", ())
    for a in S:
        for b in S:
            if mat_mul(a, b) not in S:
                return Witness("not_closed", (a, b))
    for a in S:
        if mat_inv(a) not in S:
            return Witness("no_inverse", (a,))
    return None


def _commute_failure(S: MatrixGroupSet) -> Witness | None:
    elems = S.elements
    for i, a in enumerate(elems):
        for b in elems[i + 1:]:
            if mat_mul(a, b) != mat_mul(b, a):
                return Witness("not_commuting", (a, b))
    return None


def analyze(S: MatrixGroupSet) -> GroupReport:
    """Exhaustive group / abelian check with deterministic witnesses."""
    if not len(S):
        raise ValueError("cannot analyze an empty set")
    gf = _group_failure(S)
    cf = _commute_failure(S)
    return GroupReport(len(S), gf is None, cf is None, gf, cf)


def require_group(S: MatrixGroupSet) -> None:
    failure = _group_failure(S) if len(S) else Witness("empty", ())
    if failure is not None:
        raise NotAGroup(f"set of order {len(S)} is not a group ({failure.reason})")


def set_product(A: MatrixGroupSet, B: MatrixGroupSet) -> MatrixGroupSet:
    """``{a b : a in A, b in B}``."""
    _same_ambient(A, B)
    return MatrixGroupSet.build(A.field, A.n, (mat_mul(a, b) for a in A for b in B), "Derived",
                                check_invertible=False)


@dataclass(frozen=True)
class NormalityResult:
    normal: bool
    witness: tuple | None = None  # (g, n) with g n g^-1 outside N

    def __bool__(self):
        return self.normal


def is_normal(N: MatrixGroupSet, G: MatrixGroupSet) -> NormalityResult:
    _same_ambient(N, G)
    if not N.issubset(G):
        raise NotSubset("N is not contained in G")
    for g in G:
        gi = mat_inv(g)
        for x in N:
            if mat_mul(mat_mul(g, x), gi) not in N:
                return NormalityResult(False, (g, x))
    return NormalityResult(True)


DECOMPOSITION_KINDS = ("Semidirect", "Direct", "SetProduct")


@dataclass(frozen=True)
class DecompositionCertificate:
    kind: str
    N: MatrixGroupSet
    H: MatrixGroupSet
    N_normal: bool
    H_subgroup: bool
    trivial_intersection: bool
    product_covers: bool
    covered: int
    total: int
    H_normal: bool | None = None
    normality_witness: tuple | None = None

    @property
    def coverage(self) -> Fraction:
        return Fraction(self.covered, self.total)

    @property
    def coverage_text(self) -> str:
        """Unreduced ``covered/|G|``."""
        return f"{self.covered}/{self.total}"

    @property
    def certified(self) -> bool:
        if self.kind == "SetProduct":
            return self.product_covers
        core = self.N_normal and self.H_subgroup and self.trivial_intersection and self.product_covers
        if self.kind == "Direct":
            return core and bool(self.H_normal)
        return core

    def to_json(self) -> dict:
        checks = {
            "N_normal": self.N_normal,
            "H_subgroup": self.H_subgroup,
            "trivial_intersection": self.trivial_intersection,
            "product_covers": self.product_covers,
        }
        if self.kind == "Direct":
            checks["H_normal"] = self.H_normal
        return {
            "kind": self.kind,
            "order_N": self.N.order,
            "order_H": self.H.order,
            "checks": checks,
            "coverage": self.coverage_text,
            "certified": self.certified,
        }


def _is_subgroup(S: MatrixGroupSet) -> bool:
    return _group_failure(S) is None


def certify_decomposition(kind: str, N: MatrixGroupSet, H: MatrixGroupSet, G: MatrixGroupSet) -> DecompositionCertificate:
    """Evaluate every clause of ``G = N . H`` exhaustively.

    Coverage counts the elements of ``G`` reached as ``n h``.
    """
    if kind not in DECOMPOSITION_KINDS:
        raise ValueError(f"unknown decomposition kind {kind!r}")
    _same_ambient(N, G)
    _same_ambient(H, G)
    if not N.issubset(G) or not H.issubset(G):
        raise NotSubset("N and H must lie inside G")
    n_normal = _is_subgroup(N) and is_normal(N, G)
    h_sub = _is_subgroup(H)
    common = [m for m in N if m in H]
    trivial = len(common) == 1 and common[0].is_identity()
    prod = set_product(N, H)
    covered = sum(1 for m in prod if m in G)
    h_normal = None
    witness = n_normal.witness if isinstance(n_normal, NormalityResult) else None
    if kind == "Direct":
        hn = is_normal(H, G) if h_sub else NormalityResult(False)
        h_normal = hn.normal
        witness = witness or hn.witness
    return DecompositionCertificate(kind, N, H, bool(n_normal), h_sub, trivial, covered == len(G), covered,
                                    len(G), h_normal, witness)


def element_order(g: SquareMatrix, cap: int) -> int | None:
    """Smallest k <= cap with g^k = 1, or None."""
    x = g
    for k in range(1, cap + 1):
        if x.is_identity():
            return k
        x = mat_mul(x, g)
    return None


@dataclass(frozen=True)
class CyclicCheck:
    cyclic: bool
    generator: SquareMatrix | None = None

    def __bool__(self):
        return self.cyclic

    def to_json(self) -> dict:
        return {"cyclic": self.cyclic, "generator": self.generator.to_json() if self.generator else None}


def iso_to_cyclic(S: MatrixGroupSet, n: int) -> CyclicCheck:
    """Whether ``S`` is cyclic of order ``n``; the generator is the first one found.

    Over GF(p) the additive group (order p) and the multiplicative group
    (order p-1) are both cyclic, so this is the isomorphism test for them.
    """
    require_group(S)
    if len(S) != n:
        return CyclicCheck(False)
    for g in S:
        if element_order(g, n) == n:
            return CyclicCheck(True, g)
    return CyclicCheck(False)


@dataclass(frozen=True)
class HomCheck:
    homomorphism: bool
    injective: bool
    surjective: bool
    kernel_order: int
    failure: tuple | None = None  # (a, b) with map(ab) != map(a) map(b)

    @property
    def isomorphism(self) -> bool:
        return self.homomorphism and self.injective and self.surjective

    def to_json(self) -> dict:
        return {
            "homomorphism": self.homomorphism,
            "injective": self.injective,
            "surjective": self.surjective,
            "kernel_order": self.kernel_order,
            "failure": [m.to_json() for m in self.failure] if self.failure else None,
        }


def hom_check(domain: MatrixGroupSet, mapping: Mapping | Callable, codomain: MatrixGroupSet,
              codomain_mul: Callable = mat_mul) -> HomCheck:
    """Exhaustively test a map between two explicit matrix groups.

    ``mapping`` is either a dict covering the domain or a callable.
    Injectivity is checked on the image table directly; the kernel order
    is reported alongside.
    """
    table = {}
    for a in domain:
        if callable(mapping):
            table[a] = mapping(a)
        else:
            if a not in mapping:
                raise PartialMap("mapping does not cover the domain")
            table[a] = mapping[a]
    hom = True
    failure = None
    for a in domain:
        for b in domain:
            ab = mat_mul(a, b)
            if ab not in table:
                raise NotAGroup("domain is not closed under multiplication")
            if table[ab] != codomain_mul(table[a], table[b]):
                hom, failure = False, (a, b)
                break
        if not hom:
            break
    images = set(table.values())
    ident = SquareMatrix.identity(codomain.field, codomain.n)
    kernel = sum(1 for v in table.values() if v == ident)
    injective = len(images) == len(domain)
    surjective = images == set(codomain.elements)
    return HomCheck(hom, injective, surjective, kernel, failure)
