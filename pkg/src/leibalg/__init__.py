"""Leibniz algebras over exact fields and the automorphism groups of L1 and L2(lambda)."""

from .exactfield import Field, FieldElement, field_make
from .leibniz import Algebra, make_algebra, make_L1, make_L2

__all__ = ["Field", "FieldElement", "field_make", "Algebra", "make_algebra", "make_L1", "make_L2"]
