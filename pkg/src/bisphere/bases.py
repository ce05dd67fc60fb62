"""Ordered monomial bases for the truncated polynomial spaces.

Three families:

    SphereQuotient(D)  canonical sphere representatives s1^a s2^b s3^c with
                       c in {0,1} and a+b+c <= D, dimension (D+1)^2,
                       ordered by parity sector so reflection-even operators
                       are visibly block diagonal
    FullPoly3(D)       all monomials of total degree <= D, degree-graded,
                       dimension binomial(D+3, 3)
    Poly1(D)           powers of s1 up to D, dimension D+1

Each basis turns a regular polynomial into an exact coefficient vector.
FullPoly3 and Poly1 tolerate image terms above the top degree by dropping
them and reporting the truncation, which the padded-window protocol in the
verification suites relies on; SphereQuotient never truncates, a symmetry
operator that leaves it is an error.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import List, Tuple

from .laurent import LaurentPoly3, NonRegularError, reduce_sphere

Exponents = Tuple[int, int, int]


class BasisRangeError(ValueError):
    """A polynomial contained a term no basis element can carry."""


class Basis:
    """Common interface: an ordered list of monomial exponent triples."""

    name: str
    degree_cap: int
    elements: List[Exponents]

    def __init__(self):
        self.index = {e: i for i, e in enumerate(self.elements)}
        self.degrees = [a + b + c for (a, b, c) in self.elements]

    @property
    def size(self) -> int:
        return len(self.elements)

    def poly(self, i: int) -> LaurentPoly3:
        return LaurentPoly3.monomial(*self.elements[i])

    def canonicalize(self, p: LaurentPoly3) -> LaurentPoly3:
        if not p.is_regular():
            raise NonRegularError(f"image is not regular on {self.name}")
        return p

    def vector(self, p: LaurentPoly3) -> Tuple[List[Fraction], bool]:
        """Coefficient vector of p, plus whether above-degree terms dropped."""
        vec = [Fraction(0)] * self.size
        truncated = False
        for expo, coef in p.terms():
            i = self.index.get(expo)
            if i is not None:
                vec[i] = coef
            elif sum(expo) > self.degree_cap and self._shape_ok(expo):
                truncated = True
            else:
                raise BasisRangeError(f"term s^{expo} does not live on {self.name}")
        return vec, truncated

    def _shape_ok(self, expo: Exponents) -> bool:
        return True

    def __repr__(self) -> str:
        return self.name


class SphereQuotient(Basis):
    """Canonical monomials on the sphere, grouped by reflection parity.

    Sector order: (a mod 2, b mod 2, c) ascending, inside a sector by total
    degree then lexicographic exponents.  Size (D+1)^2.
    """

    def __init__(self, degree: int):
        if degree < 0:
            raise ValueError("degree must be nonnegative")
        self.degree_cap = degree
        self.name = f"SphereQuotient({degree})"
        elems = [
            (a, b, c)
            for c in (0, 1)
            for a in range(degree + 1)
            for b in range(degree + 1 - a)
            if a + b + c <= degree
        ]
        elems.sort(key=lambda e: (e[0] % 2, e[1] % 2, e[2], sum(e), e))
        self.elements = elems
        super().__init__()

    def canonicalize(self, p: LaurentPoly3) -> LaurentPoly3:
        if not p.is_regular():
            raise NonRegularError(f"image is not regular on {self.name}")
        return reduce_sphere(p)

    def vector(self, p: LaurentPoly3) -> Tuple[List[Fraction], bool]:
        vec, truncated = super().vector(p)
        if truncated:
            raise BasisRangeError(f"image leaves {self.name}")
        return vec, False

    def _shape_ok(self, expo: Exponents) -> bool:
        return expo[2] in (0, 1)

    def sector(self, i: int) -> Tuple[int, int, int]:
        a, b, c = self.elements[i]
        return (a % 2, b % 2, c)

    def sector_indices(self) -> dict:
        out: dict = {}
        for i in range(self.size):
            out.setdefault(self.sector(i), []).append(i)
        return out


class FullPoly3(Basis):
    """All monomials of total degree <= D, degree-graded order."""

    def __init__(self, degree: int):
        if degree < 0:
            raise ValueError("degree must be nonnegative")
        self.degree_cap = degree
        self.name = f"FullPoly3({degree})"
        elems = [
            (a, b, c)
            for a in range(degree + 1)
            for b in range(degree + 1 - a)
            for c in range(degree + 1 - a - b)
        ]
        elems.sort(key=lambda e: (sum(e), e))
        self.elements = elems
        super().__init__()
        assert self.size == comb(degree + 3, 3)


class Poly1(Basis):
    """Polynomials in s1 alone, degree <= D."""

    def __init__(self, degree: int):
        if degree < 0:
            raise ValueError("degree must be nonnegative")
        self.degree_cap = degree
        self.name = f"Poly1({degree})"
        self.elements = [(a, 0, 0) for a in range(degree + 1)]
        super().__init__()

    def _shape_ok(self, expo: Exponents) -> bool:
        return expo[1] == 0 and expo[2] == 0
