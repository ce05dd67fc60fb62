from fractions import Fraction
from math import comb

import pytest

from bisphere.bases import BasisRangeError, FullPoly3, Poly1, SphereQuotient
from bisphere.laurent import LaurentPoly3, NonRegularError


def mono(a, b, c, coef=1):
    return LaurentPoly3.monomial(a, b, c, coef)


class TestSphereQuotient:
    @pytest.mark.parametrize("degree", [0, 1, 2, 3, 6, 10])
    def test_dimension(self, degree):
        assert SphereQuotient(degree).size == (degree + 1) ** 2

    def test_elements_are_canonical(self):
        basis = SphereQuotient(5)
        for (a, b, c) in basis.elements:
            assert c in (0, 1)
            assert a + b + c <= 5

    def test_sector_blocks_are_contiguous(self):
        basis = SphereQuotient(3)
        sectors = [basis.sector(i) for i in range(basis.size)]
        seen = []
        for s in sectors:
            if not seen or seen[-1] != s:
                assert s not in seen
                seen.append(s)
        assert len(seen) == 8

    def test_vector_of_monomial_is_unit(self):
        basis = SphereQuotient(4)
        for i in range(basis.size):
            vec, truncated = basis.vector(basis.poly(i))
            assert not truncated
            assert vec[i] == 1 and sum(map(bool, vec)) == 1

    def test_canonicalize_reduces(self):
        basis = SphereQuotient(4)
        p = basis.canonicalize(mono(0, 0, 2))
        vec, _ = basis.vector(p)
        assert vec[basis.index[(0, 0, 0)]] == 1
        assert vec[basis.index[(2, 0, 0)]] == -1
        assert vec[basis.index[(0, 2, 0)]] == -1

    def test_overflow_raises(self):
        basis = SphereQuotient(2)
        with pytest.raises(BasisRangeError):
            basis.vector(mono(3, 0, 0))

    def test_foreign_term_raises(self):
        with pytest.raises(BasisRangeError):
            SphereQuotient(4).vector(mono(0, 0, 2))

    def test_non_regular_raises(self):
        with pytest.raises(NonRegularError):
            SphereQuotient(4).canonicalize(mono(-1, 0, 0))


class TestFullPoly3:
    @pytest.mark.parametrize("degree", [0, 1, 2, 6, 8])
    def test_dimension(self, degree):
        assert FullPoly3(degree).size == comb(degree + 3, 3)

    def test_degree_graded_order(self):
        degs = FullPoly3(4).degrees
        assert degs == sorted(degs)

    def test_truncation_is_reported(self):
        basis = FullPoly3(2)
        vec, truncated = basis.vector(mono(3, 0, 0) + mono(1, 1, 0, Fraction(1, 2)))
        assert truncated
        assert vec[basis.index[(1, 1, 0)]] == Fraction(1, 2)


class TestPoly1:
    def test_dimension_and_order(self):
        basis = Poly1(3)
        assert basis.size == 4
        assert basis.elements == [(0, 0, 0), (1, 0, 0), (2, 0, 0), (3, 0, 0)]

    def test_foreign_axis_raises(self):
        with pytest.raises(BasisRangeError):
            Poly1(3).vector(mono(0, 1, 0))

    def test_truncates_high_degree(self):
        vec, truncated = Poly1(2).vector(mono(3, 0, 0))
        assert truncated and not any(vec)
