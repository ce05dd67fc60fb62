"""Exact dense linear operators and the certificates built on them.

A LinOp stores an integer numerator matrix (numpy object array of Python
ints, so entries never overflow) together with one positive common
denominator.  All arithmetic is exact; products route through an
overflow-checked int64 numpy path when the entry bounds allow, which is
what keeps 121-dimensional certificate algebra fast, and fall back to
object arithmetic otherwise.

Rank uses fraction-free (Bareiss) elimination on the integer numerators;
kernels use rational Gauss-Jordan.  `annihilator_product` multiplies out
prod(M - r I) in the listed order so spectral certificates are a single
exact zero test.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .bases import Basis
from .laurent import LaurentPoly3, ModelParams, format_rational
from .operators import Op, apply_op
from .parser import parse

_INT64_SAFE = 2**62


class BasisMismatchError(ValueError):
    """Two operands were built over different bases."""


def _normalize(num: np.ndarray, den: int) -> Tuple[np.ndarray, int]:
    if den < 0:
        num = -num
        den = -den
    g = den
    for v in num.flat:
        if v:
            g = math.gcd(g, v if v > 0 else -v)
            if g == 1:
                return num, den
    if g > 1:
        num = num // g
        den //= g
    if not den:
        raise ZeroDivisionError("denominator must be nonzero")
    return num, den


def _max_abs(num: np.ndarray) -> int:
    best = 0
    for v in num.flat:
        a = v if v >= 0 else -v
        if a > best:
            best = a
    return best


class LinOp:
    """Exact matrix over the rationals, optionally tied to a basis."""

    __slots__ = ("num", "den", "basis", "truncated_cols")

    def __init__(
        self,
        num: np.ndarray,
        den: int = 1,
        basis: Optional[Basis] = None,
        truncated_cols: frozenset = frozenset(),
    ):
        num = np.asarray(num, dtype=object)
        self.num, self.den = _normalize(num, int(den))
        self.basis = basis
        self.truncated_cols = truncated_cols

    @classmethod
    def from_fractions(cls, rows: Sequence[Sequence[Fraction]], basis=None) -> "LinOp":
        den = 1
        for row in rows:
            for v in row:
                den = den * Fraction(v).denominator // math.gcd(den, Fraction(v).denominator)
        num = np.array(
            [[Fraction(v).numerator * (den // Fraction(v).denominator) for v in row] for row in rows],
            dtype=object,
        )
        return cls(num, den, basis)

    @classmethod
    def identity(cls, n_or_basis) -> "LinOp":
        if isinstance(n_or_basis, Basis):
            n, basis = n_or_basis.size, n_or_basis
        else:
            n, basis = int(n_or_basis), None
        num = np.zeros((n, n), dtype=object)
        for i in range(n):
            num[i, i] = 1
        return cls(num, 1, basis)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.num.shape

    def entry(self, i: int, j: int) -> Fraction:
        return Fraction(int(self.num[i, j]), self.den)

    def to_fractions(self) -> List[List[Fraction]]:
        return [
            [Fraction(int(v), self.den) for v in row] for row in self.num.tolist()
        ]

    def to_float(self) -> np.ndarray:
        out = np.empty(self.shape, dtype=np.float64)
        den = self.den
        for i in range(self.shape[0]):
            for j in range(self.shape[1]):
                out[i, j] = float(Fraction(int(self.num[i, j]), den))
        return out

    def _join_basis(self, other: "LinOp") -> Optional[Basis]:
        if self.basis is not None and other.basis is not None:
            if self.basis.name != other.basis.name:
                raise BasisMismatchError(
                    f"{self.basis.name} vs {other.basis.name}"
                )
            return self.basis
        return self.basis or other.basis

    def __add__(self, other: "LinOp") -> "LinOp":
        basis = self._join_basis(other)
        den = self.den * other.den // math.gcd(self.den, other.den)
        num = self.num * (den // self.den) + other.num * (den // other.den)
        return LinOp(num, den, basis)

    def __sub__(self, other: "LinOp") -> "LinOp":
        return self + (-other)

    def __neg__(self) -> "LinOp":
        return LinOp(-self.num, self.den, self.basis, self.truncated_cols)

    def scaled(self, q: Fraction | int) -> "LinOp":
        q = Fraction(q)
        return LinOp(self.num * q.numerator, self.den * q.denominator, self.basis)

    def __matmul__(self, other: "LinOp") -> "LinOp":
        basis = self._join_basis(other)
        n_inner = self.shape[1]
        if n_inner != other.shape[0]:
            raise ValueError("shape mismatch")
        bound = n_inner * _max_abs(self.num) * _max_abs(other.num)
        if 0 < bound < _INT64_SAFE:
            num = (
                self.num.astype(np.int64) @ other.num.astype(np.int64)
            ).astype(object)
        else:
            num = np.dot(self.num, other.num)
        return LinOp(num, self.den * other.den, basis)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LinOp):
            return NotImplemented
        return (
            self.den == other.den
            and self.shape == other.shape
            and bool((self.num == other.num).all())
        )

    def is_zero(self) -> bool:
        return not any(v for v in self.num.flat)

    def nonzero_entries(self, limit: int = 6) -> List[Tuple[int, int, Fraction]]:
        out = []
        for (i, j), v in np.ndenumerate(self.num):
            if v:
                out.append((int(i), int(j), Fraction(int(v), self.den)))
                if len(out) >= limit:
                    break
        return out

    def max_abs(self) -> Fraction:
        return Fraction(_max_abs(self.num), self.den)

    def entry_strings(self) -> List[List[str]]:
        """Rows of exact entries as 'p' / 'p/q' strings, JSON-ready."""
        return [
            [format_rational(Fraction(int(v), self.den)) for v in row]
            for row in self.num.tolist()
        ]

    def __repr__(self) -> str:
        b = f", basis={self.basis.name}" if self.basis is not None else ""
        return f"LinOp(shape={self.shape}, den={self.den}{b})"


def commutator(a: LinOp, b: LinOp) -> LinOp:
    return a @ b - b @ a


def anticommutator(a: LinOp, b: LinOp) -> LinOp:
    return a @ b + b @ a


def build_matrix(expr: "Op | str", basis: Basis, params: ModelParams) -> LinOp:
    """Exact matrix of an operator expression on a basis.

    The expression is applied symbolically column by column, Laurent
    intermediates and all, and only the final image is canonicalized and
    projected.  Truncated columns (FullPoly3/Poly1 only) are recorded on
    the result.
    """
    op = parse(expr) if isinstance(expr, str) else expr
    den = 1
    columns: List[List[Fraction]] = []
    truncated = set()
    for j in range(basis.size):
        image = basis.canonicalize(apply_op(op, basis.poly(j), params))
        vec, trunc = basis.vector(image)
        if trunc:
            truncated.add(j)
        columns.append(vec)
        for v in vec:
            den = den * v.denominator // math.gcd(den, v.denominator)
    n = basis.size
    num = np.zeros((n, n), dtype=object)
    for j, vec in enumerate(columns):
        for i, v in enumerate(vec):
            if v:
                num[i, j] = v.numerator * (den // v.denominator)
    return LinOp(num, den, basis, frozenset(truncated))


def rank_exact(m: "LinOp | np.ndarray | Sequence[Sequence[int]]") -> int:
    """Rank over the rationals by fraction-free elimination."""
    if isinstance(m, LinOp):
        rows = [list(map(int, row)) for row in m.num.tolist()]
    elif isinstance(m, np.ndarray):
        rows = [list(map(int, row)) for row in m.tolist()]
    else:
        rows = [[int(v) for v in row] for row in m]
    if not rows or not rows[0]:
        return 0
    n_rows, n_cols = len(rows), len(rows[0])
    rank = 0
    prev = 1
    r = 0
    for c in range(n_cols):
        piv = next((i for i in range(r, n_rows) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pivval = rows[r][c]
        for i in range(r + 1, n_rows):
            ric = rows[i][c]
            row_i, row_r = rows[i], rows[r]
            for j in range(c + 1, n_cols):
                row_i[j] = (row_i[j] * pivval - ric * row_r[j]) // prev
            row_i[c] = 0
        prev = pivval
        rank += 1
        r += 1
        if r == n_rows:
            break
    return rank


def annihilator_product(m: LinOp, roots: Iterable[Fraction]) -> LinOp:
    """prod over roots of (M - r I), multiplied exactly in the listed order."""
    eye = LinOp.identity(m.shape[0])
    if m.basis is not None:
        eye = LinOp.identity(m.basis)
    product = eye
    for r in roots:
        product = product @ (m - eye.scaled(Fraction(r)))
    return product


def kernel_basis(m: LinOp) -> List[List[Fraction]]:
    """Basis of the exact null space, one vector per free column of the RREF."""
    rows = [[Fraction(int(v), m.den) for v in row] for row in m.num.tolist()]
    n_rows = len(rows)
    n_cols = m.shape[1]
    pivots: List[int] = []
    r = 0
    for c in range(n_cols):
        piv = next((i for i in range(r, n_rows) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(n_rows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [vi - f * vr for vi, vr in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    free = [c for c in range(n_cols) if c not in pivots]
    basis_vectors = []
    for c in free:
        vec = [Fraction(0)] * n_cols
        vec[c] = Fraction(1)
        for r_i, p in enumerate(pivots):
            vec[p] = -rows[r_i][c]
        basis_vectors.append(vec)
    return basis_vectors


def equal_on_columns(a: LinOp, b: LinOp, cols: Iterable[int]) -> bool:
    """Exact equality restricted to the given columns."""
    den = a.den * b.den // math.gcd(a.den, b.den)
    fa = den // a.den
    fb = den // b.den
    for j in cols:
        if not ((a.num[:, j] * fa) == (b.num[:, j] * fb)).all():
            return False
    return True


def zero_on_columns(a: LinOp, cols: Iterable[int]) -> bool:
    for j in cols:
        if any(v for v in a.num[:, j]):
            return False
    return True
