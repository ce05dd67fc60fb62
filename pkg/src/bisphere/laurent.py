"""Exact Laurent polynomials in three sphere coordinates.

Everything downstream is built on polynomials in s1, s2, s3 with rational
coefficients and integer exponents.  Negative exponents are legal as
intermediates (gauge factors bring in 1/s terms) but any object that is
handed to a matrix builder must be regular, i.e. free of negative
exponents.  On the unit sphere the coordinates satisfy

    s1^2 + s2^2 + s3^2 = 1

and `reduce_sphere` rewrites s3^2 -> 1 - s1^2 - s2^2 until every term has
s3-exponent 0 or 1, the canonical representative on the quotient.

Coefficients are `fractions.Fraction` throughout; no floats enter until a
matrix or a wavefunction is explicitly evaluated numerically.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Tuple

Rational = Fraction

Exponents = Tuple[int, int, int]


class NonRegularError(ValueError):
    """A polynomial carried a negative exponent where a regular one was required."""


class ParameterDomainError(ValueError):
    """A deformation parameter left the admissible range mu > -1/2."""


def parse_rational(text: str) -> Fraction:
    """Parse 'p' or 'p/q' into an exact rational, rejecting floats."""
    t = text.strip()
    if "." in t or "e" in t.lower():
        raise ValueError(f"not an exact rational: {text!r}")
    return Fraction(t)


def format_rational(q: Fraction) -> str:
    """Render an exact rational as 'p' or 'p/q'."""
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class ModelParams:
    """The three reflection-coupling parameters mu1, mu2, mu3.

    Each must exceed -1/2 for the model to be well defined.  Stored exact;
    sigma = mu1 + mu2 + mu3 controls spectrum injectivity and is checked
    separately by routines that need sigma > -1.
    """

    __slots__ = ("mu1", "mu2", "mu3")

    def __init__(self, mu1, mu2, mu3):
        vals = []
        for name, v in (("mu1", mu1), ("mu2", mu2), ("mu3", mu3)):
            if isinstance(v, str):
                v = parse_rational(v)
            v = Fraction(v)
            if v <= Fraction(-1, 2):
                raise ParameterDomainError(f"{name} = {format_rational(v)} <= -1/2")
            vals.append(v)
        self.mu1, self.mu2, self.mu3 = vals

    @property
    def sigma(self) -> Fraction:
        return self.mu1 + self.mu2 + self.mu3

    def mu(self, axis: int) -> Fraction:
        return (self.mu1, self.mu2, self.mu3)[axis - 1]

    def as_tuple(self) -> Tuple[Fraction, Fraction, Fraction]:
        return (self.mu1, self.mu2, self.mu3)

    def cycled(self) -> "ModelParams":
        """Parameters after the cyclic relabeling 1 -> 2 -> 3 -> 1."""
        return ModelParams(self.mu3, self.mu1, self.mu2)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ModelParams):
            return NotImplemented
        return self.as_tuple() == other.as_tuple()

    def __repr__(self) -> str:
        vals = ", ".join(format_rational(m) for m in self.as_tuple())
        return f"ModelParams({vals})"


class LaurentPoly3:
    """Sparse Laurent polynomial in (s1, s2, s3) over the rationals.

    Terms map exponent triples to nonzero Fraction coefficients; zero
    coefficients are stripped on construction so equality is structural.
    Instances are treated as immutable.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Dict[Exponents, Fraction] | None = None):
        clean: Dict[Exponents, Fraction] = {}
        if terms:
            for expo, coef in terms.items():
                c = Fraction(coef)
                if c:
                    clean[(int(expo[0]), int(expo[1]), int(expo[2]))] = c
        self._terms = clean

    @classmethod
    def zero(cls) -> "LaurentPoly3":
        return cls()

    @classmethod
    def one(cls) -> "LaurentPoly3":
        return cls({(0, 0, 0): Fraction(1)})

    @classmethod
    def monomial(cls, a: int, b: int, c: int, coef: Fraction | int = 1) -> "LaurentPoly3":
        return cls({(a, b, c): Fraction(coef)})

    def terms(self) -> Iterable[Tuple[Exponents, Fraction]]:
        return self._terms.items()

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaurentPoly3):
            return NotImplemented
        return self._terms == other._terms

    def __add__(self, other: "LaurentPoly3") -> "LaurentPoly3":
        out = dict(self._terms)
        for expo, coef in other._terms.items():
            s = out.get(expo, Fraction(0)) + coef
            if s:
                out[expo] = s
            else:
                out.pop(expo, None)
        result = LaurentPoly3.__new__(LaurentPoly3)
        result._terms = out
        return result

    def __sub__(self, other: "LaurentPoly3") -> "LaurentPoly3":
        return self + (-other)

    def __neg__(self) -> "LaurentPoly3":
        result = LaurentPoly3.__new__(LaurentPoly3)
        result._terms = {e: -c for e, c in self._terms.items()}
        return result

    def scaled(self, q: Fraction | int) -> "LaurentPoly3":
        q = Fraction(q)
        if not q:
            return LaurentPoly3.zero()
        result = LaurentPoly3.__new__(LaurentPoly3)
        result._terms = {e: c * q for e, c in self._terms.items()}
        return result

    def __mul__(self, other: "LaurentPoly3 | Fraction | int") -> "LaurentPoly3":
        if isinstance(other, (Fraction, int)):
            return self.scaled(other)
        out: Dict[Exponents, Fraction] = {}
        for (a1, b1, c1), q1 in self._terms.items():
            for (a2, b2, c2), q2 in other._terms.items():
                expo = (a1 + a2, b1 + b2, c1 + c2)
                s = out.get(expo, Fraction(0)) + q1 * q2
                if s:
                    out[expo] = s
                else:
                    out.pop(expo, None)
        result = LaurentPoly3.__new__(LaurentPoly3)
        result._terms = out
        return result

    __rmul__ = __mul__

    def shifted(self, da: int, db: int, dc: int) -> "LaurentPoly3":
        """Multiply by the monomial s1^da s2^db s3^dc (exponent shift)."""
        result = LaurentPoly3.__new__(LaurentPoly3)
        result._terms = {(a + da, b + db, c + dc): q for (a, b, c), q in self._terms.items()}
        return result

    def partial(self, axis: int) -> "LaurentPoly3":
        """Exact partial derivative with respect to s_axis, axis in {1,2,3}.

        Valid on Laurent terms: the exponent 0 term drops, every other
        exponent n maps to n*s^(n-1).
        """
        i = axis - 1
        out: Dict[Exponents, Fraction] = {}
        for expo, coef in self._terms.items():
            n = expo[i]
            if n == 0:
                continue
            new = list(expo)
            new[i] = n - 1
            key = (new[0], new[1], new[2])
            s = out.get(key, Fraction(0)) + coef * n
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        result = LaurentPoly3.__new__(LaurentPoly3)
        result._terms = out
        return result

    def is_regular(self) -> bool:
        return all(a >= 0 and b >= 0 and c >= 0 for (a, b, c) in self._terms)

    def is_regular_in(self, axis: int) -> bool:
        i = axis - 1
        return all(expo[i] >= 0 for expo in self._terms)

    def max_degree(self) -> int:
        """Largest total degree over terms; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        return max(a + b + c for (a, b, c) in self._terms)

    def evaluate(self, s1: float, s2: float, s3: float) -> float:
        total = 0.0
        for (a, b, c), coef in self._terms.items():
            total += float(coef) * s1**a * s2**b * s3**c
        return total

    def __repr__(self) -> str:
        return f"LaurentPoly3({poly_text(self)!r})"


def reflect(p: LaurentPoly3, axis: int) -> LaurentPoly3:
    """Reflection R_axis: s_axis -> -s_axis, exact on Laurent terms."""
    i = axis - 1
    result = LaurentPoly3.__new__(LaurentPoly3)
    result._terms = {
        expo: (-coef if expo[i] % 2 else coef) for expo, coef in p._terms.items()
    }
    return result


def dunkl_apply(p: LaurentPoly3, axis: int, mu: Fraction) -> LaurentPoly3:
    """Dunkl derivative D_axis = d/ds + (mu/s)(1 - R) applied to p.

    Requires p regular in s_axis: the reflection part divides exactly only
    then, and a negative exponent would signal a gauge factor that was not
    cleared.  Each term of the image has axis-degree exactly one lower.
    """
    if not p.is_regular_in(axis):
        raise NonRegularError(f"polynomial is not regular in s{axis}")
    i = axis - 1
    out: Dict[Exponents, Fraction] = {}
    mu = Fraction(mu)
    for expo, coef in p._terms.items():
        n = expo[i]
        if n == 0:
            continue
        new = list(expo)
        new[i] = n - 1
        key = (new[0], new[1], new[2])
        contrib = coef * n
        if n % 2:
            # (p - Rp)/s keeps odd-exponent terms doubled.
            contrib += coef * 2 * mu
        s = out.get(key, Fraction(0)) + contrib
        if s:
            out[key] = s
        else:
            out.pop(key, None)
    result = LaurentPoly3.__new__(LaurentPoly3)
    result._terms = out
    return result


_SPHERE_COMPLEMENT = LaurentPoly3(
    {(0, 0, 0): Fraction(1), (2, 0, 0): Fraction(-1), (0, 2, 0): Fraction(-1)}
)


def reduce_sphere(p: LaurentPoly3) -> LaurentPoly3:
    """Canonical representative on the sphere: rewrite s3^2 -> 1 - s1^2 - s2^2.

    Requires a regular polynomial; the result has s3-exponent 0 or 1 in
    every term and the total degree never grows.
    """
    if not p.is_regular():
        raise NonRegularError("cannot reduce a non-regular polynomial")
    max_half = 0
    for (_, _, c) in p._terms:
        max_half = max(max_half, c // 2)
    powers = [LaurentPoly3.one()]
    for _ in range(max_half):
        powers.append(powers[-1] * _SPHERE_COMPLEMENT)
    out = LaurentPoly3.zero()
    for (a, b, c), coef in p._terms.items():
        q, r = divmod(c, 2)
        if q == 0:
            out = out + LaurentPoly3.monomial(a, b, c, coef)
        else:
            out = out + powers[q].shifted(a, b, r).scaled(coef)
    return out


def poly_text(p: LaurentPoly3) -> str:
    """Deterministic text form: 'p/q*s1^a*s2^b*s3^c' terms joined with signs."""
    if not p:
        return "0"
    keyed = sorted(p._terms.items(), key=lambda kv: (-(sum(kv[0])), kv[0]))
    pieces = []
    for (a, b, c), coef in keyed:
        factors = []
        for name, expo in (("s1", a), ("s2", b), ("s3", c)):
            if expo == 0:
                continue
            factors.append(name if expo == 1 else f"{name}^{expo}")
        mag = abs(coef)
        if not factors:
            body = format_rational(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([format_rational(mag)] + factors)
        pieces.append(("-" if coef < 0 else "+", body))
    sign, body = pieces[0]
    text = body if sign == "+" else f"-{body}"
    for sign, body in pieces[1:]:
        text += f" {sign} {body}"
    return text
