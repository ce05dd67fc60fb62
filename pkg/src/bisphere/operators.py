"""Operator expressions over the Laurent polynomial algebra.

An operator is a tree built from seven primitives:

    Scalar(q)     multiplication by a rational constant
    Mono(a,b,c)   multiplication by s1^a s2^b s3^c (Laurent exponents allowed)
    Partial(i)    plain partial derivative in s_i
    Dunkl(i)      Dunkl derivative in s_i, coupling mu_i supplied at apply time
    Refl(i)       reflection s_i -> -s_i
    Compose(...)  operator product, applied right to left
    Sum(...)      operator sum
    ScalarMul(q, op)

Trees are normalized through the smart constructors below so that two
operators that print identically are structurally equal.  Every node has a
degree-shift window [lo, hi]: applying it to a homogeneous polynomial of
degree d produces terms of degree between d+lo and d+hi only.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple, Union

from .laurent import (
    LaurentPoly3,
    ModelParams,
    dunkl_apply,
    format_rational,
    reflect,
)

Op = Union["Scalar", "Mono", "Partial", "Dunkl", "Refl", "Compose", "Sum", "ScalarMul"]


@dataclass(frozen=True)
class Scalar:
    value: Fraction


@dataclass(frozen=True)
class Mono:
    a: int
    b: int
    c: int


@dataclass(frozen=True)
class Partial:
    axis: int


@dataclass(frozen=True)
class Dunkl:
    axis: int


@dataclass(frozen=True)
class Refl:
    axis: int


@dataclass(frozen=True)
class Compose:
    factors: Tuple[Op, ...]


@dataclass(frozen=True)
class Sum:
    terms: Tuple[Op, ...]


@dataclass(frozen=True)
class ScalarMul:
    coef: Fraction
    op: Op


def scalar(q) -> Op:
    return Scalar(Fraction(q))


def mono(a: int, b: int, c: int) -> Op:
    if a == 0 and b == 0 and c == 0:
        return Scalar(Fraction(1))
    return Mono(a, b, c)


def scalar_mul(q, op: Op) -> Op:
    q = Fraction(q)
    if isinstance(op, Scalar):
        return Scalar(q * op.value)
    if isinstance(op, ScalarMul):
        return scalar_mul(q * op.coef, op.op)
    if q == 0:
        return Scalar(Fraction(0))
    if q == 1:
        return op
    return ScalarMul(q, op)


def negate(op: Op) -> Op:
    return scalar_mul(Fraction(-1), op)


def compose(*factors: Op) -> Op:
    coef = Fraction(1)
    flat: list[Op] = []
    stack = list(factors)
    for f in stack:
        if isinstance(f, Compose):
            flat.extend(f.factors)
        elif isinstance(f, Scalar):
            coef *= f.value
        elif isinstance(f, ScalarMul):
            coef *= f.coef
            if isinstance(f.op, Compose):
                flat.extend(f.op.factors)
            else:
                flat.append(f.op)
        else:
            flat.append(f)
    if coef == 0:
        return Scalar(Fraction(0))
    merged: list[Op] = []
    for f in flat:
        # Adjacent monomial factors commute, collapse them into one.
        if merged and isinstance(f, Mono) and isinstance(merged[-1], Mono):
            prev = merged.pop()
            m = mono(prev.a + f.a, prev.b + f.b, prev.c + f.c)
            if isinstance(m, Mono):
                merged.append(m)
        else:
            merged.append(f)
    if not merged:
        return Scalar(coef)
    body = merged[0] if len(merged) == 1 else Compose(tuple(merged))
    return scalar_mul(coef, body)


def sum_(*terms: Op) -> Op:
    flat: list[Op] = []
    for t in terms:
        if isinstance(t, Sum):
            flat.extend(t.terms)
        elif isinstance(t, Scalar) and t.value == 0:
            continue
        else:
            flat.append(t)
    if not flat:
        return Scalar(Fraction(0))
    if len(flat) == 1:
        return flat[0]
    return Sum(tuple(flat))


def window(op: Op) -> Tuple[int, int]:
    """Degree-shift window [lo, hi] of an operator."""
    if isinstance(op, (Scalar, Refl)):
        return (0, 0)
    if isinstance(op, Mono):
        d = op.a + op.b + op.c
        return (d, d)
    if isinstance(op, (Partial, Dunkl)):
        return (-1, -1)
    if isinstance(op, ScalarMul):
        return window(op.op)
    if isinstance(op, Compose):
        lo = hi = 0
        for f in op.factors:
            flo, fhi = window(f)
            lo += flo
            hi += fhi
        return (lo, hi)
    if isinstance(op, Sum):
        wins = [window(t) for t in op.terms]
        return (min(w[0] for w in wins), max(w[1] for w in wins))
    raise TypeError(f"not an operator node: {op!r}")


def apply_op(op: Op, p: LaurentPoly3, params: ModelParams) -> LaurentPoly3:
    """Apply an operator tree to a Laurent polynomial, exactly."""
    if isinstance(op, Scalar):
        return p.scaled(op.value)
    if isinstance(op, Mono):
        return p.shifted(op.a, op.b, op.c)
    if isinstance(op, Partial):
        return p.partial(op.axis)
    if isinstance(op, Dunkl):
        return dunkl_apply(p, op.axis, params.mu(op.axis))
    if isinstance(op, Refl):
        return reflect(p, op.axis)
    if isinstance(op, ScalarMul):
        return apply_op(op.op, p, params).scaled(op.coef)
    if isinstance(op, Compose):
        for f in reversed(op.factors):
            p = apply_op(f, p, params)
        return p
    if isinstance(op, Sum):
        out = LaurentPoly3.zero()
        for t in op.terms:
            out = out + apply_op(t, p, params)
        return out
    raise TypeError(f"not an operator node: {op!r}")


def _mono_text(op: Mono) -> str:
    parts = []
    for name, expo in (("s1", op.a), ("s2", op.b), ("s3", op.c)):
        if expo == 0:
            continue
        parts.append(name if expo == 1 else f"{name}^{expo}")
    return "*".join(parts) if parts else "1"


def _factor_text(op: Op) -> str:
    text = to_text(op)
    if isinstance(op, (Sum, ScalarMul)):
        return f"({text})"
    return text


def _wrapped_text(op: Op) -> str:
    """Text with parentheses whenever the node is a bare sum."""
    text = to_text(op)
    return f"({text})" if isinstance(op, Sum) else text


def _signed_text(op: Op) -> Tuple[str, str]:
    """Split a term into ('+'|'-', unsigned text) for sum joining."""
    if isinstance(op, Scalar) and op.value < 0:
        return "-", format_rational(-op.value)
    if isinstance(op, ScalarMul) and op.coef < 0:
        return "-", _wrapped_text(scalar_mul(-op.coef, op.op))
    return "+", to_text(op)


def to_text(op: Op) -> str:
    """Render an operator in the expression grammar; parse(to_text(op)) == op."""
    if isinstance(op, Scalar):
        return format_rational(op.value)
    if isinstance(op, Mono):
        return _mono_text(op)
    if isinstance(op, Partial):
        return f"d{op.axis}"
    if isinstance(op, Dunkl):
        return f"D{op.axis}"
    if isinstance(op, Refl):
        return f"R{op.axis}"
    if isinstance(op, Compose):
        return "*".join(_factor_text(f) for f in op.factors)
    if isinstance(op, ScalarMul):
        if op.coef < 0:
            return "-" + _wrapped_text(scalar_mul(-op.coef, op.op))
        body = f"({to_text(op.op)})" if isinstance(op.op, Sum) else _factor_text(op.op)
        if op.coef == 1:
            return body
        return f"{format_rational(op.coef)}*{body}"
    if isinstance(op, Sum):
        sign, text = _signed_text(op.terms[0])
        out = text if sign == "+" else f"-{text}"
        for t in op.terms[1:]:
            sign, text = _signed_text(t)
            out += f" {sign} {text}"
        return out
    raise TypeError(f"not an operator node: {op!r}")


def random_operator(rng: random.Random, max_depth: int = 3) -> Op:
    """Random normalized operator tree, for fuzzing the printer and parser."""
    if max_depth <= 0 or rng.random() < 0.35:
        kind = rng.randrange(5)
        if kind == 0:
            num = rng.randint(-9, 9)
            den = rng.randint(1, 9)
            return scalar(Fraction(num, den))
        if kind == 1:
            return mono(rng.randint(-2, 3), rng.randint(-2, 3), rng.randint(-2, 3))
        axis = rng.randint(1, 3)
        return (Partial(axis), Dunkl(axis), Refl(axis))[kind - 2]
    kind = rng.randrange(3)
    width = rng.randint(2, 3)
    children = [random_operator(rng, max_depth - 1) for _ in range(width)]
    if kind == 0:
        return sum_(*children)
    if kind == 1:
        return compose(*children)
    num = rng.randint(-9, 9)
    den = rng.randint(1, 9)
    return scalar_mul(Fraction(num, den), children[0])
