"""Exact univariate polynomials over the rationals and discrete summation.

Everything here is exact: coefficients are :class:`fractions.Fraction` in
lowest terms, stored densely in ascending degree.  The summation helpers use
Bernoulli numbers with the ``B_1 = +1/2`` convention.
"""
from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from math import comb, gcd
from typing import Iterable, Sequence, Union

Number = Union[int, Fraction]

__all__ = [
    "RationalPolynomial",
    "bernoulli",
    "bernoulli_table",
    "power_sum",
    "faulhaber_from_zero",
    "discrete_sum",
    "adjusted_lower_limit",
    "interpolate",
]


def _frac(c: Number) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


class RationalPolynomial:
    """Dense polynomial with exact rational coefficients.

    ``coeffs[i]`` is the coefficient of ``x**i``.  The zero polynomial has an
    empty coefficient tuple, so ``degree`` of zero is ``-1``.
    """

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable[Number] = ()):
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)
        self._hash = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def constant(cls, c: Number) -> "RationalPolynomial":
        return cls((c,))

    @classmethod
    def x(cls) -> "RationalPolynomial":
        return cls((0, 1))

    @classmethod
    def monomial(cls, degree: int, c: Number = 1) -> "RationalPolynomial":
        return cls([0] * degree + [c])

    @classmethod
    def from_descending(cls, coeffs: Sequence[Number]) -> "RationalPolynomial":
        return cls(reversed(list(coeffs)))

    @classmethod
    def from_roots(cls, roots: Iterable[Number], lead: Number = 1) -> "RationalPolynomial":
        p = cls.constant(lead)
        for r in roots:
            p = p * cls((-_frac(r), 1))
        return p

    # -- basic queries ----------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def descending(self) -> list[Fraction]:
        return list(reversed(self.coeffs))

    def __call__(self, x: Number) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "RationalPolynomial":
        if isinstance(other, RationalPolynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return RationalPolynomial.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return RationalPolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return RationalPolynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return RationalPolynomial()
            return RationalPolynomial(c * other for c in self.coeffs)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.coeffs or not other.coeffs:
            return RationalPolynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RationalPolynomial(out)

    __rmul__ = __mul__

    def __truediv__(self, other: Number):
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        return RationalPolynomial(c / other for c in self.coeffs)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = RationalPolynomial.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def compose(self, inner: "RationalPolynomial") -> "RationalPolynomial":
        """Return ``self(inner(x))``."""
        acc = RationalPolynomial()
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def shift(self, c: Number) -> "RationalPolynomial":
        """Return ``self(x + c)`` (Taylor shift)."""
        c = _frac(c)
        if c == 0 or len(self.coeffs) <= 1:
            return self
        out = list(self.coeffs)
        n = len(out)
        # repeated synthetic division
        for i in range(n - 1):
            for j in range(n - 2, i - 1, -1):
                out[j] += c * out[j + 1]
        return RationalPolynomial(out)

    def derivative(self) -> "RationalPolynomial":
        return RationalPolynomial(i * c for i, c in enumerate(self.coeffs) if i)

    # -- comparison / hashing ---------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RationalPolynomial.constant(other)
        if not isinstance(other, RationalPolynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    # -- serialization ----------------------------------------------------
    def to_pairs(self) -> list[list[int]]:
        """Descending ``[numerator, denominator]`` pairs (zero -> ``[]``)."""
        return [[c.numerator, c.denominator] for c in reversed(self.coeffs)]

    @classmethod
    def from_pairs(cls, pairs: Sequence[Sequence[int]]) -> "RationalPolynomial":
        coeffs = []
        for pair in pairs:
            num, den = pair
            if den <= 0:
                raise ValueError(f"denominator must be positive, got {den}")
            f = Fraction(num, den)
            if (f.numerator, f.denominator) != (num, den):
                raise ValueError(f"{num}/{den} is not in lowest terms")
            coeffs.append(f)
        if coeffs and coeffs[0] == 0:
            raise ValueError("leading coefficient of serialized polynomial is zero")
        return cls.from_descending(coeffs)

    def to_json(self) -> str:
        return json.dumps(self.to_pairs(), separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "RationalPolynomial":
        return cls.from_pairs(json.loads(text))

    # -- display ------------------------------------------------------------
    def format(self, var: str = "x") -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if i == 0:
                body = str(a)
            else:
                mono = var if i == 1 else f"{var}^{i}"
                body = mono if a == 1 else f"{a}*{mono}"
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    def to_latex(self, var: str = "d") -> str:
        if not self.coeffs:
            return "0"
        out = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if a.denominator == 1:
                num = "" if (a == 1 and i) else str(a.numerator)
            else:
                num = rf"\frac{{{a.numerator}}}{{{a.denominator}}}"
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{{{i}}}")
            out.append(f"{sign}{num}{mono}")
        s = "".join(out)
        return s[1:] if s.startswith("+") else s

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"RationalPolynomial({self.format()!r})"



# -- Bernoulli numbers -------------------------------------------------------
_BERNOULLI: list[Fraction] = [Fraction(1)]


def bernoulli(j: int) -> Fraction:
    """Bernoulli number ``B_j`` with ``B_1 = +1/2``.

    Uses ``sum_{k=0}^{m} C(m+1, k) B_k = m + 1`` and memoizes the table.
    """
    if j < 0:
        raise ValueError("j must be non-negative")
    table = _BERNOULLI
    for m in range(len(table), j + 1):
        s = sum(comb(m + 1, k) * table[k] for k in range(m))
        table.append((Fraction(m + 1) - s) / (m + 1))
    return table[j]


def bernoulli_table(n: int) -> list[Fraction]:
    bernoulli(n)
    return list(_BERNOULLI[: n + 1])


@lru_cache(maxsize=None)
def power_sum(p: int) -> RationalPolynomial:
    """``S_p(n) = sum_{k=0}^{n} k**p`` as a polynomial in ``n`` (``0**0 = 1``)."""
    coeffs = [Fraction(0)] * (p + 2)
    for j in range(p + 1):
        coeffs[p + 1 - j] += comb(p + 1, j) * bernoulli(j) / (p + 1)
    if p == 0:
        coeffs[0] += 1  # the k = 0 term
    return RationalPolynomial(coeffs)


def faulhaber_from_zero(f: RationalPolynomial) -> RationalPolynomial:
    """Return ``F`` with ``F(n) = sum_{k=0}^{n} f(k)``; ``deg F = deg f + 1``."""
    out = RationalPolynomial()
    for s, c in enumerate(f.coeffs):
        if c:
            out = out + power_sum(s) * c
    return out


def discrete_sum(f: RationalPolynomial, a: int) -> RationalPolynomial:
    """Return ``F`` with ``F(n) = sum_{k=a}^{n} f(k)`` for all ``n >= a``."""
    if a < 0:
        raise ValueError("lower limit must be non-negative")
    F = faulhaber_from_zero(f)
    head = sum((f(k) for k in range(a)), Fraction(0))
    return F - head


def adjusted_lower_limit(a1: int, b1: int, a2: int) -> int:
    """Lower limit of the outer sum after the inner sum ``k1 = a1 .. k2 - b1``
    has been replaced by its polynomial antiderivative."""
    return max(a1 + b1, a2)


def interpolate(xs: Sequence[Number], ys: Sequence[Number]) -> RationalPolynomial:
    """Lagrange interpolation through ``(xs[i], ys[i])`` in exact arithmetic."""
    if len(xs) != len(ys):
        raise ValueError("xs and ys differ in length")
    if len(set(xs)) != len(xs):
        raise ValueError("interpolation nodes must be distinct")
    n = len(xs)
    if n == 0:
        return RationalPolynomial()
    if all(isinstance(v, int) or (isinstance(v, Fraction) and v.denominator == 1) for v in (*xs, *ys)):
        return _interpolate_integral([int(x) for x in xs], [int(y) for y in ys])
    xs = [_frac(x) for x in xs]
    # master polynomial prod (x - x_i), ascending coefficients
    master = [Fraction(1)]
    for xi in xs:
        nxt = [Fraction(0)] * (len(master) + 1)
        for i, c in enumerate(master):
            nxt[i + 1] += c
            nxt[i] -= xi * c
        master = nxt
    out = [Fraction(0)] * n
    for i, xi in enumerate(xs):
        yi = _frac(ys[i])
        if yi == 0:
            continue
        w = Fraction(1)
        for j, xj in enumerate(xs):
            if j != i:
                w *= xi - xj
        scale = yi / w
        # master / (x - xi) by synthetic division, high to low
        carry = Fraction(0)
        quotient = [Fraction(0)] * n
        for deg in range(n, 0, -1):
            carry = master[deg] + carry * xi
            quotient[deg - 1] = carry
        for deg in range(n):
            out[deg] += scale * quotient[deg]
    return RationalPolynomial(out)


def _interpolate_integral(xs: list[int], ys: list[int]) -> RationalPolynomial:
    # same construction in integers over the common denominator lcm(w_i)
    n = len(xs)
    master = [1]
    for xi in xs:
        nxt = [0] * (len(master) + 1)
        for i, c in enumerate(master):
            nxt[i + 1] += c
            nxt[i] -= xi * c
        master = nxt
    weights = []
    for i, xi in enumerate(xs):
        w = 1
        for j, xj in enumerate(xs):
            if j != i:
                w *= xi - xj
        weights.append(w)
    den = 1
    for w in weights:
        den = den * abs(w) // gcd(den, w)
    out = [0] * n
    for i, xi in enumerate(xs):
        if ys[i] == 0:
            continue
        scale = ys[i] * (den // weights[i])
        carry = 0
        for deg in range(n, 0, -1):
            carry = master[deg] + carry * xi
            out[deg - 1] += scale * carry
    return RationalPolynomial(Fraction(c, den) for c in out)
