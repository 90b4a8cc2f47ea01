"""Leading coefficients of node polynomials for symbolic ``delta``.

Collections of templates are grouped by their *type*: the number of
templates of each cogenus ``j >= 2`` (cogenus one templates are not counted).
A collection of type ``tau`` contributes a polynomial of degree
``2 delta - defect(tau)``, so the top ``N`` coefficients of ``N_delta(d)`` only
involve types of defect below ``N``.  For each type the top coefficients
satisfy a linear recursion in ``delta`` driven by the summation matrices
``M_i(a)``; after dividing by ``3**delta / delta!`` every entry is (by all
available evidence) a polynomial in ``delta``, which is recovered by exact
fitting and checked at extra points.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, gcd
from typing import Sequence

from .engine import TemplateStore, default_store
from .errors import ConjectureViolation, DomainError, InternalConsistencyError
from .polynomial import RationalPolynomial, bernoulli, discrete_sum, interpolate

__all__ = [
    "defect",
    "type_weight",
    "enumerate_coefficient_types",
    "initial_delta",
    "CoefficientEngine",
    "SummationMatrix",
    "build_M",
    "initial_vector",
    "solve_type_recursion",
    "leading_coefficients",
    "format_leading_coefficients",
    "render_factored",
]

TypeVector = tuple  # (tau_2, tau_3, ..., tau_N)


def defect(tau: Sequence[int]) -> int:
    return sum((j + 1) * c for j, c in enumerate(tau))  # tau[0] is tau_2


def type_weight(tau: Sequence[int]) -> int:
    """Total cogenus of the non-trivial templates, ``sum j * tau_j``."""
    return sum((j + 2) * c for j, c in enumerate(tau))


def _down(tau: TypeVector, i: int) -> TypeVector:
    t = list(tau)
    t[i - 2] -= 1
    return tuple(t)


def enumerate_coefficient_types(N: int) -> list[TypeVector]:
    """Types of defect ``< N``, ordered by ``|tau|`` then lexicographically
    (so every ``tau`` comes after each of its reductions)."""
    if N < 1:
        raise DomainError("N must be positive")
    out: list[TypeVector] = []
    width = max(N - 1, 0)

    def rec(pos, left, cur):
        if pos == width:
            out.append(tuple(cur))
            return
        cost = pos + 1
        c = 0
        while c * cost <= left:
            rec(pos + 1, left - c * cost, cur + [c])
            c += 1

    rec(0, N - 1, [])
    out.sort(key=lambda t: (sum(t), t))
    return out


def initial_delta(tau: Sequence[int], N: int) -> int:
    """Largest ``delta`` at which the type-``tau`` vector is evaluated directly."""
    return max((N - 1 + 1) // 2, type_weight(tau))


@dataclass(frozen=True)
class SummationMatrix:
    i: int
    a: int
    size: int
    end_variant: bool
    entries: tuple[tuple[Fraction, ...], ...]  # rows, descending coefficient order

    def apply(self, vec: Sequence[Fraction]) -> list[Fraction]:
        return [sum((row[c] * vec[c] for c in range(min(len(row), len(vec)))), Fraction(0)) for row in self.entries]


@lru_cache(maxsize=None)
def _shifted_power_sum_coeff(q: int, t: int, l: int) -> Fraction:
    """Coefficient of ``n**(q+1-t)`` in ``sum_{k=0}^{n-l} k**q``."""
    if t < 0 or t > q + 1:
        return Fraction(0)
    acc = Fraction(0)
    for j in range(min(t, q) + 1):
        beta = comb(q + 1, j) * bernoulli(j) / (q + 1)
        acc += beta * comb(q + 1 - j, t - j) * (-l) ** (t - j)
    if q == 0 and t == 1:
        acc += 1
    return acc


class CoefficientEngine:
    """All type vectors needed for the top ``N`` coefficients."""

    def __init__(self, N: int, store: TemplateStore | None = None):
        if N < 1:
            raise DomainError("N must be positive")
        self.N = N
        self.store = store or default_store()
        self.types = enumerate_coefficient_types(N)
        self._classes = {}
        for i in range(1, N + 1):
            # a template whose cogenus exceeds its edge count by e only reaches
            # coefficient N - i or lower once i - 1 units of defect are spent
            self._classes[i] = self.store.classes(i, max_drop=N - i)
        self._by_shift = {}
        for end in (False, True):
            for i in range(1, N + 1):
                acc: dict[int, RationalPolynomial] = {}
                for cls in self._classes[i]:
                    key = cls.length - (cls.epsilon if end else 0)
                    acc[key] = acc.get(key, RationalPolynomial()) + cls.combined_poly
                self._by_shift[i, end] = sorted(acc.items())
        self._direct: dict = {}
        self._values: dict = {}
        self._matrices: dict = {}

    # -- summation matrices ------------------------------------------------------
    def size(self, tau: TypeVector) -> int:
        return self.N - defect(tau)

    def matrix(self, i: int, a: int, size: int, end_variant: bool = False) -> SummationMatrix:
        """Top ``size`` rows of ``M_i(a)``, where they do not depend on the
        lower summation limits (requires ``size <= a + i``)."""
        if size > a + i:
            raise DomainError(f"rows beyond {a + i} of M_{i}({a}) depend on the lower limits")
        key = (i, a, size, end_variant)
        if key in self._matrices:
            return self._matrices[key]
        groups = self._by_shift[i, end_variant]
        rows = []
        for r in range(size):
            row = []
            for c in range(min(r, a) + 1):
                # output degree a+i+1-r from input monomial k**(a-c)
                val = Fraction(0)
                for shift, poly in groups:
                    for e, pe in enumerate(poly.coeffs):
                        if pe:
                            val += pe * _shifted_power_sum_coeff(e + a - c, e - c - i + r, shift)
                row.append(val)
            rows.append(tuple(row))
        m = SummationMatrix(i, a, size, end_variant, tuple(rows))
        self._matrices[key] = m
        return m

    def matrix_exact(self, i: int, a: int, end_variant: bool = False, lower_shift: int = 0) -> SummationMatrix:
        """The full ``(a+i+2) x (a+1)`` matrix with lower limits ``kmin + lower_shift``."""
        if lower_shift < 0:
            raise DomainError("lower_shift must be non-negative")
        rows = [[Fraction(0)] * (a + 1) for _ in range(a + i + 2)]
        for c in range(a + 1):
            image = RationalPolynomial()
            mono = RationalPolynomial.monomial(a - c)
            for cls in self._classes[i]:
                top = cls.epsilon - cls.length if end_variant else -cls.length
                image = image + discrete_sum(cls.combined_poly * mono, cls.kmin + lower_shift).shift(top)
            for r in range(a + i + 2):
                rows[r][c] = image.coefficient(a + i + 1 - r)
        return SummationMatrix(i, a, a + i + 2, end_variant, tuple(tuple(r) for r in rows))

    # -- direct evaluation -----------------------------------------------------
    def direct_polynomial(self, tau: TypeVector, delta: int, end_variant: bool = False) -> RationalPolynomial:
        """The nested sum over all collections of type ``tau`` and cogenus
        ``delta``, as a polynomial in the upper variable ``n``.  Exact in the
        top ``N - defect(tau)`` coefficients."""
        key = (tau, delta, end_variant)
        if key in self._direct:
            return self._direct[key]
        ones = delta - type_weight(tau)
        if ones < 0:
            raise DomainError("delta is below the total cogenus of the type")
        need = [ones] + list(tau)  # need[j-1] templates of cogenus j
        m = sum(need)
        total = RationalPolynomial()
        if m == 0:
            total = RationalPolynomial.constant(1)
        states = {(tuple(0 for _ in need), 1): RationalPolynomial.constant(1)}
        for placed_count in range(m):
            layer = [(k, q) for k, q in states.items() if sum(k[0]) == placed_count]
            for (placed, t), q in sorted(layer, key=lambda kv: kv[0]):
                del states[(placed, t)]
                for idx, want in enumerate(need):
                    if placed[idx] == want:
                        continue
                    nxt = placed[:idx] + (placed[idx] + 1,) + placed[idx + 1 :]
                    last = placed_count + 1 == m
                    for cls in self._classes[idx + 1]:
                        a = max(cls.kmin, t)
                        F = discrete_sum(cls.combined_poly * q, a)
                        if last:
                            total = total + F.shift((cls.epsilon if end_variant else 0) - cls.length)
                        else:
                            k2 = (nxt, a + cls.length)
                            states[k2] = states.get(k2, RationalPolynomial()) + F.shift(-cls.length)
        self._direct[key] = total
        return total

    def direct_vector(self, tau: TypeVector, delta: int, end_variant: bool = False) -> list[Fraction]:
        p = self.direct_polynomial(tau, delta, end_variant)
        top = 2 * delta - defect(tau)
        return [p.coefficient(top - r) for r in range(self.size(tau))]

    # -- recursion ---------------------------------------------------------------
    def value(self, tau: TypeVector, delta: int, end_variant: bool = False) -> list[Fraction]:
        """Top ``N - defect(tau)`` coefficients of the type-``tau`` sum at ``delta``."""
        key = (tau, delta, end_variant)
        if key in self._values:
            return self._values[key]
        S = self.size(tau)
        if delta < type_weight(tau):
            out = [Fraction(0)] * S
        elif delta <= initial_delta(tau, self.N):
            out = self.direct_vector(tau, delta, end_variant)
        else:
            dfc = defect(tau)
            out = [Fraction(0)] * S
            for i in range(2, self.N + 1):
                if tau[i - 2]:
                    inner = self.value(_down(tau, i), delta - i)[:S]
                    M = self.matrix(i, 2 * delta - i - 1 - dfc, S, end_variant)
                    out = [x + y for x, y in zip(out, M.apply(inner))]
            inner = self.value(tau, delta - 1)[:S]
            M = self.matrix(1, 2 * delta - 2 - dfc, S, end_variant)
            out = [x + y for x, y in zip(out, M.apply(inner))]
        self._values[key] = out
        return out

    def normalized(self, tau: TypeVector, delta: int, end_variant: bool = False) -> list[Fraction]:
        scale = Fraction(factorial(delta), 3**delta)
        return [x * scale for x in self.value(tau, delta, end_variant)]

    def solve(self, tau: TypeVector) -> list[RationalPolynomial]:
        """Polynomials ``p_j`` with ``C_tau(delta)[j] = 3**delta/delta! p_j(delta)``
        for ``delta >= initial_delta(tau)``."""
        start = initial_delta(tau, self.N)
        return [
            _fit_sequence(
                lambda dl, j=j: self.normalized(tau, dl)[j],
                start,
                range(2 * j, 2 * self.N + 1, 2),
                f"type {tau} entry {j}",
            )
            for j in range(self.size(tau))
        ]

    def coefficient_values(self, delta: int) -> list[Fraction]:
        """Top ``N`` coefficients of ``N_delta(d)`` (descending from ``d**(2 delta)``)."""
        out = [Fraction(0)] * self.N
        for tau in self.types:
            dfc = defect(tau)
            vec = self.value(tau, delta, end_variant=True)
            for r, x in enumerate(vec):
                out[r + dfc] += x
        return out

    def leading_coefficients(self) -> list[RationalPolynomial]:
        """Polynomials ``c_t`` with ``[d**(2 delta - t)] N_delta(d) = 3**delta/delta! c_t(delta)``."""
        start = max(initial_delta(t, self.N) for t in self.types) + 1
        cache: dict[int, list[Fraction]] = {}

        def normalized_total(dl):
            if dl not in cache:
                scale = Fraction(factorial(dl), 3**dl)
                cache[dl] = [x * scale for x in self.coefficient_values(dl)]
            return cache[dl]

        return [
            _fit_sequence(lambda dl, t=t: normalized_total(dl)[t], start, range(t, 2 * self.N + 1), f"coefficient {t}")
            for t in range(self.N)
        ]


def _fit_sequence(value, start: int, degrees: range, label: str, checks: int = 2) -> RationalPolynomial:
    """Polynomial matching ``value(start), value(start + 1), ...``.

    Each candidate degree bound ``D`` in ``degrees`` is tried in turn: the
    polynomial through ``D + 1`` consecutive values is accepted once it also
    matches ``checks`` further values.  The values come from the exact
    first-order recursion in ``delta``, so this is the bounded-degree linear
    solve of the difference equation together with its initial condition.
    """
    samples: list[Fraction] = []

    def sample(k):
        while len(samples) <= k:
            samples.append(value(start + len(samples)))
        return samples[k]

    for deg in degrees:
        xs = list(range(start, start + deg + 1))
        p = interpolate(xs, [sample(x - start) for x in xs])
        if all(p(start + deg + 1 + c) == sample(deg + 1 + c) for c in range(checks)):
            return p
    raise ConjectureViolation(f"{label}: no polynomial of degree <= {degrees[-1]} fits")


# -- functional front end --------------------------------------------------------

_ENGINES: dict[tuple[int, int], CoefficientEngine] = {}


def _engine(N: int, store: TemplateStore | None) -> CoefficientEngine:
    store = store or default_store()
    key = (N, id(store))
    if key not in _ENGINES:
        _ENGINES[key] = CoefficientEngine(N, store)
    return _ENGINES[key]


def build_M(i: int, a: int, size: int, end_variant: bool = False, N: int | None = None, store=None) -> SummationMatrix:
    """Limit-independent top ``size`` rows of ``M_i(a)`` (or its end variant)."""
    N = N or max(i, size)
    return _engine(N, store).matrix(i, a, size, end_variant)


def initial_vector(tau: Sequence[int], N: int, store=None) -> list[Fraction]:
    eng = _engine(N, store)
    tau = tuple(tau) + (0,) * (N - 1 - len(tau))
    return eng.direct_vector(tau, initial_delta(tau, N))


def solve_type_recursion(tau: Sequence[int], N: int, store=None, verify: bool = True) -> list[RationalPolynomial]:
    eng = _engine(N, store)
    tau = tuple(tau) + (0,) * (N - 1 - len(tau))
    polys = eng.solve(tau)
    if verify:
        d0 = initial_delta(tau, N)
        for dl in (d0 + 1, d0 + 2):
            direct = eng.direct_vector(tau, dl)
            scale = Fraction(3**dl, factorial(dl))
            if [p(dl) * scale for p in polys] != direct:
                raise InternalConsistencyError(f"type {tau}: recursion disagrees with direct evaluation at {dl}")
    return polys


def leading_coefficients(N: int, store=None) -> list[RationalPolynomial]:
    return _engine(N, store).leading_coefficients()


def _drop_root(p: RationalPolynomial, r: int) -> RationalPolynomial:
    # synthetic division by (x - r), remainder known to vanish
    desc = p.descending()
    out = [desc[0]]
    for c in desc[1:-1]:
        out.append(c + out[-1] * r)
    return RationalPolynomial.from_descending(out)


def render_factored(p: RationalPolynomial, var: str = "δ") -> str:
    """``p`` as ``sign * c * var(var-1)...(integer polynomial) / den``, pulling
    out the roots ``0, 1, 2, ...`` in turn."""
    if p.is_zero:
        return "0"
    roots = 0
    while p.degree > 0 and p(roots) == 0:
        p = _drop_root(p, roots)
        roots += 1
    den = 1
    for c in p.coeffs:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in p.descending()]
    content = 0
    for c in ints:
        content = gcd(content, c)
    if ints[0] < 0:
        content = -content
    ints = [c // content for c in ints]
    scale = Fraction(content, den)
    factors = [var if r == 0 else f"({var}-{r})" for r in range(roots)]
    if len(ints) > 1:
        inner = RationalPolynomial.from_descending(ints).format(var).replace("*", "").replace(" ", "")
        factors.append(f"({inner})")
    body = "".join(factors)
    sign = "-" if scale < 0 else ""
    num, dn = abs(scale.numerator), scale.denominator
    if not body:
        text = str(num)
    else:
        text = body if num == 1 else f"{num}{body}"
    return sign + (text if dn == 1 else f"{text}/{dn}")


def format_leading_coefficients(coeffs: Sequence[RationalPolynomial], var: str = "δ") -> str:
    """One line per coefficient, ``d^(2δ-t): <factored polynomial in δ>``."""
    lines = []
    for t, c in enumerate(coeffs):
        mono = f"d^(2{var})" if t == 0 else f"d^(2{var}-{t})"
        lines.append(f"{mono}: {render_factored(c, var)}")
    return "\n".join(lines)
