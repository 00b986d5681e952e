"""
Laurent polynomials in A, evaluation contexts and the quantum-integer ladder.

Two contexts are used throughout the package:

* ``GenericParams`` - exact arithmetic in the rational function field Q(A)
  (sympy ``FracField``), used for polynomial identities.
* ``RootParams`` - complex double precision at A = exp(i*pi/2r), used for
  everything evaluated at a level r.

Both expose the same small interface (``A``, ``d``, ``one``, ``zero``,
``lift``, ``delta``, ``is_zero``, ``close``) so the tangle and recoupling code
is written once.
"""

import cmath
import math
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from fractions import Fraction
from typing import Dict, Iterator, Optional, Tuple, Union

import numpy as np
from sympy import ZZ, Add, Expr, Poly, Rational, Symbol, cyclotomic_poly, expand, sstr, sympify
from sympy.polys.fields import field

from virtual_wrt.config.settings import settings
from virtual_wrt.errors import DomainError

# Q(A) with integer-polynomial numerators and denominators
FIELD, A_GENERIC = field("A", ZZ)
A_SYMBOL = FIELD.symbols[0]
T_SYMBOL = Symbol("t")
_X = Symbol("x")


class LaurentPoly:
    """
    Integer Laurent polynomial in A.

    The value is an element of ``FIELD`` whose denominator is a unit monomial;
    ring operations and printing are sympy's.
    """

    __slots__ = ("value",)

    def __init__(self, terms: Optional[Dict[int, int]] = None, *, value=None):
        if value is None:
            terms = {int(e): int(c) for e, c in (terms or {}).items() if c}
            low = min(terms, default=0)
            numer = FIELD.ring.from_dict({(e - low,): c for e, c in terms.items()})
            value = FIELD.new(numer) * A_GENERIC ** low
        _check_laurent(value)
        self.value = value

    @classmethod
    def monomial(cls, exp: int, coeff: int = 1) -> "LaurentPoly":
        return cls({exp: coeff})

    @classmethod
    def constant(cls, c: int) -> "LaurentPoly":
        return cls({0: c})

    @property
    def terms(self) -> Dict[int, int]:
        (shift,), sign = self.value.denom.terms()[0]
        return {e - shift: int(c) * int(sign) for (e,), c in self.value.numer.terms()}

    def items(self) -> Iterator[Tuple[int, int]]:
        return iter(sorted(self.terms.items(), reverse=True))

    def is_zero(self) -> bool:
        return not self.value.numer

    def degree_span(self) -> Tuple[int, int]:
        terms = self.terms
        if not terms:
            return (0, 0)
        return (min(terms), max(terms))

    # --- ring operations ---
    @staticmethod
    def _coerce(other):
        if isinstance(other, LaurentPoly):
            return other.value
        if isinstance(other, int):
            return FIELD(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return LaurentPoly(value=self.value + other)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(value=-self.value)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return LaurentPoly(value=self.value - other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return LaurentPoly(value=self.value * other)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0 and self.is_zero():
            raise ValueError("zero has no Laurent inverse")
        return LaurentPoly(value=self.value ** n)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return not (self.value - other).numer

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # --- substitutions ---
    def as_expr(self) -> Expr:
        """The polynomial as an expanded sympy expression in ``A_SYMBOL``."""
        return expand(self.value.as_expr())

    def mirror(self) -> "LaurentPoly":
        """A -> A^-1."""
        return LaurentPoly(value=FIELD.from_expr(self.as_expr().subs(A_SYMBOL, 1 / A_SYMBOL)))

    def evaluate(self, a: complex) -> complex:
        terms = self.terms
        if not terms:
            return 0j
        exps = np.array(list(terms.keys()), dtype=np.int64)
        coeffs = np.array(list(terms.values()), dtype=np.float64)
        return complex(np.sum(coeffs * np.power(np.complex128(a), exps)))

    def to_field(self):
        return self.value

    @classmethod
    def from_field(cls, value) -> "LaurentPoly":
        """Wrap a Q(A) element whose denominator is a unit monomial."""
        return cls(value=value)

    def to_json(self) -> Dict[str, int]:
        return {str(e): c for e, c in self.items()}

    def __repr__(self):
        return f"LaurentPoly({self.terms!r})"

    def __str__(self):
        return sstr(self.as_expr())


def _check_laurent(value) -> None:
    dterms = value.denom.terms()
    if len(dterms) != 1 or abs(dterms[0][1]) != 1:
        raise ValueError(f"not a Laurent polynomial: {value.as_expr()}")


A = LaurentPoly.monomial(1)
D_POLY = -(A ** 2) - A ** -2


class JonesPoly:
    """V(t) as an expanded sympy expression; exponents of t are multiples of 1/4."""

    def __init__(self, expr: Union[Expr, Dict[Fraction, int]]):
        if isinstance(expr, dict):
            expr = Add(*(c * T_SYMBOL ** Rational(Fraction(e).numerator, Fraction(e).denominator)
                         for e, c in expr.items()))
        self.expr = expand(sympify(expr))

    @classmethod
    def from_bracket_variable(cls, p: LaurentPoly) -> "JonesPoly":
        return cls(p.as_expr().subs(A_SYMBOL, T_SYMBOL ** Rational(-1, 4)))

    @property
    def terms(self) -> Dict[Fraction, int]:
        out: Dict[Fraction, int] = {}
        for mono, c in self.expr.as_coefficients_dict().items():
            exp = Rational(0) if mono.is_number else Rational(mono.as_base_exp()[1])
            out[Fraction(int(exp.p), int(exp.q))] = int(c)
        return {e: c for e, c in out.items() if c}

    def __eq__(self, other):
        return isinstance(other, JonesPoly) and expand(self.expr - other.expr) == 0

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def to_json(self) -> Dict[str, int]:
        return {str(e): c for e, c in sorted(self.terms.items(), reverse=True)}

    def __str__(self):
        return sstr(self.expr)


# --- evaluation contexts ---

class GenericParams:
    """Exact context: values live in Q(A)."""

    generic = True

    def __init__(self):
        self.A = A_GENERIC
        self.d = -(A_GENERIC ** 2) - A_GENERIC ** -2
        self.one = FIELD.one
        self.zero = FIELD.zero

    def lift(self, p: LaurentPoly):
        return p.to_field()

    def scalar(self, c):
        return FIELD(c)

    def delta(self, n: int):
        return delta_poly(n).to_field()

    def is_zero(self, x) -> bool:
        return x == 0

    def close(self, x, y) -> bool:
        return x == y

    def __repr__(self):
        return "GenericParams()"


GENERIC = GenericParams()


@dataclass(frozen=True)
class RootParams:
    """Evaluation at A = exp(i*pi/2r)."""

    r: int
    tolerance: float = dc_field(default_factory=lambda: settings.tolerance)

    generic = False

    def __post_init__(self):
        if self.r < 2:
            raise DomainError(f"level r must be >= 2, got {self.r}")

    @property
    def A(self) -> complex:
        return cmath.exp(1j * math.pi / (2 * self.r))

    @property
    def d(self) -> complex:
        return -(self.A ** 2) - self.A ** -2

    @property
    def one(self) -> complex:
        return 1 + 0j

    @property
    def zero(self) -> complex:
        return 0j

    @property
    def mu(self) -> complex:
        return complex(math.sqrt(2 / self.r) * math.sin(math.pi / self.r))

    @property
    def alpha(self) -> complex:
        r = self.r
        return (-1j) ** (r - 2) * cmath.exp(1j * math.pi * 3 * (r - 2) / (4 * r))

    @property
    def max_color(self) -> int:
        return self.r - 2

    def lift(self, p: LaurentPoly) -> complex:
        return reduce_at_root(p, self.r).evaluate(self.A)

    def scalar(self, c) -> complex:
        return complex(c)

    def delta(self, n: int) -> complex:
        return delta(n, self)

    def is_zero(self, x) -> bool:
        return abs(x) < self.tolerance

    def close(self, x, y) -> bool:
        return close(x, y, self.tolerance)


Context = Union[GenericParams, RootParams]


def close(x: complex, y: complex, tol: Optional[float] = None) -> bool:
    """Absolute tolerance on both real and imaginary parts."""
    tol = settings.tolerance if tol is None else tol
    x, y = complex(x), complex(y)
    return abs(x.real - y.real) <= tol and abs(x.imag - y.imag) <= tol


# --- quantum integers ---

def delta_poly(n: int) -> LaurentPoly:
    if n < -1:
        raise DomainError(f"delta index must be >= -1, got {n}")
    sign = -1 if n % 2 else 1
    return LaurentPoly({2 * n - 4 * k: sign for k in range(n + 1)})


def delta(n: int, ctx: Optional[Context] = None):
    """Delta_n; a LaurentPoly without a context, a complex at a root of unity."""
    if ctx is None or getattr(ctx, "generic", False):
        return delta_poly(n)
    if n < -1:
        raise DomainError(f"delta index must be >= -1, got {n}")
    r = ctx.r
    sign = -1 if n % 2 else 1
    return complex(sign * math.sin((n + 1) * math.pi / r) / math.sin(math.pi / r))


def qint(n: int, ctx: Optional[Context] = None):
    value = delta(n - 1, ctx)
    return -value if (n - 1) % 2 else value


def qfact(m: int, ctx: Optional[Context] = None):
    if m < 0:
        raise DomainError(f"quantum factorial of negative argument {m}")
    if isinstance(ctx, RootParams) and m > ctx.r - 1:
        raise DomainError(f"[{m}]! undefined at level r={ctx.r} (needs m <= {ctx.r - 1})")
    result = LaurentPoly.constant(1) if ctx is None or getattr(ctx, "generic", False) else 1 + 0j
    for k in range(1, m + 1):
        result = result * qint(k, ctx)
    return result


def eval_poly(p: LaurentPoly, ctx: RootParams) -> complex:
    return ctx.lift(p)


@lru_cache(maxsize=None)
def _cyclotomic(r: int) -> Poly:
    return Poly(cyclotomic_poly(4 * r, _X), _X, domain=ZZ)


def reduce_at_root(p: LaurentPoly, r: int) -> LaurentPoly:
    """
    Exact representative of p(A) at A = exp(i*pi/2r) with exponents in
    [0, phi(4r)): fold with A^(2r) = -1, then reduce modulo the 4r-th
    cyclotomic polynomial.
    """
    folded: Dict[int, int] = {}
    for e, c in p.terms.items():
        q, k = divmod(e, 2 * r)
        folded[k] = folded.get(k, 0) + (-c if q % 2 else c)
    if not any(folded.values()):
        return LaurentPoly()
    poly = Poly.from_dict({(k,): c for k, c in folded.items() if c}, _X, domain=ZZ)
    rem = poly.rem(_cyclotomic(r))
    return LaurentPoly({k: int(c) for (k,), c in rem.terms()})
