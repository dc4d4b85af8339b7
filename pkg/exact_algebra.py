#!/usr/bin/env python3
"""
Exact Algebra Layer
Rational, polynomial and quadratic-surd arithmetic with certified real-root isolation
"""

import logging
from dataclasses import dataclass
from math import isqrt
from typing import List, Optional, Sequence, Tuple, Union

import sympy as sp
from sympy.ntheory.factor_ import core

logger = logging.getLogger(__name__)

# Working variable c = cot(psi) shared by every edge computation
CVAR = sp.Symbol("c", real=True)

Rational = sp.Rational
Poly = sp.Poly

# Isolating intervals are refined to at most this width
ISOLATION_WIDTH = sp.Rational(1, 2 ** 40)


class TriadError(Exception):
    """Base class for every error raised by the classification engine"""


class ExactAlgebraError(TriadError):
    """Raised on invalid exact-arithmetic requests"""


def to_rational(value) -> sp.Rational:
    """Convert ints, strings like '3/2' and sympy numbers to a reduced Rational"""
    try:
        result = sp.Rational(value)
    except (TypeError, ValueError) as e:
        raise ExactAlgebraError(f"not a rational number: {value!r}") from e
    return result


def coefficient_domain(symbols: Sequence[sp.Symbol] = ()):
    """QQ for concrete data, QQ(params) when multiplicities stay symbolic"""
    if not symbols:
        return sp.QQ
    return sp.QQ.frac_field(*symbols)


def make_poly(expr, domain=sp.QQ, var: sp.Symbol = CVAR) -> sp.Poly:
    """Build a univariate polynomial in var over the given coefficient domain"""
    return sp.Poly(expr, var, domain=domain)


def poly_from_coeffs(coeffs: Sequence, var: sp.Symbol = CVAR) -> sp.Poly:
    """Ascending coefficient list to Poly over QQ"""
    terms = [to_rational(a) * var ** i for i, a in enumerate(coeffs)]
    return sp.Poly(sum(terms, sp.Integer(0)), var, domain=sp.QQ)


def poly_gcd(p: sp.Poly, q: sp.Poly) -> sp.Poly:
    """Monic greatest common divisor"""
    if p.is_zero and q.is_zero:
        raise ExactAlgebraError("undefined gcd")
    g = p.gcd(q)
    return g.monic()


def exact_quotient(p: sp.Poly, q: sp.Poly) -> sp.Poly:
    """Division that must leave no remainder"""
    quotient, remainder = p.div(q)
    if not remainder.is_zero:
        raise ExactAlgebraError(f"{q.as_expr()} does not divide {p.as_expr()}")
    return quotient


def squarefree_part(p: sp.Poly) -> sp.Poly:
    """p / gcd(p, p'), monic"""
    if p.is_zero:
        raise ExactAlgebraError("squarefree part of the zero polynomial")
    if p.degree() <= 0:
        return p.one
    return p.sqf_part().monic()


def is_squarefree(p: sp.Poly) -> bool:
    if p.is_zero:
        return False
    if p.degree() <= 0:
        return True
    return p.gcd(p.diff()).degree() == 0


def strip_factors(p: sp.Poly, blockers: sp.Poly) -> sp.Poly:
    """Divide out of p every factor it shares with blockers (pole removal)"""
    if p.is_zero or blockers.is_zero:
        return p
    while True:
        g = p.gcd(blockers)
        if g.degree() <= 0:
            return p
        p = exact_quotient(p, g)


@dataclass(frozen=True)
class RationalFn:
    """Reduced quotient num/den with a monic denominator"""
    num: sp.Poly
    den: sp.Poly

    @classmethod
    def make(cls, num: sp.Poly, den: sp.Poly) -> "RationalFn":
        if den.is_zero:
            raise ExactAlgebraError("zero denominator")
        num, den = num.unify(den)
        if num.is_zero:
            return cls(num, den.one)
        g = num.gcd(den)
        if g.degree() > 0:
            num = exact_quotient(num, g)
            den = exact_quotient(den, g)
        lc = den.LC()
        return cls(num.quo_ground(lc), den.quo_ground(lc))

    @classmethod
    def constant(cls, value, domain=sp.QQ) -> "RationalFn":
        return cls.make(make_poly(value, domain), make_poly(1, domain))

    @classmethod
    def from_poly(cls, p: sp.Poly) -> "RationalFn":
        return cls.make(p, p.one)

    @classmethod
    def from_expr(cls, expr, domain=sp.QQ) -> "RationalFn":
        num, den = sp.fraction(sp.together(sp.sympify(expr)))
        return cls.make(make_poly(num, domain), make_poly(den, domain))

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def domain(self):
        return self.num.get_domain()

    def set_domain(self, domain) -> "RationalFn":
        return RationalFn.make(self.num.set_domain(domain), self.den.set_domain(domain))

    def __add__(self, other: "RationalFn") -> "RationalFn":
        return RationalFn.make(self.num * other.den + other.num * self.den, self.den * other.den)

    def __sub__(self, other: "RationalFn") -> "RationalFn":
        return self + (-other)

    def __neg__(self) -> "RationalFn":
        return RationalFn(-self.num, self.den)

    def __mul__(self, other: "RationalFn") -> "RationalFn":
        return RationalFn.make(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "RationalFn") -> "RationalFn":
        if other.is_zero:
            raise ExactAlgebraError("division by the zero function")
        return RationalFn.make(self.num * other.den, self.den * other.num)

    def reciprocal(self) -> "RationalFn":
        return RationalFn.constant(1, self.domain) / self

    def scale(self, coeff) -> "RationalFn":
        """Multiply by a constant (Rational or a sympy expression in parameters)"""
        coeff = sp.sympify(coeff)
        base = self
        known = set(getattr(self.domain, "symbols", ()))
        if coeff.free_symbols - known:
            symbols = sorted(coeff.free_symbols | known, key=str)
            base = self.set_domain(coefficient_domain(symbols))
        factor = make_poly(coeff, base.domain)
        return RationalFn.make(base.num * factor, base.den)

    def evaluate(self, x) -> sp.Rational:
        """Exact value at a rational point"""
        d = self.den.eval(x)
        if d == 0:
            raise ExactAlgebraError(f"pole at c = {x}")
        return self.num.eval(x) / d

    def evaluate_float(self, x: float) -> float:
        d = float(self.den.eval(x))
        return float(self.num.eval(x)) / d

    def as_expr(self) -> sp.Expr:
        return self.num.as_expr() / self.den.as_expr()

    def __str__(self) -> str:
        return str(sp.factor(self.as_expr()))


@dataclass(frozen=True)
class QuadraticSurd:
    """Exact number a + b*sqrt(d) with d square-free"""
    a: sp.Rational
    b: sp.Rational = sp.Integer(0)
    d: int = 0

    @classmethod
    def make(cls, a, b=0, d: int = 0) -> "QuadraticSurd":
        a, b, d = to_rational(a), to_rational(b), int(d)
        if d < 0:
            raise ExactAlgebraError(f"negative radicand {d}")
        if b == 0 or d == 0:
            return cls(a, sp.Integer(0), 0)
        free = int(core(d))
        b = b * isqrt(d // free)
        if free == 1:
            return cls(a + b, sp.Integer(0), 0)
        return cls(a, b, free)

    @classmethod
    def from_expr(cls, expr) -> "QuadraticSurd":
        """Read a sympy expression of the form p + q*sqrt(r)"""
        expr = sp.radsimp(sp.nsimplify(sp.sympify(expr)))
        if expr.is_Rational:
            return cls.make(expr)
        a, rest = expr.as_coeff_Add()
        b, root = rest.as_coeff_Mul()
        radicand = sp.simplify(root ** 2)
        if not (a.is_Rational and b.is_Rational and radicand.is_Integer):
            raise ExactAlgebraError(f"not a quadratic surd: {expr}")
        return cls.make(a, b, int(radicand))

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def _coerce(self, other) -> "QuadraticSurd":
        if isinstance(other, QuadraticSurd):
            if other.d and self.d and other.d != self.d:
                raise ExactAlgebraError("surds from different quadratic fields")
            return other
        return QuadraticSurd.make(other)

    def _field(self, other: "QuadraticSurd") -> int:
        return self.d or other.d

    def __add__(self, other) -> "QuadraticSurd":
        other = self._coerce(other)
        return QuadraticSurd.make(self.a + other.a, self.b + other.b, self._field(other))

    __radd__ = __add__

    def __neg__(self) -> "QuadraticSurd":
        return QuadraticSurd(-self.a, -self.b, self.d)

    def __sub__(self, other) -> "QuadraticSurd":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "QuadraticSurd":
        return self._coerce(other) - self

    def __mul__(self, other) -> "QuadraticSurd":
        other = self._coerce(other)
        d = self._field(other)
        return QuadraticSurd.make(
            self.a * other.a + self.b * other.b * d,
            self.a * other.b + self.b * other.a,
            d,
        )

    __rmul__ = __mul__

    def inverse(self) -> "QuadraticSurd":
        norm = self.a ** 2 - self.b ** 2 * self.d
        if norm == 0:
            raise ExactAlgebraError("division by zero surd")
        return QuadraticSurd.make(self.a / norm, -self.b / norm, self.d)

    def __truediv__(self, other) -> "QuadraticSurd":
        return self * self._coerce(other).inverse()

    def sign(self) -> int:
        """Exact sign of a + b*sqrt(d)"""
        a, b = self.a, self.b
        if b == 0:
            return int(sp.sign(a))
        if a >= 0 and b > 0:
            return 1
        if a <= 0 and b < 0:
            return -1
        gap = a ** 2 - b ** 2 * self.d
        return int(sp.sign(gap)) if a > 0 else -int(sp.sign(gap))

    def compare(self, other) -> int:
        return (self - self._coerce(other)).sign()

    def __lt__(self, other) -> bool:
        return self.compare(other) < 0

    def __le__(self, other) -> bool:
        return self.compare(other) <= 0

    def __gt__(self, other) -> bool:
        return self.compare(other) > 0

    def __ge__(self, other) -> bool:
        return self.compare(other) >= 0

    def eval_poly(self, p: sp.Poly) -> "QuadraticSurd":
        """Horner evaluation of a QQ polynomial at this surd"""
        acc = QuadraticSurd.make(0, 0, self.d)
        for coeff in p.all_coeffs():
            acc = acc * self + QuadraticSurd.make(coeff)
        return acc

    def to_sympy(self) -> sp.Expr:
        return self.a + self.b * sp.sqrt(self.d)

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * float(self.d) ** 0.5

    def __str__(self) -> str:
        if self.is_rational:
            return str(self.a)
        sign = "+" if self.b > 0 else "-"
        return _format_surd(self.a, abs(self.b), self.d, sign)


def _format_surd(a: sp.Rational, b: sp.Rational, d: int, sign: str) -> str:
    """Common-denominator form '(aL<sign>bL*sqrt(d))/L'"""
    lcm = sp.ilcm(sp.Rational(a).q, sp.Rational(b).q)
    al, bl = a * lcm, b * lcm
    radical = f"sqrt({d})" if bl == 1 else f"{bl}*sqrt({d})"
    if al == 0:
        body = radical if sign == "+" else f"{sign}{radical}"
    else:
        body = f"{al}{sign}{radical}"
    if lcm == 1:
        return body
    return f"({body})/{lcm}"


def format_surd_pair(first: QuadraticSurd, second: QuadraticSurd) -> str:
    """Render conjugate roots as '(4±sqrt(13))/3'"""
    if first.d != second.d or first.a != second.a or first.b != -second.b:
        return f"{first}, {second}"
    if first.is_rational:
        return str(first)
    return _format_surd(first.a, abs(first.b), first.d, "±")


Endpoint = Union[sp.Rational, sp.Expr, QuadraticSurd]


def _is_inf(x, positive: bool) -> bool:
    if isinstance(x, QuadraticSurd):
        return False
    return x == (sp.oo if positive else -sp.oo)


def compare_points(x: Endpoint, y: Endpoint) -> int:
    """Sign of x - y for rationals, surds and infinities"""
    if _is_inf(x, True):
        return 0 if _is_inf(y, True) else 1
    if _is_inf(x, False):
        return 0 if _is_inf(y, False) else -1
    if _is_inf(y, True):
        return -1
    if _is_inf(y, False):
        return 1
    if isinstance(x, QuadraticSurd):
        return x.compare(y)
    if isinstance(y, QuadraticSurd):
        return -y.compare(x)
    return int(sp.sign(sp.Rational(x) - sp.Rational(y)))


def point_to_float(x: Endpoint) -> float:
    if _is_inf(x, True):
        return float("inf")
    if _is_inf(x, False):
        return float("-inf")
    return float(x)


@dataclass(frozen=True)
class Interval:
    """Open interval; endpoints are Rational, QuadraticSurd or +/-oo"""
    lo: Endpoint
    hi: Endpoint

    def __post_init__(self):
        if compare_points(self.lo, self.hi) >= 0:
            raise ExactAlgebraError(f"empty interval ({self.lo}, {self.hi})")

    @classmethod
    def real_line(cls) -> "Interval":
        return cls(-sp.oo, sp.oo)

    def contains(self, x: Endpoint) -> bool:
        return compare_points(self.lo, x) < 0 < compare_points(self.hi, x)

    def contains_interval(self, other: "Interval") -> bool:
        return compare_points(self.lo, other.lo) <= 0 and compare_points(other.hi, self.hi) <= 0

    @property
    def midpoint(self) -> float:
        return (point_to_float(self.lo) + point_to_float(self.hi)) / 2

    @property
    def width(self) -> float:
        return point_to_float(self.hi) - point_to_float(self.lo)

    def __str__(self) -> str:
        return f"({self.lo}, {self.hi})"


def _sign_at(p: sp.Poly, x: Endpoint) -> int:
    """Exact sign of p at a finite or infinite point"""
    if p.is_zero:
        return 0
    if _is_inf(x, True):
        return int(sp.sign(p.LC()))
    if _is_inf(x, False):
        return int(sp.sign(p.LC())) * (-1 if p.degree() % 2 else 1)
    if isinstance(x, QuadraticSurd):
        return x.eval_poly(p).sign()
    return int(sp.sign(p.eval(x)))


def _variations(chain: Sequence[sp.Poly], x: Endpoint) -> int:
    signs = [s for s in (_sign_at(q, x) for q in chain) if s != 0]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def _straddles_root(p: sp.Poly, lo, hi, e: Endpoint) -> bool:
    if _is_inf(e, True) or _is_inf(e, False):
        return False
    return compare_points(lo, e) < 0 < compare_points(hi, e) and _sign_at(p, e) == 0


def _require_squarefree(p: sp.Poly) -> None:
    if p.is_zero:
        raise ExactAlgebraError("zero polynomial has no isolated roots")
    if not is_squarefree(p):
        raise ExactAlgebraError("polynomial is not squarefree; take squarefree_part first")


def sturm_count(p: sp.Poly, iv: Interval) -> int:
    """Number of real roots of a squarefree p strictly inside iv"""
    _require_squarefree(p)
    if p.degree() <= 0:
        return 0
    chain = sp.sturm(p)
    count = _variations(chain, iv.lo) - _variations(chain, iv.hi)
    if _sign_at(p, iv.hi) == 0:
        count -= 1
    return count


def _root_interval(p: sp.Poly, lo: sp.Rational, hi: sp.Rational) -> Tuple[sp.Rational, sp.Rational]:
    """Widen an exact rational root into a sign-changing isolating interval"""
    if lo != hi:
        return lo, hi
    r, delta = lo, ISOLATION_WIDTH / 2
    while True:
        a, b = r - delta, r + delta
        if _sign_at(p, a) * _sign_at(p, b) < 0 and sturm_count(p, Interval(a, b)) == 1:
            return a, b
        delta /= 2


def _refine(p: sp.Poly, lo: sp.Rational, hi: sp.Rational) -> Tuple[sp.Rational, sp.Rational]:
    """Bisect an isolating interval once, keeping the half with the sign change"""
    mid = (lo + hi) / 2
    s_mid = _sign_at(p, mid)
    if s_mid == 0:
        return _root_interval(p, mid, mid)
    if _sign_at(p, lo) * s_mid < 0:
        return lo, mid
    return mid, hi


def isolate_real_roots(p: sp.Poly, iv: Optional[Interval] = None) -> List[Interval]:
    """Disjoint rational isolating intervals, ascending, for the roots of p inside iv"""
    _require_squarefree(p)
    iv = iv or Interval.real_line()
    if p.degree() <= 0:
        return []

    result: List[Interval] = []
    for (lo, hi), _mult in p.intervals(eps=ISOLATION_WIDTH):
        lo, hi = sp.Rational(lo), sp.Rational(hi)
        if lo == hi and not iv.contains(lo):
            continue
        lo, hi = _root_interval(p, lo, hi)
        # decide membership against possibly irrational endpoints
        while True:
            if compare_points(hi, iv.lo) <= 0 or compare_points(lo, iv.hi) >= 0:
                break
            if iv.contains_interval(Interval(lo, hi)):
                result.append(Interval(lo, hi))
                break
            if any(_straddles_root(p, lo, hi, e) for e in (iv.lo, iv.hi)):
                # the unique root is the open endpoint itself
                break
            lo, hi = _refine(p, lo, hi)

    for found in result:
        if _sign_at(p, found.lo) * _sign_at(p, found.hi) >= 0:
            raise ExactAlgebraError(f"isolating interval {found} lost its sign change")
    logger.debug(f"isolated {len(result)} roots of {p.as_expr()} in {iv}")
    return sorted(result, key=lambda i: i.midpoint)


@dataclass(frozen=True)
class SurdRoot:
    """Exact root of a polynomial of degree <= 2"""
    value: QuadraticSurd
    multiplicity: int = 1

    def __float__(self) -> float:
        return float(self.value)


def solve_quadratic_exact(p: sp.Poly) -> List[SurdRoot]:
    """Exact real roots of a QQ polynomial of degree at most two, ascending"""
    if p.is_zero:
        raise ExactAlgebraError("zero polynomial has every number as a root")
    if p.degree() > 2:
        raise ExactAlgebraError("use isolation")
    if p.degree() <= 0:
        return []
    coeffs = [sp.Rational(a) for a in p.all_coeffs()]
    if p.degree() == 1:
        a, b = coeffs
        return [SurdRoot(QuadraticSurd.make(-b / a))]

    a, b, c = coeffs
    disc = b ** 2 - 4 * a * c
    if disc < 0:
        return []
    center = -b / (2 * a)
    if disc == 0:
        return [SurdRoot(QuadraticSurd.make(center), multiplicity=2)]
    # sqrt(p/q) = sqrt(p*q)/q
    radicand = disc.p * disc.q
    spread = sp.Rational(1, 2 * disc.q) / abs(a)
    roots = [
        SurdRoot(QuadraticSurd.make(center, -spread, radicand)),
        SurdRoot(QuadraticSurd.make(center, spread, radicand)),
    ]
    return sorted(roots, key=float)


def content_free(p: sp.Poly) -> sp.Poly:
    """Integer-coefficient primitive form with positive leading coefficient"""
    if p.is_zero:
        return p
    _, prim = p.clear_denoms()
    prim = prim.primitive()[1]
    if prim.LC() < 0:
        prim = -prim
    return prim
