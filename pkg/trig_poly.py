#!/usr/bin/env python3
"""
Trigonometric Rational Functions
cot/tan of multiples of ψ as exact rational functions of c = cot ψ
"""

import itertools
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import sympy as sp

from exact_algebra import CVAR, RationalFn, TriadError, make_poly, squarefree_part
from orbit_strata import AngleForm, cot_pi_fraction, tan_pi_fraction

logger = logging.getLogger(__name__)

TRIG_KINDS = ("cot", "tan")


class TrigPolyError(TriadError):
    """Raised for singular or inconsistent trigonometric terms"""


@lru_cache(maxsize=64)
def _cot_positive(j: int) -> RationalFn:
    c = RationalFn.from_poly(make_poly(CVAR))
    one = RationalFn.constant(1)
    result = c
    for _ in range(j - 1):
        # cot((k+1)ψ) = (cot(kψ)·c − 1)/(cot(kψ) + c)
        result = (result * c - one) / (result + c)
    return result


def cot_multiple(j: int) -> RationalFn:
    """cot(jψ) in c = cot ψ; negative j uses cot(−x) = −cot x"""
    if j == 0:
        raise TrigPolyError("cot(0) is singular")
    if j < 0:
        return -_cot_positive(-j)
    return _cot_positive(j)


def tan_multiple(j: int) -> RationalFn:
    return cot_multiple(j).reciprocal()


@dataclass(frozen=True)
class TrigTerm:
    kind: str
    angle: AngleForm
    edge_id: Optional[str] = None

    def __post_init__(self):
        if self.kind not in TRIG_KINDS:
            raise TrigPolyError(f"unknown trig kind {self.kind!r}")


def _quarter_turn(base: RationalFn, quarters: sp.Rational) -> RationalFn:
    """cot(quarters·π/2 + x) from cot x, for quarters in {0, 1/2, 1, 3/2}"""
    one = RationalFn.constant(1, base.domain)
    if quarters == 0:
        return base
    if quarters == 1:
        return -base.reciprocal()
    if quarters == sp.Rational(1, 2):
        return (base - one) / (base + one)
    if quarters == sp.Rational(3, 2):
        return (base + one) / (one - base)
    raise TrigPolyError(f"offset {quarters}·π/2 is not a multiple of π/4")


def eval_trig_term(term: TrigTerm) -> RationalFn:
    """cot or tan of k·π/2 + jψ as a rational function of c"""
    angle = term.angle
    if angle.is_constant:
        raise TrigPolyError("singular term reached evaluator")
    # cot has period π, i.e. two half-turn units
    offset = sp.Rational(angle.halfpi_k) % 2
    cot = _quarter_turn(cot_multiple(angle.step_j), offset)
    return cot if term.kind == "cot" else cot.reciprocal()


def constant_trig_value(term: TrigTerm) -> sp.Rational:
    """Exact value of a constant, non-singular cot/tan term"""
    r = term.angle.offset_over_pi
    value = cot_pi_fraction(r) if term.kind == "cot" else tan_pi_fraction(r)
    if value is None:
        raise TrigPolyError(f"{term.kind}({r}π) is a pole")
    if not value.is_rational:
        raise TrigPolyError(f"{term.kind}({r}π) = {value} is irrational")
    return value.a


def trig_value(term: TrigTerm) -> RationalFn:
    if term.angle.is_constant:
        return RationalFn.constant(constant_trig_value(term))
    return eval_trig_term(term)


@dataclass(frozen=True)
class TrigRationalFn:
    """Vector of rational functions in c over the coordinate basis of 𝔞"""
    components: Tuple[RationalFn, ...]
    edge_id: Optional[str] = None
    poles: Tuple[sp.Poly, ...] = field(default=())

    @classmethod
    def zero(cls, dim: int, edge_id: Optional[str] = None) -> "TrigRationalFn":
        return cls(tuple(RationalFn.constant(0) for _ in range(dim)), edge_id)

    @property
    def dim(self) -> int:
        return len(self.components)

    @property
    def is_zero(self) -> bool:
        return all(comp.is_zero for comp in self.components)

    def __add__(self, other: "TrigRationalFn") -> "TrigRationalFn":
        if self.edge_id and other.edge_id and self.edge_id != other.edge_id:
            raise TrigPolyError(f"cannot add functions of {self.edge_id} and {other.edge_id}")
        return TrigRationalFn(
            tuple(a + b for a, b in zip(self.components, other.components)),
            self.edge_id or other.edge_id,
            self.poles + other.poles,
        )

    def dot(self, gram: sp.Matrix, vector: Sequence) -> RationalFn:
        """⟨self, v⟩ through the gram matrix"""
        weights = gram * sp.Matrix(list(vector))
        total = RationalFn.constant(0)
        for comp, w in zip(self.components, weights):
            if w != 0 and not comp.is_zero:
                total = total + comp.scale(w)
        return total

    def pole_polynomial(self) -> sp.Poly:
        """Squarefree product of every denominator met while building the vector"""
        product = make_poly(1, self.components[0].domain if self.components else sp.QQ)
        for den in itertools.chain(self.poles, (comp.den for comp in self.components)):
            product = product * den
        return squarefree_part(product) if product.degree() > 0 else product

    def evaluate_float(self, c: float) -> List[float]:
        return [comp.evaluate_float(c) for comp in self.components]

    def __str__(self) -> str:
        return "(" + ", ".join(str(comp) for comp in self.components) + ")"


def combine(terms: Sequence[Tuple[object, TrigTerm, Sequence]], dim: int,
            edge_id: Optional[str] = None) -> TrigRationalFn:
    """Σ coeff·trig(term)·direction, reduced componentwise"""
    edges = {t.edge_id for _, t, _ in terms if t.edge_id is not None}
    if edge_id is not None:
        edges.add(edge_id)
    if len(edges) > 1:
        raise TrigPolyError(f"terms from mixed edges: {sorted(edges)}")
    components = [RationalFn.constant(0) for _ in range(dim)]
    poles = []
    for coeff, term, direction in terms:
        value = trig_value(term)
        if value.den.degree() > 0:
            poles.append(value.den)
        scaled = value.scale(coeff)
        for i, x in enumerate(direction):
            if x != 0:
                components[i] = components[i] + scaled.scale(x)
    edge = next(iter(edges)) if edges else None
    return TrigRationalFn(tuple(components), edge, tuple(poles))
