#!/usr/bin/env python3
"""
Biharmonic Criteria
Exact biharmonic conditions along an edge for Hermann orbits and group orbits
"""

import logging
from dataclasses import dataclass
from typing import Union

import sympy as sp

from curvature import ALL_HARMONIC, CurvatureError, TensionField, numerator_gcd, orthogonality_defects
from exact_algebra import RationalFn, exact_quotient, poly_gcd, squarefree_part
from orbit_strata import EdgeParam
from triad_catalog import SymmetricTriad
from trig_poly import TrigRationalFn, TrigTerm, trig_value

logger = logging.getLogger(__name__)

HERMANN_COEFFICIENT = sp.Integer(1)
GROUP_COEFFICIENT = sp.Rational(3, 2)


@dataclass(frozen=True)
class CriterionPolynomial:
    """Squarefree monic polynomial in c of the biharmonic points of an edge"""
    poly: sp.Poly
    full: sp.Poly
    excluded_poles: sp.Poly
    action: str
    edge_id: str
    vector: TrigRationalFn


def criterion_vector(triad: SymmetricTriad, edge: EdgeParam, tf: TensionField,
                     coefficient: sp.Expr) -> TrigRationalFn:
    """Σ m⟨τ,λ⟩(k − cot²⟨λ,H⟩)λ + Σ n⟨τ,α⟩(k − tan²⟨α,H⟩)α over the regular roots"""
    dim = triad.rank
    components = [RationalFn.constant(0) for _ in range(dim)]
    poles = list(tf.fn.poles)
    k = RationalFn.constant(coefficient)
    for kind, roots, table, singular in (
        ("cot", triad.sigma_plus, triad.m, edge.sigma_H),
        ("tan", triad.w_plus, triad.n, edge.w_H),
    ):
        for root in roots:
            if root in singular:
                continue
            value = trig_value(TrigTerm(kind, edge.angles[root], edge.edge_id))
            if value.den.degree() > 0:
                poles.append(value.den)
            weight = (tf.pairing(root) * (k - value * value)).scale(table[root])
            for i, x in enumerate(root.coords):
                if x != 0:
                    components[i] = components[i] + weight.scale(x)
    return TrigRationalFn(tuple(components), edge.edge_id, tuple(poles))


def singular_terms(triad: SymmetricTriad, edge: EdgeParam, tf: TensionField) -> TrigRationalFn:
    """Σ_{μ∈Σ_H} m(μ)⟨τ,μ⟩μ + Σ_{β∈W_H} n(β)⟨τ,β⟩β"""
    components = [RationalFn.constant(0) for _ in range(triad.rank)]
    for roots, table in ((edge.sigma_H, triad.m), (edge.w_H, triad.n)):
        for root in roots:
            weight = tf.pairing(root).scale(table[root])
            for i, x in enumerate(root.coords):
                if x != 0:
                    components[i] = components[i] + weight.scale(x)
    return TrigRationalFn(tuple(components), edge.edge_id)


def _reduce(vector: TrigRationalFn, action: str, edge_id: str) -> CriterionPolynomial:
    full = numerator_gcd(vector)
    poles = vector.pole_polynomial()
    if full is None:
        # every orbit of the edge is biharmonic; the zero polynomial carries that
        zero = sp.Poly(0, poles.gen, domain=poles.get_domain())
        return CriterionPolynomial(zero, zero, poles, action, edge_id, vector)
    poly = squarefree_part(full) if full.degree() > 0 else full.one
    logger.debug(f"{action} criterion on {edge_id}: {poly.as_expr()}")
    return CriterionPolynomial(poly, full, poles, action, edge_id, vector)


def hermann_criterion(triad: SymmetricTriad, edge: EdgeParam, tf: TensionField) -> CriterionPolynomial:
    vector = criterion_vector(triad, edge, tf, HERMANN_COEFFICIENT)
    return _reduce(vector, "hermann", edge.edge_id)


def group_criterion(triad: SymmetricTriad, edge: EdgeParam, tf: TensionField) -> CriterionPolynomial:
    """3/2 coefficients plus the singular-root terms, which must vanish identically"""
    extra = singular_terms(triad, edge, tf)
    if not extra.is_zero:
        defects = orthogonality_defects(tf, list(edge.sigma_H) + list(edge.w_H))
        raise CurvatureError(
            f"τ is not orthogonal to {[triad.root_name(r) for r in defects]} on {edge.edge_id}"
        )
    vector = criterion_vector(triad, edge, tf, GROUP_COEFFICIENT) + extra
    return _reduce(vector, "group", edge.edge_id)


def build_criterion(triad: SymmetricTriad, edge: EdgeParam, tf: TensionField, action: str) -> CriterionPolynomial:
    if action == "group":
        return group_criterion(triad, edge, tf)
    return hermann_criterion(triad, edge, tf)


def proper_part(crit: CriterionPolynomial, harm: Union[sp.Poly, str]) -> sp.Poly:
    """Biharmonic candidates that are not harmonic: crit.poly / gcd(crit.poly, harm)"""
    if crit.poly.is_zero:
        raise CurvatureError(f"criterion vanishes identically on {crit.edge_id}")
    if harm is ALL_HARMONIC or harm.degree() <= 0:
        return crit.poly
    shared = poly_gcd(crit.poly, harm)
    return exact_quotient(crit.poly, shared).monic()

