#!/usr/bin/env python3
"""
Tension Field and Shape Operator
Mean curvature of orbits along an edge and the spectrum of the shape operator in the τ direction
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

import numpy as np
import sympy as sp

from exact_algebra import RationalFn, TriadError, poly_gcd, squarefree_part, strip_factors
from orbit_strata import EdgeParam
from triad_catalog import RootVector, SymmetricTriad
from trig_poly import TrigRationalFn, TrigTerm, combine

logger = logging.getLogger(__name__)

ACTIONS = ("hermann", "group")

# distinguished result: the tension vanishes along the whole edge
ALL_HARMONIC = "ALL_HARMONIC"


class CurvatureError(TriadError):
    """Raised at poles of the shape operator or on broken orthogonality"""


def check_action(action: str) -> str:
    if action not in ACTIONS:
        raise CurvatureError(f"unknown action {action!r}; expected one of {ACTIONS}")
    return action


@dataclass(frozen=True)
class TensionField:
    """dL_x⁻¹(τ_H) along an edge as a vector of rational functions of c"""
    fn: TrigRationalFn
    edge: EdgeParam
    action: str
    gram: sp.ImmutableMatrix

    def pairing(self, root: RootVector) -> RationalFn:
        """⟨τ, λ⟩"""
        return self.fn.dot(self.gram, root.coords)

    @property
    def is_zero(self) -> bool:
        return self.fn.is_zero


def tension_terms(triad: SymmetricTriad, edge: EdgeParam) -> List[Tuple[sp.Expr, TrigTerm, RootVector]]:
    """−m(λ)·cot⟨λ,H⟩·λ over Σ⁺∖Σ_H and +n(α)·tan⟨α,H⟩·α over W⁺∖W_H"""
    terms = []
    for lam in triad.sigma_plus:
        if lam in edge.sigma_H:
            continue
        terms.append((-triad.m[lam], TrigTerm("cot", edge.angles[lam], edge.edge_id), lam))
    for alpha in triad.w_plus:
        if alpha in edge.w_H:
            continue
        terms.append((triad.n[alpha], TrigTerm("tan", edge.angles[alpha], edge.edge_id), alpha))
    return terms


def tension_field(triad: SymmetricTriad, edge: EdgeParam, action: str = "hermann") -> TensionField:
    """Same field for both actions: the group orbit's tension projects to the Hermann orbit's"""
    check_action(action)
    terms = [(coeff, term, root.coords) for coeff, term, root in tension_terms(triad, edge)]
    fn = combine(terms, triad.rank, edge.edge_id)
    logger.debug(f"τ on {edge.edge_id}: {fn}")
    return TensionField(fn=fn, edge=edge, action=action, gram=triad.gram)


def numerator_gcd(fn: TrigRationalFn) -> Optional[sp.Poly]:
    """Common zero set of the components, poles removed; None when fn ≡ 0"""
    numerators = [comp.num for comp in fn.components if not comp.is_zero]
    if not numerators:
        return None
    g = numerators[0]
    for num in numerators[1:]:
        g = poly_gcd(g, num)
    return strip_factors(g, fn.pole_polynomial())


def harmonic_polynomial(tf: TensionField) -> Union[sp.Poly, str]:
    """Squarefree polynomial in c of the harmonic points, or ALL_HARMONIC"""
    g = numerator_gcd(tf.fn)
    if g is None:
        logger.info(f"{tf.edge.edge_id}: tension vanishes identically")
        return ALL_HARMONIC
    if g.degree() <= 0:
        return g.one
    return squarefree_part(g)


@dataclass(frozen=True)
class SpectrumEntry:
    eigenvalue: float
    multiplicity: int
    origin: str


@dataclass(frozen=True)
class CurvatureSpectrum:
    entries: Tuple[SpectrumEntry, ...]
    action: str
    tau: Tuple[float, ...]

    def trace(self) -> float:
        return sum(e.eigenvalue * e.multiplicity for e in self.entries)

    @property
    def dimension(self) -> int:
        return sum(e.multiplicity for e in self.entries)

    def tau_norm_squared(self, gram: sp.Matrix) -> float:
        g = np.array(gram.tolist(), dtype=float)
        t = np.array(self.tau)
        return float(t @ g @ t)


def _trig(kind: str, angle: float, edge_id: str) -> float:
    if kind == "cot":
        if abs(math.sin(angle)) < 1e-14:
            raise CurvatureError(f"cot pole at angle {angle} on {edge_id}")
        return math.cos(angle) / math.sin(angle)
    if abs(math.cos(angle)) < 1e-14:
        raise CurvatureError(f"tan pole at angle {angle} on {edge_id}")
    return math.sin(angle) / math.cos(angle)


def curvature_spectrum(triad: SymmetricTriad, edge: EdgeParam, psi, action: str = "hermann") -> CurvatureSpectrum:
    """Eigenvalues of the shape operator A_τ at ψ (radians)"""
    check_action(action)
    psi = float(psi)
    tf = tension_field(triad, edge, action)
    c = _trig("cot", psi, edge.edge_id)
    tau = tuple(tf.fn.evaluate_float(c))
    g = np.array(triad.gram.tolist(), dtype=float)
    tau_vec = np.array(tau)

    entries: List[SpectrumEntry] = []
    for role, roots, table, singular, kind in (
        ("m", triad.sigma_plus, triad.m, edge.sigma_H, "cot"),
        ("n", triad.w_plus, triad.n, edge.w_H, "tan"),
    ):
        for root in roots:
            mult = int(table[root])
            name = f"{role}({triad.root_name(root)})"
            if root in singular:
                continue
            a = float(tau_vec @ g @ np.array([float(x) for x in root.coords]))
            value = _trig(kind, edge.angles[root].evaluate(psi), edge.edge_id)
            diagonal = -a * value if kind == "cot" else a * value
            if action == "hermann":
                entries.append(SpectrumEntry(diagonal, mult, name))
                continue
            block = np.array([[0.0, -a / 2], [-a / 2, diagonal]])
            for eig in np.linalg.eigvalsh(block):
                entries.append(SpectrumEntry(float(eig), mult, f"{name} block"))
    return CurvatureSpectrum(entries=tuple(entries), action=action, tau=tau)


def orthogonality_defects(tf: TensionField, roots: List[RootVector]) -> List[RootVector]:
    """Roots among the given ones with ⟨τ, λ⟩ not identically zero"""
    return [root for root in roots if not tf.pairing(root).is_zero]
