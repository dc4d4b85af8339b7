#!/usr/bin/env python3
"""
Orbit Space Strata
Cells, edges and vertices of the orbit space, and exact angle forms along each edge
"""

import logging
import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import sympy as sp

from exact_algebra import Interval, QuadraticSurd, ExactAlgebraError, TriadError
from triad_catalog import RootVector, SymmetricTriad

logger = logging.getLogger(__name__)

_SIMPLE_LABELS = ("α₁", "α₂")


class StrataError(TriadError):
    """Raised for malformed root data or edges that cannot be parametrized exactly"""


def rational_gcd(values: Sequence[sp.Rational]) -> sp.Rational:
    """Largest rational r with every value an integer multiple of r"""
    values = [abs(sp.Rational(v)) for v in values if v != 0]
    if not values:
        raise StrataError("gcd of an empty set of steps")
    num = sp.igcd(*[v.p for v in values]) if len(values) > 1 else values[0].p
    den = sp.ilcm(*[v.q for v in values]) if len(values) > 1 else values[0].q
    return sp.Rational(num, den)


def cot_pi_fraction(r: sp.Rational) -> Optional[QuadraticSurd]:
    """Exact cot(r*pi) as a quadratic surd; None at a pole"""
    r = sp.Rational(r)
    if r.q == 1:
        return None
    value = sp.cot(sp.pi * r)
    try:
        return QuadraticSurd.from_expr(value)
    except ExactAlgebraError as e:
        raise StrataError(f"cot({r}π) = {value} is not a quadratic surd") from e


def tan_pi_fraction(r: sp.Rational) -> Optional[QuadraticSurd]:
    cot = cot_pi_fraction(r)
    if cot is None:
        return QuadraticSurd.make(0)
    if cot.sign() == 0:
        return None
    return cot.inverse()


@dataclass(frozen=True)
class AngleForm:
    """⟨λ, H(ψ)⟩ = halfpi_k·π/2 + step_j·ψ; halfpi_k lies in ½ℤ"""
    halfpi_k: sp.Rational
    step_j: int

    @property
    def is_constant(self) -> bool:
        return self.step_j == 0

    @property
    def offset_over_pi(self) -> sp.Rational:
        return sp.Rational(self.halfpi_k) / 2

    @property
    def in_pi_z(self) -> bool:
        return self.is_constant and sp.Rational(self.halfpi_k).q == 1 and self.halfpi_k % 2 == 0

    @property
    def in_half_pi_odd(self) -> bool:
        return self.is_constant and sp.Rational(self.halfpi_k).q == 1 and self.halfpi_k % 2 == 1

    def exact(self, psi) -> sp.Expr:
        return self.offset_over_pi * sp.pi + self.step_j * sp.sympify(psi)

    def evaluate(self, psi: float) -> float:
        return float(self.offset_over_pi) * float(sp.pi) + self.step_j * psi

    def __str__(self) -> str:
        offset = "" if self.halfpi_k == 0 else f"{self.offset_over_pi}π"
        if self.step_j == 0:
            return offset or "0"
        step = {1: "ψ", -1: "-ψ"}.get(self.step_j, f"{self.step_j}ψ")
        if not offset:
            return step
        return f"{offset}{'' if step.startswith('-') else '+'}{step}"


@dataclass(frozen=True)
class Cell:
    """0 < ⟨α_i, H⟩ for simple α_i and ⟨top, H⟩ < bound"""
    simple: Tuple[RootVector, ...]
    top: RootVector
    top_coords: Tuple[int, ...]
    bound: sp.Expr
    kind: str

    def inequalities(self) -> List[Tuple[RootVector, str, sp.Expr]]:
        rows = [(root, ">", sp.Integer(0)) for root in self.simple]
        rows.append((self.top, "<", self.bound))
        return rows

    def top_value(self, x: Sequence) -> float:
        return sum(d * v for d, v in zip(self.top_coords, x))

    def in_interior(self, x: Sequence[float]) -> bool:
        """x holds the values ⟨α_i, H⟩ of a point"""
        return all(v > 0 for v in x) and self.top_value(x) < float(self.bound)

    def in_closure(self, x: Sequence[float], tol: float = 1e-12) -> bool:
        return all(v > -tol for v in x) and self.top_value(x) < float(self.bound) + tol


@dataclass(frozen=True)
class Stratum:
    """Face P₀^Δ of the closed cell"""
    delta: Tuple[str, ...]
    dim: int
    index: int = 0
    simple_in: Tuple[int, ...] = ()
    has_top: bool = False

    @property
    def label(self) -> str:
        return "{" + ", ".join(self.delta) + "}"


@dataclass(frozen=True)
class Vertex:
    """0-dimensional stratum; recorded, never classified"""
    stratum: Stratum
    point: Tuple[sp.Expr, ...]

    def __str__(self) -> str:
        coords = ", ".join(str(p) for p in self.point)
        return f"{self.stratum.label}: (⟨α_i,H⟩) = ({coords})"


@dataclass(frozen=True)
class EdgeParam:
    """Exact parametrization ψ/π = psi_offset + base_scale·t, t ∈ (0, 1)"""
    triad_name: str
    stratum: Stratum
    base_scale: sp.Rational
    psi_offset: sp.Rational
    angles: Dict[RootVector, AngleForm]
    simple_angles: Tuple[AngleForm, ...]
    psi_domain: Interval
    c_domain: Interval
    sigma_H: Tuple[RootVector, ...]
    w_H: Tuple[RootVector, ...]
    constant_roots: Tuple[RootVector, ...] = field(default=())

    @property
    def edge_id(self) -> str:
        return f"{self.triad_name} {self.stratum.label}"

    def psi_bounds(self) -> Tuple[float, float]:
        """ψ-domain in radians"""
        pi = float(sp.pi)
        return float(self.psi_domain.lo) * pi, float(self.psi_domain.hi) * pi

    def psi_of_t(self, t: float) -> float:
        return (float(self.psi_offset) + float(self.base_scale) * t) * float(sp.pi)

    def simple_values(self, psi: float) -> Tuple[float, ...]:
        return tuple(a.evaluate(psi) for a in self.simple_angles)


def _simple_symbols(triad: SymmetricTriad) -> Tuple[str, ...]:
    if triad.rank == 1:
        return ("α",)
    return _SIMPLE_LABELS[: triad.rank]


def _top_symbol(triad: SymmetricTriad) -> str:
    return "δ" if triad.kind == "isotropy" else "α̃"


def build_cell(triad: SymmetricTriad) -> Cell:
    try:
        simple = triad.simple_system()
        top = triad.top_root()
        coords = triad.simple_coords(top)
    except TriadError as e:
        raise StrataError(f"cannot build cell for {triad.name}: {e}") from e
    bound = sp.pi if triad.kind == "isotropy" else sp.pi / 2
    logger.debug(f"{triad.name}: Π={[triad.root_name(r) for r in simple]}, top={triad.root_name(top)}")
    return Cell(simple=simple, top=top, top_coords=coords, bound=bound, kind=triad.kind)


def edges(triad: SymmetricTriad) -> List[Stratum]:
    """The one-dimensional strata; a rank-1 triad has the single interior family"""
    simple = _simple_symbols(triad)
    top = _top_symbol(triad)
    if triad.rank == 1:
        return [Stratum(delta=(simple[0], top), dim=1, index=1, simple_in=(0,), has_top=True)]
    if triad.rank != 2:
        raise StrataError(f"rank {triad.rank} is not supported")
    return [
        Stratum(delta=(simple[0], top), dim=1, index=1, simple_in=(0,), has_top=True),
        Stratum(delta=(simple[1], top), dim=1, index=2, simple_in=(1,), has_top=True),
        Stratum(delta=(simple[0], simple[1]), dim=1, index=3, simple_in=(0, 1), has_top=False),
    ]


def vertices(triad: SymmetricTriad) -> List[Vertex]:
    cell = build_cell(triad)
    simple = _simple_symbols(triad)
    bound = cell.bound
    found = []
    for i, label in enumerate(simple):
        point = [sp.Integer(0)] * triad.rank
        point[i] = bound / cell.top_coords[i]
        found.append(Vertex(Stratum(delta=(label,), dim=0, simple_in=(i,)), tuple(point)))
    origin = tuple(sp.Integer(0) for _ in range(triad.rank))
    found.append(Vertex(Stratum(delta=(_top_symbol(triad),), dim=0, has_top=True), origin))
    return found


_TOKEN_ALIASES = {
    "top": "top", "delta": "top", "δ": "top", "α̃": "top", "atilde": "top", "alphatilde": "top",
    "alpha~": "top", "a~": "top", "tilde": "top",
    "a1": "a1", "α1": "a1", "alpha1": "a1", "a2": "a2", "α2": "a2", "alpha2": "a2",
    "a": "a1", "α": "a1", "alpha": "a1",
}


def _edge_key(label: str) -> Optional[frozenset]:
    text = label.translate(str.maketrans("₁₂", "12")).replace("{", "").replace("}", "")
    tokens = [re.sub(r"[\s_]", "", t).lower() for t in text.split(",") if t.strip()]
    keys = [_TOKEN_ALIASES.get(t) for t in tokens]
    if not keys or None in keys:
        return None
    return frozenset(keys)


def find_edge(triad: SymmetricTriad, label: str) -> Stratum:
    """Edge by index ('1'..'3') or by its Δ label ('a1,delta', '{α₁, α̃}', ...)"""
    candidates = edges(triad)
    if label.strip().isdigit():
        index = int(label)
        for stratum in candidates:
            if stratum.index == index:
                return stratum
        raise StrataError(f"{triad.name} has no edge {index}")
    key = _edge_key(label)
    for stratum in candidates:
        own = {"top"} if stratum.has_top else set()
        own |= {f"a{i + 1}" for i in stratum.simple_in}
        if key == frozenset(own):
            return stratum
    raise StrataError(f"unknown edge label {label!r} for {triad.name}")


def _simple_lines(cell: Cell, stratum: Stratum) -> List[Tuple[sp.Rational, sp.Rational]]:
    """⟨α_i, H⟩/π = a_i + b_i·t along the edge"""
    scale = sp.Rational(1) if cell.kind == "isotropy" else sp.Rational(1, 2)
    d = cell.top_coords
    lines = [(sp.Integer(0), sp.Integer(0)) for _ in d]
    if stratum.has_top:
        (i,) = stratum.simple_in
        lines[i] = (sp.Integer(0), scale / d[i])
    else:
        i, k = stratum.simple_in
        lines[i] = (sp.Integer(0), scale / d[i])
        lines[k] = (scale / d[k], -scale / d[k])
    return lines


def _choose_offset(lines: Dict[RootVector, Tuple[sp.Rational, sp.Rational]], s: sp.Rational) -> sp.Rational:
    """ψ/π offset with every angle offset in (1/4)ℤ, preferring offsets in (1/2)ℤ"""
    moving = [(p, q / s) for p, q in lines.values() if q != 0]
    p_first, j_first = moving[0]
    best: Optional[Tuple[int, sp.Rational]] = None
    span = 4 * abs(int(j_first)) * 4
    for r in range(-span, span + 1):
        p0 = (p_first - sp.Rational(r, 4)) / j_first
        if p0 < 0 or p0 + s > 1:
            continue
        offsets = [p - j * p0 for p, j in moving]
        if any((4 * o).q != 1 for o in offsets):
            continue
        score = sum(1 for o in offsets if (2 * o).q != 1)
        if best is None or (score, p0) < best:
            best = (score, p0)
    if best is None:
        raise StrataError("no ψ normalization puts every angle offset in (π/4)ℤ")
    return best[1]


def parametrize_edge(triad: SymmetricTriad, edge: Stratum) -> EdgeParam:
    if edge.dim != 1:
        raise StrataError(f"stratum {edge.label} is not an edge")
    cell = build_cell(triad)
    simple_lines = _simple_lines(cell, edge)

    lines: Dict[RootVector, Tuple[sp.Rational, sp.Rational]] = {}
    for root in triad.all_roots():
        k = triad.simple_coords(root)
        p = sum((ki * a for ki, (a, _) in zip(k, simple_lines)), sp.Integer(0))
        q = sum((ki * b for ki, (_, b) in zip(k, simple_lines)), sp.Integer(0))
        lines[root] = (p, q)

    s = rational_gcd([q for _, q in lines.values()])
    p0 = _choose_offset(lines, s)

    def form(p, q) -> AngleForm:
        j = q / s
        if not j.is_integer:
            raise StrataError(f"non-integer step {j} on {triad.name} {edge.label}")
        offset = p - j * p0
        halfpi_k = 2 * offset
        if (2 * halfpi_k).q != 1:
            raise StrataError(f"angle offset {offset}π is not a multiple of π/4")
        return AngleForm(halfpi_k=sp.Rational(halfpi_k), step_j=int(j))

    angles = {root: form(p, q) for root, (p, q) in lines.items()}
    simple_angles = tuple(form(a, b) for a, b in simple_lines)

    sigma_H = tuple(r for r in triad.sigma_plus if angles[r].in_pi_z)
    w_H = tuple(r for r in triad.w_plus if angles[r].in_half_pi_odd)
    constants = tuple(
        r for r in triad.all_roots()
        if angles[r].is_constant and r not in sigma_H and r not in w_H
    )

    # no moving angle may cross a singular value inside the edge
    for root, (p, q) in lines.items():
        if q == 0:
            continue
        lo, hi = sorted((p, p + q))
        checks = []
        if root in triad.m:
            checks.append(sp.Integer(0))
        if root in triad.n:
            checks.append(sp.Rational(1, 2))
        for shift in checks:
            first = sp.floor(lo - shift) + 1 + shift
            if first < hi:
                raise StrataError(
                    f"{triad.root_name(root)} reaches a singular angle {first}π inside {edge.label} of {triad.name}"
                )

    psi_domain = Interval(p0, p0 + s)
    hi_c = cot_pi_fraction(p0)
    lo_c = cot_pi_fraction(p0 + s)
    c_domain = Interval(-sp.oo if lo_c is None else lo_c, sp.oo if hi_c is None else hi_c)

    logger.debug(
        f"{triad.name} {edge.label}: ψ/π ∈ {psi_domain}, c ∈ {c_domain}, "
        + ", ".join(f"{triad.root_name(r)}: {a}" for r, a in angles.items())
    )
    return EdgeParam(
        triad_name=triad.name,
        stratum=edge,
        base_scale=s,
        psi_offset=p0,
        angles=angles,
        simple_angles=simple_angles,
        psi_domain=psi_domain,
        c_domain=c_domain,
        sigma_H=sigma_H,
        w_H=w_H,
        constant_roots=constants,
    )
