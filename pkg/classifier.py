#!/usr/bin/env python3
"""
Orbit Classifier
Trichotomy (i)/(ii)/(iii) per edge, exact closed forms, and parameter thresholds
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import sympy as sp

from biharmonic_criterion import CriterionPolynomial, build_criterion, proper_part
from curvature import ALL_HARMONIC, TensionField, check_action, harmonic_polynomial, tension_field
from exact_algebra import (
    CVAR,
    Interval,
    QuadraticSurd,
    TriadError,
    content_free,
    isolate_real_roots,
    solve_quadratic_exact,
    squarefree_part,
)
from orbit_strata import EdgeParam, Stratum, edges, find_edge, parametrize_edge
from triad_catalog import CatalogEntry, CatalogError, SymmetricTriad, TriadCatalog, load_catalog

logger = logging.getLogger(__name__)

UVAR = sp.Symbol("u")
BIGU = sp.Symbol("U")

CATEGORY_BY_COUNT = {1: "i", 2: "ii", 0: "iii"}

SUITES = {
    "isotropy2": {"rank": 2, "kind": "isotropy", "action": "hermann"},
    "hermann2": {"rank": 2, "kind": "hermann", "action": "hermann"},
    "rank1-group": {"rank": 1, "kind": None, "action": "group"},
}


class ClassifierError(TriadError):
    """Raised when a family cannot be classified"""


@dataclass(frozen=True)
class DisplayForm:
    """Criterion polynomial in the variable the tables use

    variable 'c' = cot ψ, 'u' = cot²ψ for even polynomials, 'U' = cot²(2ψ) for
    even polynomials that are also palindromic in u on a domain with u > 1.
    zero_root marks P(c) = c·Q(c²), where poly is Q.
    """
    variable: str
    poly: sp.Poly
    zero_root: bool = False

    def value_of(self, c: float) -> float:
        if self.variable == "u":
            return c * c
        if self.variable == "U":
            k = (c * c - 1) / (2 * c)
            return k * k
        return c

    def __str__(self) -> str:
        poly = self.poly
        if poly.get_domain() == sp.QQ and not poly.is_zero:
            poly = content_free(poly)
        text = str(poly.as_expr())
        if self.zero_root:
            return f"c*({text}) with u = c**2"
        if self.variable == "u":
            return f"{text} with u = cot(ψ)**2"
        if self.variable == "U":
            return f"{text} with U = cot(2ψ)**2"
        return f"{text} with c = cot(ψ)"


def _halved(p: sp.Poly, shift: int, var: sp.Symbol) -> sp.Poly:
    terms = {(deg // 2,): coeff for (deg,), coeff in p.terms() if deg % 2 == shift}
    return sp.Poly.from_dict(terms, var, domain=p.get_domain())


def _palindromic(q: sp.Poly) -> bool:
    coeffs = q.all_coeffs()
    return len(coeffs) % 2 == 1 and all(a == b for a, b in zip(coeffs, reversed(coeffs)))


def _palindrome_to_U(q: sp.Poly) -> sp.Poly:
    """Q(v)/v^e as a polynomial in U, where v + 1/v = 4U + 2"""
    domain = q.get_domain()
    coeffs = list(reversed(q.all_coeffs()))
    e = (len(coeffs) - 1) // 2
    w = sp.Poly(4 * BIGU + 2, BIGU, domain=domain)
    prev, cur = sp.Poly(2, BIGU, domain=domain), w
    total = sp.Poly(coeffs[e], BIGU, domain=domain)
    for k in range(1, e + 1):
        total = total + cur * sp.Poly(coeffs[e + k], BIGU, domain=domain)
        prev, cur = cur, w * cur - prev
    return total


def display_form(p: sp.Poly, edge: EdgeParam) -> DisplayForm:
    """Even polynomials go to u = c², palindromic ones on u > 1 further to U"""
    if p.degree() <= 0:
        return DisplayForm("c", p)
    degrees = [deg for (deg,), _ in p.terms()]
    if all(deg % 2 == 0 for deg in degrees):
        q = _halved(p, 0, UVAR)
        if edge.psi_offset == 0 and edge.base_scale <= sp.Rational(1, 4) and q.degree() >= 2 and _palindromic(q):
            return DisplayForm("U", _palindrome_to_U(q))
        return DisplayForm("u", q)
    if all(deg % 2 == 1 for deg in degrees):
        return DisplayForm("u", _halved(p, 1, UVAR), zero_root=True)
    return DisplayForm("c", p)


@dataclass
class RootInfo:
    """One in-domain root of a polynomial in c"""
    interval: Interval
    c_value: float
    psi: float
    variable: str = "c"
    closed_form: Optional[QuadraticSurd] = None
    display_value: Optional[float] = None

    @property
    def psi_over_pi(self) -> float:
        return self.psi / math.pi

    def describe(self) -> str:
        head = f"ψ/π ≈ {self.psi_over_pi:.12g}"
        if self.closed_form is not None:
            return f"{self.variable} = {self.closed_form} ({head})"
        if self.display_value is not None and self.variable != "c":
            return f"{self.variable} ≈ {self.display_value:.12g} ({head})"
        return f"c ≈ {self.c_value:.12g} ({head})"

    def to_dict(self) -> Dict:
        return {
            "interval": [str(self.interval.lo), str(self.interval.hi)],
            "c": self.c_value,
            "psi": self.psi,
            "variable": self.variable,
            "closed_form": None if self.closed_form is None else str(self.closed_form),
        }


def roots_in_domain(p: sp.Poly, edge: EdgeParam) -> List[Interval]:
    """Isolating intervals of the roots of p inside the edge's c-domain"""
    if p.is_zero:
        raise ClassifierError(f"zero polynomial on {edge.edge_id}")
    if p.degree() <= 0:
        return []
    if p.get_domain() != sp.QQ:
        p = p.set_domain(sp.QQ)
    return isolate_real_roots(squarefree_part(p), edge.c_domain)


def _root_infos(p: sp.Poly, edge: EdgeParam, display: Optional[DisplayForm] = None) -> List[RootInfo]:
    infos = []
    exact: List[QuadraticSurd] = []
    if display is not None and display.poly.degree() <= 2 and display.poly.get_domain() == sp.QQ:
        exact = [r.value for r in solve_quadratic_exact(display.poly)] if display.poly.degree() > 0 else []
    for iv in roots_in_domain(p, edge):
        c = iv.midpoint
        info = RootInfo(interval=iv, c_value=c, psi=math.atan2(1.0, c))
        if display is not None:
            if display.zero_root and iv.contains(sp.Integer(0)):
                info.variable, info.closed_form, info.display_value = "c", QuadraticSurd.make(0), 0.0
            else:
                value = display.value_of(c)
                info.variable, info.display_value = display.variable, value
                for surd in exact:
                    if abs(float(surd) - value) < 1e-6 * max(1.0, abs(value)):
                        info.closed_form = surd
                        break
        infos.append(info)
    return infos


@dataclass
class EdgePolynomials:
    """Exact pipeline output for one edge; coefficients may be symbolic"""
    edge: EdgeParam
    tension: TensionField
    harmonic: Union[sp.Poly, str]
    criterion: CriterionPolynomial
    proper: sp.Poly


def edge_polynomials(triad: SymmetricTriad, stratum: Stratum, action: str) -> EdgePolynomials:
    check_action(action)
    edge = parametrize_edge(triad, stratum)
    tf = tension_field(triad, edge, action)
    harm = harmonic_polynomial(tf)
    crit = build_criterion(triad, edge, tf, action)
    if crit.poly.is_zero:
        raise ClassifierError(f"every orbit of {edge.edge_id} satisfies the {action} criterion")
    proper = proper_part(crit, harm)
    return EdgePolynomials(edge=edge, tension=tf, harmonic=harm, criterion=crit, proper=proper)


def _poly_text(p: Union[sp.Poly, str]) -> str:
    if isinstance(p, str):
        return p
    if p.get_domain() == sp.QQ and not p.is_zero:
        p = content_free(p)
    return str(p.as_expr())


@dataclass
class ClassificationResult:
    family: str
    params: Dict[str, int]
    edge: str
    edge_index: int
    action: str
    category: str
    proper_roots: List[RootInfo] = field(default_factory=list)
    harmonic_roots: List[RootInfo] = field(default_factory=list)
    codim: Optional[str] = None
    display: Optional[DisplayForm] = None
    harmonic_poly: str = ""
    criterion_poly: str = ""
    proper_poly: str = ""
    expected: Optional[str] = None
    theorem_list: Optional[int] = None
    label: Optional[str] = None
    interleaved: Optional[bool] = None
    note: str = ""

    @property
    def deviates(self) -> bool:
        return self.expected is not None and self.expected != self.category

    @property
    def closed_forms(self) -> List[str]:
        return [f"{r.variable} = {r.closed_form}" for r in self.proper_roots if r.closed_form is not None]


def _category(count: int, edge_id: str) -> str:
    if count not in CATEGORY_BY_COUNT:
        raise ClassifierError(f"{edge_id} has {count} proper biharmonic orbits; the trichotomy allows at most 2")
    return CATEGORY_BY_COUNT[count]


def _interleaved(proper: List[RootInfo], harmonic: List[RootInfo]) -> Optional[bool]:
    if len(proper) != 2 or len(harmonic) != 1:
        return None
    lo, hi = sorted(r.psi for r in proper)
    return lo < harmonic[0].psi < hi


def _resolve_stratum(triad: SymmetricTriad, edge: Union[Stratum, str, int]) -> Stratum:
    if isinstance(edge, Stratum):
        return edge
    return find_edge(triad, str(edge))


def classify_family(triad: SymmetricTriad, edge: Union[Stratum, str, int], action: str = "hermann",
                    entry: Optional[CatalogEntry] = None) -> ClassificationResult:
    """Category and roots for one edge of a concrete triad"""
    if triad.is_symbolic:
        raise ClassifierError(f"{triad.name} has symbolic multiplicities; substitute parameters first")
    stratum = _resolve_stratum(triad, edge)
    polys = edge_polynomials(triad, stratum, action)
    ep = polys.edge

    result = ClassificationResult(
        family=triad.name,
        params=dict(triad.params),
        edge=stratum.label,
        edge_index=stratum.index,
        action=action,
        category="iii",
        criterion_poly=_poly_text(polys.criterion.poly),
        harmonic_poly=_poly_text(polys.harmonic),
    )

    if polys.harmonic is ALL_HARMONIC:
        result.note = "ALL_HARMONIC: every orbit of the edge is minimal"
    else:
        result.harmonic_roots = _root_infos(polys.harmonic, ep)
        display = display_form(polys.proper, ep)
        result.display = display
        result.proper_poly = str(display)
        result.proper_roots = _root_infos(polys.proper, ep, display)
        result.category = _category(len(result.proper_roots), ep.edge_id)
        result.interleaved = _interleaved(result.proper_roots, result.harmonic_roots)

    if entry is not None:
        _attach_table_data(result, entry, triad, stratum.index)
    if triad.rank == 1 and action == "group":
        result.theorem_list = 1 if result.proper_roots else 2
    if result.deviates:
        logger.warning(f"{ep.edge_id}: engine category ({result.category}) differs from table ({result.expected})")
    logger.debug(f"{ep.edge_id} [{action}]: ({result.category}), proper {result.proper_poly}")
    return result


def _attach_table_data(result: ClassificationResult, entry: CatalogEntry, triad: SymmetricTriad, index: int) -> None:
    codims = entry.codims(triad.params)
    if len(codims) >= index:
        result.codim = codims[index - 1]
    result.label = entry.label
    table_action = "group" if entry.rank == 1 else "hermann"
    if result.action == table_action and dict(triad.params) == entry.default_params() and len(entry.expected) >= index:
        result.expected = entry.expected[index - 1]


def classify_entry(entry: CatalogEntry, action: str, params: Optional[Dict[str, int]] = None) -> List[ClassificationResult]:
    triad = entry.instantiate(params)
    return [classify_family(triad, stratum, action, entry) for stratum in edges(triad)]


def classify_all(action: str = "hermann", rank: Optional[int] = None, kind: Optional[str] = None,
                 params: Optional[Dict[str, Dict[str, int]]] = None,
                 catalog: Optional[TriadCatalog] = None,
                 max_workers: Optional[int] = None) -> List[ClassificationResult]:
    """One result per (family, edge), in catalog order"""
    catalog = catalog or load_catalog()
    params = params or {}
    if max_workers is None:
        from config import config
        max_workers = config.max_workers
    entries = catalog.enumerate_families(rank=rank, kind=kind)
    logger.info(f"Classifying {len(entries)} families ({action} action)")

    batches: Dict[int, List[ClassificationResult]] = {}
    if max_workers <= 1:
        for i, entry in enumerate(entries):
            batches[i] = classify_entry(entry, action, params.get(entry.name))
    else:
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            futures = {
                executor.submit(classify_entry, entry, action, params.get(entry.name)): i
                for i, entry in enumerate(entries)
            }
            for future in as_completed(futures):
                batches[futures[future]] = future.result()

    results = [r for i in range(len(entries)) for r in batches[i]]
    deviations = sum(1 for r in results if r.deviates)
    logger.info(f"Classified {len(results)} edges; {deviations} differ from the table annotations")
    return results


def classify_suite(suite: str, catalog: Optional[TriadCatalog] = None,
                   max_workers: Optional[int] = None) -> List[ClassificationResult]:
    if suite not in SUITES:
        raise ClassifierError(f"unknown suite {suite!r}; expected one of {sorted(SUITES)}")
    spec = SUITES[suite]
    return classify_all(spec["action"], rank=spec["rank"], kind=spec["kind"], catalog=catalog,
                        max_workers=max_workers)


@dataclass
class ThresholdReport:
    family: str
    param: str
    lo: int
    hi: int
    action: str
    edge: str
    discriminant: Optional[str] = None
    discriminant_roots: List[float] = field(default_factory=list)
    integer_roots: List[int] = field(default_factory=list)
    exhaustive: Dict[int, str] = field(default_factory=dict)
    predicted: Dict[int, str] = field(default_factory=dict)
    verified: Optional[bool] = None
    note: str = ""

    @property
    def regimes(self) -> List[Tuple[int, int, str]]:
        """Maximal runs of consecutive values with one category"""
        runs: List[Tuple[int, int, str]] = []
        for value in sorted(self.exhaustive):
            category = self.exhaustive[value]
            if runs and runs[-1][2] == category and runs[-1][1] == value - 1:
                runs[-1] = (runs[-1][0], value, category)
            else:
                runs.append((value, value, category))
        return runs

    def proper_values(self) -> List[int]:
        """Values with at least one proper biharmonic orbit"""
        return [v for v, cat in sorted(self.exhaustive.items()) if cat in ("i", "ii")]

    def describe(self) -> str:
        lines = [f"{self.family} [{self.edge}, {self.action}] over {self.param} ∈ [{self.lo}, {self.hi}]"]
        if self.discriminant:
            lines.append(f"  discriminant: {self.discriminant}")
            roots = ", ".join(f"{r:.6g}" for r in self.discriminant_roots) or "none"
            lines.append(f"  real roots: {roots}; integer roots: {self.integer_roots or 'none'}")
        for lo, hi, cat in self.regimes:
            span = f"{self.param} = {lo}" if lo == hi else f"{lo} ≤ {self.param} ≤ {hi}"
            lines.append(f"  {span}: ({cat})")
        if self.verified is not None:
            lines.append(f"  discriminant regimes agree with exhaustive scan: {self.verified}")
        if self.note:
            lines.append(f"  note: {self.note}")
        return "\n".join(lines)


def _discriminant(display: DisplayForm) -> Optional[sp.Expr]:
    """B² − 4AC of a quadratic display polynomial, as a sympy expression"""
    if display.zero_root or display.poly.degree() != 2:
        return None
    domain = display.poly.get_domain()
    a, b, c = display.poly.all_coeffs()
    return sp.together(domain.to_sympy(b * b - 4 * a * c))


def threshold_scan(entry: CatalogEntry, param: str, lo: Optional[int] = None, hi: Optional[int] = None,
                   action: str = "group", edge: Union[str, int] = 1) -> ThresholdReport:
    """Categories over an integer range, with the discriminant regimes when the criterion is quadratic"""
    if param not in entry.params:
        raise ClassifierError(f"{entry.name} has no parameter {param!r}")
    if lo is None or hi is None:
        from config import config
        lo = config.scan_min if lo is None else lo
        hi = config.scan_max if hi is None else hi

    base = entry.instantiate(symbolic=[param])
    stratum = _resolve_stratum(base, edge)
    report = ThresholdReport(entry.name, param, lo, hi, action, stratum.label)
    fixed = {k: v for k, v in entry.default_params().items() if k != param}

    for value in range(lo, hi + 1):
        try:
            triad = entry.instantiate({**fixed, param: value})
        except CatalogError:
            continue
        report.exhaustive[value] = classify_family(triad, stratum, action).category

    polys = edge_polynomials(base, stratum, action)
    disc = _discriminant(display_form(polys.proper, polys.edge))
    if disc is None:
        report.note = "reduced criterion is not quadratic; exhaustive scan only"
        return report

    symbol = entry.parameter_symbols()[param]
    numerator, _ = sp.fraction(disc)
    dpoly = content_free(sp.Poly(numerator, symbol, domain=sp.QQ))
    report.discriminant = str(dpoly.as_expr())
    if dpoly.degree() > 0:
        report.discriminant_roots = [iv.midpoint for iv in isolate_real_roots(squarefree_part(dpoly))]
        report.integer_roots = sorted(int(r) for r in dpoly.ground_roots() if r.is_integer)
    for value in report.exhaustive:
        sign = sp.sign(dpoly.eval(value)) if dpoly.degree() > 0 else sp.sign(dpoly.LC())
        report.predicted[value] = "ii" if sign > 0 else ("i" if sign == 0 else "iii")
    report.verified = report.predicted == report.exhaustive
    if not report.verified:
        bad = [v for v in report.exhaustive if report.predicted[v] != report.exhaustive[v]]
        logger.warning(f"{entry.name}: discriminant regimes disagree with exhaustive scan at {bad[:10]}")
    logger.info(f"Threshold scan for {entry.name} over {param}: regimes {report.regimes}")
    return report


@dataclass
class BoundsReport:
    family_type: str
    symbols: Tuple[str, str]
    discriminant: str
    bounds: List[QuadraticSurd]

    def describe(self) -> str:
        first, second = self.symbols
        if not self.bounds:
            return f"{self.family_type}: discriminant {self.discriminant} has constant sign in {first}/{second}"
        if len(self.bounds) == 1:
            return f"{self.family_type}: degenerate ratio {first} = ({self.bounds[0]})·{second}"
        lo, hi = self.bounds
        return (
            f"{self.family_type}: proper biharmonic orbits iff "
            f"{first} < ({lo})·{second} or {first} > ({hi})·{second}"
        )


def discriminant_bounds(entry: CatalogEntry, action: str = "group", edge: Union[str, int] = 1) -> BoundsReport:
    """Exact ratio bounds for a type with two free multiplicity symbols"""
    names = sorted(
        {str(s) for text in list(entry.spec["m"].values()) + list(entry.spec.get("n", {}).values())
         for s in sp.sympify(text).free_symbols}
    )
    if len(names) != 2:
        raise ClassifierError(f"type {entry.triad_type} has multiplicity symbols {names}; need exactly two")
    spec = dict(entry.spec, multiplicities={name: name for name in names})
    generic = CatalogEntry(
        name=f"{entry.triad_type} generic",
        triad_type=entry.triad_type,
        groups=entry.triad_type,
        source=entry.source,
        spec=spec,
        params=tuple(names),
    )
    triad = generic.instantiate(symbolic=names)
    stratum = _resolve_stratum(triad, edge)
    polys = edge_polynomials(triad, stratum, action)
    disc = _discriminant(display_form(polys.proper, polys.edge))
    if disc is None:
        raise ClassifierError(f"reduced criterion of {entry.triad_type} is not quadratic")
    symbols = generic.parameter_symbols()
    first, second = symbols[names[0]], symbols[names[1]]
    numerator, _ = sp.fraction(disc)
    dpoly = sp.Poly(sp.expand(numerator.subs(second, 1)), first, domain=sp.QQ)
    bounds = [r.value for r in solve_quadratic_exact(content_free(dpoly))] if dpoly.degree() > 0 else []
    return BoundsReport(entry.triad_type, (names[0], names[1]), str(sp.factor(numerator)), bounds)
