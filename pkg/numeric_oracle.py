#!/usr/bin/env python3
"""
Numeric Oracle
Direct floating-point sums of cot/tan over the roots, grid bracketing and
reconciliation against the exact classifier
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import sympy as sp
from scipy.optimize import brentq, minimize_scalar

from biharmonic_criterion import GROUP_COEFFICIENT, HERMANN_COEFFICIENT
from classifier import ClassificationResult, roots_in_domain
from curvature import check_action
from exact_algebra import TriadError
from orbit_strata import EdgeParam, Stratum, find_edge, parametrize_edge
from triad_catalog import SymmetricTriad, TriadCatalog, lookup

logger = logging.getLogger(__name__)

FUNCTIONS = {
    "tension": "tension",
    "tension-norm²": "tension",
    "hermann": "hermann",
    "hermann-criterion-norm²": "hermann",
    "group": "group",
    "group-criterion-norm²": "group",
}

RESIDUAL_TOL = 1e-8
LOCATION_TOL = 1e-9
TANGENTIAL_TOL = 1e-6
HARMONIC_SEPARATION = 1e-6
DEDUPE_DISTANCE = 1e-7
SCREEN_LEVEL = 1e-3


class OracleError(TriadError):
    """Raised for invalid profiles, out-of-domain points and pole proximity"""


@dataclass(frozen=True)
class NumericProfile:
    grid_n: int = 20000
    bisect_tol: float = 1e-12
    boundary_margin: float = 1e-6

    def __post_init__(self):
        if self.grid_n < 100:
            raise OracleError(f"grid_n must be at least 100, got {self.grid_n}")
        if not 0 < self.bisect_tol < 1e-6:
            raise OracleError(f"bisect_tol must lie in (0, 1e-6), got {self.bisect_tol}")
        if not 0 <= self.boundary_margin < 0.5:
            raise OracleError(f"boundary_margin must lie in [0, 0.5), got {self.boundary_margin}")


def default_profile() -> NumericProfile:
    from config import config
    return config.numeric_profile()


@dataclass(frozen=True)
class NumericRoot:
    psi: float
    residual: float
    tangential: bool = False

    @property
    def psi_over_pi(self) -> float:
        return self.psi / math.pi


@dataclass(frozen=True)
class _RootTable:
    """Regular and singular roots of an edge as float arrays"""
    kinds: np.ndarray       # True for cot (Σ), False for tan (W)
    offsets: np.ndarray     # angle offsets in radians
    steps: np.ndarray
    mults: np.ndarray
    coords: np.ndarray      # (R, rank)
    singular_mults: np.ndarray
    singular_coords: np.ndarray
    gram: np.ndarray


def _root_table(triad: SymmetricTriad, edge: EdgeParam) -> _RootTable:
    if triad.is_symbolic:
        raise OracleError(f"{triad.name} has symbolic multiplicities")
    kinds, offsets, steps, mults, coords = [], [], [], [], []
    singular_mults, singular_coords = [], []
    for is_cot, roots, table, singular in (
        (True, triad.sigma_plus, triad.m, edge.sigma_H),
        (False, triad.w_plus, triad.n, edge.w_H),
    ):
        for root in roots:
            vector = [float(x) for x in root.coords]
            if root in singular:
                singular_mults.append(float(table[root]))
                singular_coords.append(vector)
                continue
            angle = edge.angles[root]
            kinds.append(is_cot)
            offsets.append(float(angle.offset_over_pi) * math.pi)
            steps.append(float(angle.step_j))
            mults.append(float(table[root]))
            coords.append(vector)
    rank = triad.rank
    return _RootTable(
        kinds=np.array(kinds, dtype=bool),
        offsets=np.array(offsets),
        steps=np.array(steps),
        mults=np.array(mults),
        coords=np.array(coords).reshape(-1, rank),
        singular_mults=np.array(singular_mults),
        singular_coords=np.array(singular_coords).reshape(-1, rank),
        gram=np.array(triad.gram.tolist(), dtype=float),
    )


def _trig_values(table: _RootTable, psi: np.ndarray) -> np.ndarray:
    """cot or tan of every regular angle, shape (N, R)"""
    angles = table.offsets[None, :] + np.outer(psi, table.steps)
    with np.errstate(divide="ignore", invalid="ignore"):
        cot = np.cos(angles) / np.sin(angles)
        tan = np.sin(angles) / np.cos(angles)
    return np.where(table.kinds[None, :], cot, tan)


def _tension_weights(table: _RootTable, values: np.ndarray) -> np.ndarray:
    """−m·cot for Σ roots, +n·tan for W roots"""
    signs = np.where(table.kinds, -1.0, 1.0)
    return values * (signs * table.mults)[None, :]


def _grid_terms(table: _RootTable, fn: str, psi: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Per-root scalar weights (N, R') and the matching directions (R', rank)"""
    values = _trig_values(table, psi)
    tension = _tension_weights(table, values)
    if fn == "tension":
        return tension, table.coords
    tau = tension @ table.coords
    k = float(HERMANN_COEFFICIENT if fn == "hermann" else GROUP_COEFFICIENT)
    pairings = tau @ table.gram @ table.coords.T
    weights = table.mults[None, :] * pairings * (k - values * values)
    if fn == "group" and len(table.singular_mults):
        extra = table.singular_mults[None, :] * (tau @ table.gram @ table.singular_coords.T)
        return np.hstack([weights, extra]), np.vstack([table.coords, table.singular_coords])
    return weights, table.coords


def _as_fn(fn_id: str) -> str:
    if fn_id not in FUNCTIONS:
        raise OracleError(f"unknown function {fn_id!r}; expected one of {sorted(set(FUNCTIONS.values()))}")
    return FUNCTIONS[fn_id]


def _as_edge(triad: SymmetricTriad, edge: Union[EdgeParam, Stratum, str, int]) -> EdgeParam:
    if isinstance(edge, EdgeParam):
        return edge
    stratum = edge if isinstance(edge, Stratum) else find_edge(triad, str(edge))
    return parametrize_edge(triad, stratum)


def _check_point(table: _RootTable, edge: EdgeParam, psi: float, profile: NumericProfile) -> None:
    lo, hi = edge.psi_bounds()
    margin = profile.boundary_margin * (hi - lo)
    if not lo + margin <= psi <= hi - margin:
        raise OracleError(f"ψ = {psi} lies outside the interior ({lo + margin}, {hi - margin}) of {edge.edge_id}")
    for is_cot, offset, step in zip(table.kinds, table.offsets, table.steps):
        if step == 0:
            continue
        shift = 0.0 if is_cot else math.pi / 2
        k = round((offset + step * psi - shift) / math.pi)
        pole = (k * math.pi + shift - offset) / step
        if abs(psi - pole) <= margin:
            raise OracleError(f"ψ = {psi} is within {margin:g} of a pole at ψ = {pole} on {edge.edge_id}")


def _evaluate_vector(triad: SymmetricTriad, edge: Union[EdgeParam, Stratum, str, int], psi: float,
                     fn: str, profile: Optional[NumericProfile]) -> np.ndarray:
    profile = profile or default_profile()
    edge = _as_edge(triad, edge)
    table = _root_table(triad, edge)
    psi = float(psi)
    _check_point(table, edge, psi, profile)
    weights, directions = _grid_terms(table, fn, np.array([psi]))
    return (weights @ directions)[0]


def eval_tension_numeric(triad: SymmetricTriad, edge: Union[EdgeParam, Stratum, str, int], psi: float,
                         action: str = "hermann", profile: Optional[NumericProfile] = None) -> np.ndarray:
    """τ at ψ by direct summation of −m·cot⟨λ,H⟩·λ + n·tan⟨α,H⟩·α"""
    check_action(action)
    return _evaluate_vector(triad, edge, psi, "tension", profile)


def eval_criterion_numeric(triad: SymmetricTriad, edge: Union[EdgeParam, Stratum, str, int], psi: float,
                           action: str = "hermann", profile: Optional[NumericProfile] = None) -> np.ndarray:
    check_action(action)
    return _evaluate_vector(triad, edge, psi, action, profile)


@dataclass(frozen=True)
class _Projection:
    """Scalar reductions ⟨V, ν⟩ (scanned) and ⟨V, μ⟩ (must vanish alongside)"""
    scan: np.ndarray
    check: Optional[np.ndarray]


def _projection(triad: SymmetricTriad, edge: EdgeParam, table: _RootTable) -> _Projection:
    g = table.gram
    if triad.rank == 1:
        return _Projection(scan=np.array([1.0]), check=None)
    fixed = list(edge.sigma_H) + list(edge.w_H)
    if not fixed:
        logger.debug(f"{edge.edge_id}: no singular root; scanning the first component")
        return _Projection(scan=np.array([1.0, 0.0]), check=np.array([0.0, 1.0]))
    mu = np.array([float(x) for x in fixed[0].coords])
    w = g @ mu
    nu = np.array([-w[1], w[0]])
    # dual vectors so that V·d = ⟨V, ν⟩ and ⟨V, μ⟩
    return _Projection(scan=g @ nu, check=g @ mu)


class _ScalarFunction:
    """Normalized scalar reduction f/(1 + Σ|terms|) of a vector function along an edge"""

    def __init__(self, triad: SymmetricTriad, edge: EdgeParam, fn: str):
        self.fn = fn
        self.table = _root_table(triad, edge)
        self.projection = _projection(triad, edge, self.table)

    def _reduce(self, weights: np.ndarray, directions: np.ndarray, dual: np.ndarray) -> np.ndarray:
        along = directions @ dual
        value = weights @ along
        scale = 1.0 + np.abs(weights) @ np.abs(along)
        return value / scale

    def __call__(self, psi: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """(normalized scan value, residual) on an array of ψ"""
        weights, directions = _grid_terms(self.table, self.fn, psi)
        with np.errstate(invalid="ignore"):
            scan = self._reduce(weights, directions, self.projection.scan)
            residual = np.abs(scan)
            if self.projection.check is not None:
                residual = np.maximum(residual, np.abs(self._reduce(weights, directions, self.projection.check)))
        return scan, residual

    def at(self, psi: float) -> Tuple[float, float]:
        scan, residual = self(np.array([psi]))
        return float(scan[0]), float(residual[0])


def _bracketed_root(f: _ScalarFunction, lo: float, hi: float, tol: float) -> float:
    """Sign-change zero by Brent's method; the midpoint when the bracket straddles a pole"""
    try:
        return float(brentq(lambda x: f.at(x)[0], lo, hi, xtol=tol, maxiter=200))
    except (ValueError, RuntimeError):
        return 0.5 * (lo + hi)


def _residual_minimum(f: _ScalarFunction, lo: float, hi: float, tol: float) -> float:
    result = minimize_scalar(lambda x: f.at(x)[1], bounds=(lo, hi), method="bounded",
                             options={"xatol": tol, "maxiter": 500})
    return float(result.x)


def _dedupe(roots: List[NumericRoot]) -> List[NumericRoot]:
    kept: List[NumericRoot] = []
    for root in sorted(roots, key=lambda r: r.psi):
        if kept and root.psi - kept[-1].psi < DEDUPE_DISTANCE:
            if root.residual < kept[-1].residual:
                kept[-1] = root
            continue
        kept.append(root)
    return kept


def find_roots_numeric(fn_id: str, triad: SymmetricTriad, edge: Union[EdgeParam, Stratum, str, int],
                       profile: Optional[NumericProfile] = None) -> List[NumericRoot]:
    """Zeros of the tension or criterion vector on the edge interior, sorted by ψ"""
    fn = _as_fn(fn_id)
    profile = profile or default_profile()
    edge = _as_edge(triad, edge)
    f = _ScalarFunction(triad, edge, fn)

    lo, hi = edge.psi_bounds()
    margin = profile.boundary_margin * (hi - lo)
    grid = np.linspace(lo + margin, hi - margin, profile.grid_n)
    scan, residual = f(grid)
    finite = np.isfinite(scan) & np.isfinite(residual)

    if finite.any() and np.nanmax(np.where(finite, residual, 0.0)) < RESIDUAL_TOL:
        logger.warning(f"{edge.edge_id}: {fn} function vanishes along the whole edge")
        return []

    found: List[NumericRoot] = []
    signs = np.sign(scan)

    for i in np.flatnonzero(finite & (signs == 0)):
        found.append(NumericRoot(float(grid[i]), float(residual[i])))

    brackets = np.flatnonzero(finite[:-1] & finite[1:] & (signs[:-1] * signs[1:] < 0))
    for i in brackets:
        psi = _bracketed_root(f, float(grid[i]), float(grid[i + 1]), profile.bisect_tol)
        _, res = f.at(psi)
        if res < RESIDUAL_TOL:
            found.append(NumericRoot(psi, res))
        else:
            logger.debug(f"{edge.edge_id}: sign change at ψ ≈ {psi:.12g} is a pole (residual {res:.3g})")

    # tangential roots: local minima of the residual without a sign change
    inner = np.arange(1, len(grid) - 1)
    ok = finite[inner - 1] & finite[inner] & finite[inner + 1]
    minima = inner[
        ok
        & (residual[inner] < residual[inner - 1])
        & (residual[inner] <= residual[inner + 1])
        & (residual[inner] < SCREEN_LEVEL)
        & (signs[inner - 1] * signs[inner + 1] > 0)
        & (signs[inner - 1] * signs[inner] > 0)
    ]
    for i in minima:
        psi = _residual_minimum(f, float(grid[i - 1]), float(grid[i + 1]), profile.bisect_tol)
        _, res = f.at(psi)
        if res < RESIDUAL_TOL:
            found.append(NumericRoot(psi, res, tangential=True))

    roots = _dedupe(found)
    logger.debug(f"{edge.edge_id} [{fn}]: numeric roots at ψ/π = {[round(r.psi_over_pi, 12) for r in roots]}")
    return roots


@dataclass
class CrossCheckReport:
    family: str
    edge: str
    action: str
    match: bool
    exact_proper: List[float] = field(default_factory=list)
    numeric_proper: List[float] = field(default_factory=list)
    exact_harmonic: List[float] = field(default_factory=list)
    numeric_harmonic: List[float] = field(default_factory=list)
    deltas: List[float] = field(default_factory=list)
    messages: List[str] = field(default_factory=list)
    note: str = ""

    @property
    def max_delta(self) -> float:
        return max(self.deltas, default=0.0)

    def describe(self) -> str:
        status = "match" if self.match else "MISMATCH"
        head = f"{self.family} {self.edge} [{self.action}]: {status}"
        if self.deltas:
            head += f", max |Δψ| = {self.max_delta:.3g}"
        lines = [head] + [f"  {m}" for m in self.messages]
        if self.note:
            lines.append(f"  note: {self.note}")
        return "\n".join(lines)

    def to_dict(self) -> Dict:
        return {
            "family": self.family,
            "edge": self.edge,
            "action": self.action,
            "match": self.match,
            "exact_proper": self.exact_proper,
            "numeric_proper": self.numeric_proper,
            "exact_harmonic": self.exact_harmonic,
            "numeric_harmonic": self.numeric_harmonic,
            "max_delta": self.max_delta,
            "messages": self.messages,
            "note": self.note,
        }


def _compare(label: str, exact: Sequence[float], numeric: Sequence[NumericRoot],
             report: CrossCheckReport) -> bool:
    if len(exact) != len(numeric):
        report.messages.append(
            f"{label}: exact count {len(exact)} != numeric count {len(numeric)} "
            f"(exact ψ {[round(p, 12) for p in exact]}, numeric ψ {[round(r.psi, 12) for r in numeric]})"
        )
        return False
    ok = True
    for psi, root in zip(sorted(exact), numeric):
        delta = abs(psi - root.psi)
        report.deltas.append(delta)
        limit = TANGENTIAL_TOL if root.tangential else LOCATION_TOL
        if delta > limit:
            report.messages.append(f"{label}: ψ exact {psi:.15g} vs numeric {root.psi:.15g} (|Δ| = {delta:.3g})")
            ok = False
    return ok


def cross_check(result: ClassificationResult, profile: Optional[NumericProfile] = None,
                triad: Optional[SymmetricTriad] = None, catalog: Optional[TriadCatalog] = None,
                proper_override: Optional[sp.Poly] = None) -> CrossCheckReport:
    """Reconcile exact roots of one classified edge with the direct numeric path"""
    profile = profile or default_profile()
    report = CrossCheckReport(result.family, result.edge, result.action, match=True)
    if result.note.startswith("ALL_HARMONIC"):
        report.note = "tension vanishes along the edge; nothing to reconcile"
        return report

    triad = triad or lookup(result.family, result.params or None, catalog)
    edge = parametrize_edge(triad, find_edge(triad, str(result.edge_index)))

    if proper_override is not None:
        exact_proper = [math.atan2(1.0, iv.midpoint) for iv in roots_in_domain(proper_override, edge)]
        report.note = "exact proper roots recomputed from an override polynomial"
    else:
        exact_proper = [r.psi for r in result.proper_roots]
    report.exact_proper = sorted(exact_proper)
    report.exact_harmonic = sorted(r.psi for r in result.harmonic_roots)

    harmonic = find_roots_numeric("tension", triad, edge, profile)
    criterion = find_roots_numeric(result.action, triad, edge, profile)
    proper = [
        r for r in criterion
        if all(abs(r.psi - h.psi) > HARMONIC_SEPARATION for h in harmonic)
    ]
    report.numeric_harmonic = [r.psi for r in harmonic]
    report.numeric_proper = [r.psi for r in proper]

    harmonic_ok = _compare("harmonic", report.exact_harmonic, harmonic, report)
    proper_ok = _compare("proper", report.exact_proper, proper, report)
    report.match = harmonic_ok and proper_ok
    if not report.match:
        logger.warning(f"cross-check mismatch on {result.family} {result.edge}: {'; '.join(report.messages)}")
    return report


def cross_check_all(results: Sequence[ClassificationResult], profile: Optional[NumericProfile] = None,
                    catalog: Optional[TriadCatalog] = None,
                    max_workers: Optional[int] = None) -> List[CrossCheckReport]:
    """One report per result, in input order"""
    profile = profile or default_profile()
    if max_workers is None:
        from config import config
        max_workers = config.max_workers

    reports: Dict[int, CrossCheckReport] = {}
    if max_workers <= 1:
        for i, result in enumerate(results):
            reports[i] = cross_check(result, profile, catalog=catalog)
    else:
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            futures = {executor.submit(cross_check, r, profile, None, catalog): i for i, r in enumerate(results)}
            for future in as_completed(futures):
                reports[futures[future]] = future.result()

    ordered = [reports[i] for i in range(len(results))]
    failures = sum(1 for r in ordered if not r.match)
    worst = max((r.max_delta for r in ordered), default=0.0)
    logger.info(f"Cross-checked {len(ordered)} edges: {failures} mismatches, max |Δψ| = {worst:.3g}")
    return ordered
