#!/usr/bin/env python3
"""
Symmetric Triad Catalog
Root data and multiplicities for isotropy pairs and Hermann triads, with validation
"""

import itertools
import json
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import sympy as sp

from exact_algebra import ExactAlgebraError, TriadError, to_rational

logger = logging.getLogger(__name__)

KINDS = ("isotropy", "hermann")
CATEGORIES = ("i", "ii", "iii")

TYPE_FIELDS = {"rank", "kind", "gram", "sigma_plus", "w_plus", "simple_roots", "m", "n", "basis", "columns"}
ENTRY_FIELDS = TYPE_FIELDS | {
    "name", "type", "groups", "multiplicities", "params", "constraints",
    "codim", "expected", "label", "source",
}

_LABEL_TABLE = str.maketrans("₀₁₂₃₄₅₆₇₈₉²", "01234567892")
_SUBSCRIPT = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")


class CatalogError(TriadError):
    """Unknown triads, malformed catalog data and violated parameter constraints"""


def normalize_label(label: str) -> str:
    """'I-BC₂-B₂' and 'i-bc2-b2' compare equal"""
    return label.translate(_LABEL_TABLE).replace(" ", "").upper()


def normalize_name(name: str) -> str:
    return (
        name.replace(" ", "").replace("×", "x").replace("·", ".")
        .translate(_LABEL_TABLE).casefold()
    )


@dataclass(frozen=True)
class RootVector:
    """Root coordinates in the triad's basis of the section"""
    coords: Tuple[sp.Rational, ...]

    @classmethod
    def of(cls, values: Sequence) -> "RootVector":
        return cls(tuple(to_rational(v) for v in values))

    def __add__(self, other: "RootVector") -> "RootVector":
        return RootVector(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "RootVector") -> "RootVector":
        return RootVector(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "RootVector":
        return RootVector(tuple(-a for a in self.coords))

    def scaled(self, k) -> "RootVector":
        return RootVector(tuple(k * a for a in self.coords))

    def __iter__(self) -> Iterator[sp.Rational]:
        return iter(self.coords)

    def __len__(self) -> int:
        return len(self.coords)

    @property
    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coords)

    def as_matrix(self) -> sp.Matrix:
        return sp.Matrix(self.coords)

    def name(self, basis: str = "e") -> str:
        symbol = "e" if basis == "e" else "α"
        parts = []
        for i, k in enumerate(self.coords, start=1):
            if k == 0:
                continue
            index = str(i) if basis == "e" else str(i).translate(_SUBSCRIPT)
            if len(self.coords) == 1:
                index = ""
            coeff = "" if abs(k) == 1 else str(abs(k))
            sign = "-" if k < 0 else "+"
            parts.append(f"{sign}{coeff}{symbol}{index}")
        text = "".join(parts)
        return text[1:] if text.startswith("+") else text


@dataclass
class SymmetricTriad:
    """Positive roots of Σ and W with multiplicity functions m and n"""
    name: str
    triad_type: str
    rank: int
    kind: str
    gram: sp.ImmutableMatrix
    sigma_plus: Tuple[RootVector, ...]
    w_plus: Tuple[RootVector, ...]
    m: Dict[RootVector, sp.Expr]
    n: Dict[RootVector, sp.Expr]
    param_constraints: Tuple[str, ...] = ()
    params: Dict[str, int] = field(default_factory=dict)
    basis: str = "e"
    simple_roots: Optional[Tuple[RootVector, ...]] = None
    _coords_cache: Dict[RootVector, Tuple[int, ...]] = field(default_factory=dict, repr=False, compare=False)

    def inner(self, x: RootVector, y: RootVector) -> sp.Rational:
        return (x.as_matrix().T * self.gram * y.as_matrix())[0, 0]

    def all_roots(self) -> List[RootVector]:
        """Σ̃⁺ in catalog order, each root once"""
        seen: List[RootVector] = []
        for root in itertools.chain(self.sigma_plus, self.w_plus):
            if root not in seen:
                seen.append(root)
        return seen

    @property
    def symbols(self) -> Tuple[sp.Symbol, ...]:
        free = set()
        for value in itertools.chain(self.m.values(), self.n.values()):
            free |= sp.sympify(value).free_symbols
        return tuple(sorted(free, key=str))

    @property
    def is_symbolic(self) -> bool:
        return bool(self.symbols)

    def root_name(self, root: RootVector) -> str:
        return root.name(self.basis)

    def simple_system(self) -> Tuple[RootVector, ...]:
        """Fundamental system Π of Σ̃⁺: the indecomposable positive roots"""
        roots = self.all_roots()
        if self.simple_roots:
            missing = [r for r in self.simple_roots if r not in roots]
            if missing:
                raise CatalogError(f"simple roots {missing} are not positive roots of {self.name}")
            simple = list(self.simple_roots)
        else:
            pool = set(roots)
            simple = [lam for lam in roots if not any((lam - mu) in pool for mu in roots if mu != lam)]
        if len(simple) != self.rank or sp.Matrix([list(r) for r in simple]).rank() != self.rank:
            raise CatalogError(f"fundamental system extraction failed for {self.name}: {simple}")
        return tuple(simple)

    def simple_coords(self, root: RootVector) -> Tuple[int, ...]:
        """Nonnegative integer coordinates of a positive root over Π"""
        if root in self._coords_cache:
            return self._coords_cache[root]
        basis = sp.Matrix.hstack(*[r.as_matrix() for r in self.simple_system()])
        solution = basis.LUsolve(root.as_matrix())
        coords = []
        for value in solution:
            value = sp.nsimplify(value)
            if not value.is_integer or value < 0:
                raise CatalogError(f"root {self.root_name(root)} is not a nonnegative integer combination of Π")
            coords.append(int(value))
        self._coords_cache[root] = tuple(coords)
        return tuple(coords)

    def height(self, root: RootVector) -> int:
        return sum(self.simple_coords(root))

    def top_root(self) -> RootVector:
        """δ (highest root of Σ⁺) for isotropy pairs, α̃ for Hermann triads"""
        if self.kind == "isotropy":
            heights = {root: self.height(root) for root in self.sigma_plus}
            best = max(heights.values())
            tops = [r for r, h in heights.items() if h == best]
        else:
            pool = set(self.w_plus)
            simple = self.simple_system()
            tops = [a for a in self.w_plus if all((a + lam) not in pool for lam in simple)]
        if len(tops) != 1:
            raise CatalogError(f"top root of {self.name} is not unique: {[self.root_name(r) for r in tops]}")
        return tops[0]

    def multiplicity_label(self, root: RootVector, role: str) -> str:
        table = self.m if role == "sigma" else self.n
        return f"{'m' if role == 'sigma' else 'n'}({self.root_name(root)})={table[root]}"


def _param_symbols(names: Sequence[str]) -> Dict[str, sp.Symbol]:
    return {name: sp.Symbol(name, integer=True) for name in names}


def _parse_affine(text, namespace: Dict[str, sp.Symbol]) -> sp.Expr:
    """Affine integer expression such as '2*(b-2)'"""
    try:
        expr = sp.sympify(str(text), locals=dict(namespace))
    except (sp.SympifyError, SyntaxError, TypeError) as e:
        raise CatalogError(f"cannot parse multiplicity expression {text!r}") from e
    unknown = expr.free_symbols - set(namespace.values())
    if unknown:
        raise CatalogError(f"unknown symbols {sorted(map(str, unknown))} in {text!r}")
    if expr.free_symbols and sp.Poly(expr, *sorted(expr.free_symbols, key=str)).total_degree() > 1:
        raise CatalogError(f"multiplicity expression {text!r} is not affine")
    return expr


def _parse_constraint(text: str, namespace: Dict[str, sp.Symbol]):
    cleaned = text.replace("≤", "<=").replace("≥", ">=")
    try:
        relation = sp.sympify(cleaned, locals=dict(namespace))
    except (sp.SympifyError, SyntaxError, TypeError) as e:
        raise CatalogError(f"cannot parse constraint {text!r}") from e
    if not isinstance(relation, sp.core.relational.Relational):
        raise CatalogError(f"constraint {text!r} is not an inequality")
    return relation


def _parse_gram(rows, rank: int) -> sp.ImmutableMatrix:
    try:
        matrix = sp.ImmutableMatrix([[to_rational(x) for x in row] for row in rows])
    except ExactAlgebraError as e:
        raise CatalogError(f"gram matrix entry is not rational: {e}") from e
    if matrix.shape != (rank, rank):
        raise CatalogError(f"gram matrix shape {matrix.shape} does not match rank {rank}")
    return matrix


@dataclass
class CatalogEntry:
    """One table row: a triad family with display data from the source tables"""
    name: str
    triad_type: str
    groups: str
    source: str
    spec: Dict
    params: Tuple[str, ...] = ()
    constraints: Tuple[str, ...] = ()
    codim: Tuple[str, ...] = ()
    expected: Tuple[str, ...] = ()
    label: Optional[str] = None

    @classmethod
    def from_dict(cls, data: Dict, types: Dict[str, Dict]) -> "CatalogEntry":
        unknown = set(data) - ENTRY_FIELDS
        if unknown:
            raise CatalogError(f"unknown catalog fields {sorted(unknown)} in entry {data.get('name')!r}")
        for required in ("name", "type"):
            if required not in data:
                raise CatalogError(f"catalog entry missing {required!r}: {data}")

        spec = dict(types.get(data["type"], {}))
        spec.update({k: v for k, v in data.items() if k in TYPE_FIELDS})
        if "multiplicities" in data:
            spec["multiplicities"] = data["multiplicities"]
        for required in ("rank", "kind", "gram", "sigma_plus", "m"):
            if required not in spec:
                raise CatalogError(f"entry {data['name']!r} has no {required!r} (type {data['type']!r})")
        if spec["kind"] not in KINDS:
            raise CatalogError(f"entry {data['name']!r} has unknown kind {spec['kind']!r}")

        expected = tuple(data.get("expected", ()))
        bad = [c for c in expected if c not in CATEGORIES]
        if bad:
            raise CatalogError(f"entry {data['name']!r} has unknown expected categories {bad}")

        entry = cls(
            name=data["name"],
            triad_type=data["type"],
            groups=data.get("groups", data["name"]),
            source=data.get("source", ""),
            spec=spec,
            params=tuple(data.get("params", ())),
            constraints=tuple(data.get("constraints", ())),
            codim=tuple(str(c) for c in data.get("codim", ())),
            expected=expected,
            label=data.get("label"),
        )
        # parse eagerly so malformed data fails at load time
        entry.instantiate(symbolic=entry.params)
        for constraint in entry.constraints:
            _parse_constraint(constraint, entry.parameter_symbols())
        return entry

    @property
    def rank(self) -> int:
        return int(self.spec["rank"])

    @property
    def kind(self) -> str:
        return self.spec["kind"]

    @property
    def columns(self) -> Tuple[str, ...]:
        return tuple(self.spec.get("columns", ()))

    def parameter_symbols(self) -> Dict[str, sp.Symbol]:
        return _param_symbols(self.params)

    def _multiplicity_values(self) -> Dict[str, sp.Expr]:
        """Type-level multiplicity symbols expressed in the entry's parameters"""
        namespace = self.parameter_symbols()
        raw = self.spec.get("multiplicities", {})
        return {key: _parse_affine(value, namespace) for key, value in raw.items()}

    def check_constraints(self, params: Dict[str, int]) -> None:
        namespace = self.parameter_symbols()
        values = {namespace[k]: v for k, v in params.items()}
        for text in self.constraints:
            relation = _parse_constraint(text, namespace)
            if relation.subs(values) is not sp.true:
                raise CatalogError(f"constraint {text} violated for {self.name} with {params}")

    def resolve_params(self, params: Optional[Dict[str, int]] = None) -> Dict[str, int]:
        params = dict(params or {})
        unknown = set(params) - set(self.params)
        if unknown:
            raise CatalogError(f"{self.name} has no parameters {sorted(unknown)}; declared: {list(self.params)}")
        defaults = self.default_params()
        return {name: int(params.get(name, defaults[name])) for name in self.params}

    def default_params(self) -> Dict[str, int]:
        """Smallest integers satisfying the constraints (lexicographic by total size)"""
        if not self.params:
            return {}
        grid = sorted(itertools.product(range(0, 16), repeat=len(self.params)), key=lambda t: (sum(t), t))
        for values in grid:
            candidate = dict(zip(self.params, values))
            try:
                self.check_constraints(candidate)
            except CatalogError:
                continue
            triad = self.instantiate(candidate, check=False)
            if all(int(v) > 0 for v in itertools.chain(triad.m.values(), triad.n.values())):
                return candidate
        raise CatalogError(f"no admissible parameters found for {self.name}")

    def instantiate(self, params: Optional[Dict[str, int]] = None, symbolic: Sequence[str] = (),
                    check: bool = True) -> SymmetricTriad:
        """Concrete triad; parameters listed in symbolic stay as integer symbols"""
        namespace = self.parameter_symbols()
        concrete: Dict[str, int] = {}
        if symbolic:
            fixed = {k: v for k, v in (params or {}).items() if k not in symbolic}
            if set(symbolic) != set(self.params):
                defaults = self.default_params()
                fixed = {k: fixed.get(k, defaults[k]) for k in self.params if k not in symbolic}
            concrete = fixed
        else:
            concrete = self.resolve_params(params) if check else dict(params or {})
            if check:
                self.check_constraints(concrete)

        substitution = {namespace[k]: v for k, v in concrete.items()}
        mult_values = self._multiplicity_values()
        type_symbols = {key: sp.Symbol(key) for key in mult_values}

        def evaluate(text) -> sp.Expr:
            expr = sp.sympify(str(text), locals={**namespace, **type_symbols})
            expr = expr.subs({type_symbols[k]: v for k, v in mult_values.items()})
            leftover = expr.free_symbols - set(namespace.values())
            if leftover:
                raise CatalogError(f"{self.name}: multiplicity symbols {sorted(map(str, leftover))} not assigned")
            return sp.expand(expr.subs(substitution))

        rank = self.rank
        sigma = tuple(RootVector.of(r) for r in self.spec["sigma_plus"])
        w = tuple(RootVector.of(r) for r in self.spec.get("w_plus", []))
        for root in itertools.chain(sigma, w):
            if len(root) != rank:
                raise CatalogError(f"{self.name}: root {list(root)} has wrong dimension for rank {rank}")
        m_map = self.spec["m"]
        n_map = self.spec.get("n", {})
        try:
            m = {root: evaluate(m_map[str(i)]) for i, root in enumerate(sigma)}
            n = {root: evaluate(n_map[str(i)]) for i, root in enumerate(w)}
        except KeyError as e:
            raise CatalogError(f"{self.name}: missing multiplicity for root index {e}") from e
        simple = self.spec.get("simple_roots")

        return SymmetricTriad(
            name=self.name,
            triad_type=self.triad_type,
            rank=rank,
            kind=self.kind,
            gram=_parse_gram(self.spec["gram"], rank),
            sigma_plus=sigma,
            w_plus=w,
            m=m,
            n=n,
            param_constraints=self.constraints,
            params=concrete,
            basis=self.spec.get("basis", "e"),
            simple_roots=tuple(RootVector.of(r) for r in simple) if simple else None,
        )

    @property
    def triad(self) -> SymmetricTriad:
        return self.instantiate()

    def multiplicity_tuple(self, params: Optional[Dict[str, int]] = None) -> str:
        """Table-style multiplicity column, e.g. '(4, 4, 1)'"""
        params = self.resolve_params(params)
        namespace = self.parameter_symbols()
        values = self._multiplicity_values()
        substitution = {namespace[k]: v for k, v in params.items()}
        shown = [str(values[c].subs(substitution)) for c in self.columns if c in values]
        return f"({', '.join(shown)})"

    def codims(self, params: Optional[Dict[str, int]] = None) -> List[str]:
        params = self.resolve_params(params)
        namespace = self.parameter_symbols()
        substitution = {namespace[k]: v for k, v in params.items()}
        return [str(_parse_affine(c, namespace).subs(substitution)) for c in self.codim]


class TriadCatalog:
    """Immutable collection of catalog entries loaded from a JSON file"""

    def __init__(self, entries: List[CatalogEntry], source: str = "<memory>"):
        self.entries = entries
        self.source = source
        self._by_name: Dict[str, CatalogEntry] = {}
        for entry in entries:
            key = normalize_name(entry.name)
            if key in self._by_name:
                raise CatalogError(f"duplicate catalog name {entry.name!r}")
            self._by_name[key] = entry

    @classmethod
    def from_dict(cls, data: Dict, source: str = "<memory>") -> "TriadCatalog":
        unknown = set(data) - {"types", "entries"}
        if unknown:
            raise CatalogError(f"unknown top-level catalog fields {sorted(unknown)}")
        types = data.get("types", {})
        for label, spec in types.items():
            bad = set(spec) - TYPE_FIELDS
            if bad:
                raise CatalogError(f"unknown fields {sorted(bad)} in type {label!r}")
        entries = [CatalogEntry.from_dict(item, types) for item in data.get("entries", [])]
        return cls(entries, source)

    @classmethod
    def from_file(cls, path: Path) -> "TriadCatalog":
        path = Path(path)
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f)
        except FileNotFoundError as e:
            raise CatalogError(f"catalog file not found: {path}") from e
        except json.JSONDecodeError as e:
            raise CatalogError(f"catalog file {path} is not valid JSON: {e}") from e
        catalog = cls.from_dict(data, str(path))
        logger.info(f"Loaded {len(catalog)} catalog entries from {path}")
        return catalog

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[CatalogEntry]:
        return iter(self.entries)

    def get(self, name: str) -> CatalogEntry:
        entry = self._by_name.get(normalize_name(name))
        if entry is None:
            raise CatalogError(f"unknown triad {name!r}")
        return entry

    def lookup(self, name: str, params: Optional[Dict[str, int]] = None) -> SymmetricTriad:
        return self.get(name).instantiate(params)

    def enumerate_families(self, rank: Optional[int] = None, kind: Optional[str] = None,
                           triad_type: Optional[str] = None) -> List[CatalogEntry]:
        selected = [
            e for e in self.entries
            if (rank is None or e.rank == rank)
            and (kind is None or e.kind == kind)
            and (triad_type is None or normalize_label(e.triad_type) == normalize_label(triad_type))
        ]
        return sorted(selected, key=lambda e: (normalize_label(e.triad_type), e.name.casefold()))


@lru_cache(maxsize=4)
def _load_cached(path: str) -> TriadCatalog:
    return TriadCatalog.from_file(Path(path))


def load_catalog(path: Optional[Path] = None) -> TriadCatalog:
    """Catalog at path, or the configured one (TRIAD_CATALOG_PATH / packaged file)"""
    if path is None:
        from config import config
        path = config.catalog_path
    return _load_cached(str(Path(path).resolve()))


def lookup(name: str, params: Optional[Dict[str, int]] = None,
           catalog: Optional[TriadCatalog] = None) -> SymmetricTriad:
    return (catalog or load_catalog()).lookup(name, params)


def enumerate_families(rank: Optional[int] = None, kind: Optional[str] = None,
                       triad_type: Optional[str] = None,
                       catalog: Optional[TriadCatalog] = None) -> List[CatalogEntry]:
    return (catalog or load_catalog()).enumerate_families(rank, kind, triad_type)


def _reflect(triad: SymmetricTriad, alpha: RootVector, beta: RootVector) -> RootVector:
    ratio = 2 * triad.inner(alpha, beta) / triad.inner(beta, beta)
    return alpha - beta.scaled(ratio)


def _closure_violations(triad: SymmetricTriad, roots: Sequence[RootVector], targets: Sequence[RootVector],
                        what: str) -> List[str]:
    """Reflections in roots must map targets into ±targets"""
    pool = set(targets) | {-t for t in targets}
    violations = []
    for beta in roots:
        for alpha in targets:
            image = _reflect(triad, alpha, beta)
            if image not in pool:
                violations.append(
                    f"{what}: reflection in {triad.root_name(beta)} maps {triad.root_name(alpha)} "
                    f"outside the root set"
                )
    return violations


def validate(triad: SymmetricTriad) -> List[str]:
    """All violated structural invariants of a triad (empty when valid)"""
    violations: List[str] = []
    roots = triad.all_roots()

    if triad.kind not in KINDS:
        violations.append(f"unknown kind {triad.kind!r}")
    if triad.gram.shape != (triad.rank, triad.rank) or triad.gram != triad.gram.T:
        violations.append("gram matrix is not symmetric of size rank")
    elif not triad.gram.is_positive_definite:
        violations.append("gram matrix is not positive definite")
    for root in roots:
        if len(root) != triad.rank:
            violations.append(f"root {list(root)} has dimension {len(root)} != rank {triad.rank}")
        elif root.is_zero:
            violations.append("zero vector listed as a root")
    if violations:
        return violations

    if triad.kind == "isotropy" and triad.w_plus:
        violations.append("isotropy pair must have empty W")
    if triad.kind == "hermann" and not triad.w_plus:
        violations.append("hermann triad needs a nonempty W")

    for role, table, listed in (("m", triad.m, triad.sigma_plus), ("n", triad.n, triad.w_plus)):
        for root in listed:
            value = table.get(root)
            if value is None:
                violations.append(f"{role}({triad.root_name(root)}) is undefined")
                continue
            value = sp.sympify(value)
            if not value.free_symbols and not (value.is_integer and value > 0):
                violations.append(f"positivity: {role}({triad.root_name(root)}) = {value} is not a positive integer")

    # multiplicities forced equal by an odd pairing
    for lam in triad.sigma_plus:
        if lam not in triad.n:
            continue
        for alpha in triad.w_plus:
            ratio = 2 * triad.inner(lam, alpha) / triad.inner(alpha, alpha)
            if ratio.is_integer and ratio % 2 == 1:
                if sp.simplify(triad.m[lam] - triad.n[lam]) != 0:
                    violations.append(
                        f"odd-pairing rule: m({triad.root_name(lam)}) must equal n({triad.root_name(lam)}) "
                        f"since 2<{triad.root_name(lam)},{triad.root_name(alpha)}>/"
                        f"<{triad.root_name(alpha)},{triad.root_name(alpha)}> = {ratio}"
                    )
                break

    for alpha in roots:
        for beta in roots:
            ratio = 2 * triad.inner(alpha, beta) / triad.inner(beta, beta)
            if not ratio.is_integer:
                violations.append(
                    f"integrality: 2<{triad.root_name(alpha)},{triad.root_name(beta)}>/"
                    f"<{triad.root_name(beta)},{triad.root_name(beta)}> = {ratio}"
                )
    violations += _closure_violations(triad, roots, roots, "Σ̃ closure")
    violations += _closure_violations(triad, triad.sigma_plus, triad.sigma_plus, "Σ closure")
    if triad.w_plus:
        violations += _closure_violations(triad, roots, triad.w_plus, "W invariance")

    try:
        triad.simple_system()
        triad.top_root()
    except CatalogError as e:
        violations.append(str(e))
    return violations
