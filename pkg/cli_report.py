#!/usr/bin/env python3
"""
Classification Reports and Command Line
Table rows in markdown/json/csv and the triad command-line interface
"""

import argparse
import json
import logging
import sys
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import pandas as pd

from classifier import (
    SUITES,
    ClassificationResult,
    RootInfo,
    classify_entry,
    classify_family,
    classify_suite,
    discriminant_bounds,
    threshold_scan,
)
from exact_algebra import TriadError
from orbit_strata import build_cell, edges, find_edge, parametrize_edge, vertices
from triad_catalog import CatalogError, TriadCatalog, load_catalog, validate

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_MISMATCH = 2
EXIT_DATA = 3

FORMATS = ("md", "json", "csv")
SUITE_ORDER = ("isotropy2", "hermann2", "rank1-group")
SUITE_TITLES = {
    "isotropy2": "Isotropy actions of rank 2 (hermann action)",
    "hermann2": "Hermann actions of rank 2 (hermann action)",
    "rank1-group": "Cohomogeneity one (group action)",
}


def round12(value: Optional[float]) -> Optional[float]:
    """Twelve significant digits; display only"""
    if value is None:
        return None
    return float(f"{value:.12g}")


def _root_entry(info: RootInfo) -> Dict:
    return {
        "variable": info.variable,
        "closed_form": None if info.closed_form is None else str(info.closed_form),
        "value": round12(info.display_value if info.display_value is not None else info.c_value),
        "psi_over_pi": round12(info.psi_over_pi),
    }


def describe_root(root: Dict) -> str:
    head = f"ψ/π ≈ {root['psi_over_pi']}"
    if root.get("closed_form"):
        return f"{root['variable']} = {root['closed_form']} ({head})"
    return f"{root['variable']} ≈ {root['value']} ({head})"


@dataclass
class ReportRow:
    """One (family, edge) line of a classification table"""
    family: str
    groups: str
    triad_type: str
    kind: str
    rank: int
    params: Dict[str, int]
    multiplicities: str
    edge: str
    edge_index: int
    action: str
    category: str
    expected: Optional[str] = None
    codim: Optional[str] = None
    proper_roots: List[Dict] = field(default_factory=list)
    harmonic_roots: List[Dict] = field(default_factory=list)
    polynomial: str = ""
    theorem_list: Optional[int] = None
    label: Optional[str] = None
    source: str = ""
    note: str = ""

    @classmethod
    def from_dict(cls, data: Dict) -> "ReportRow":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise CatalogError(f"unknown report fields {sorted(unknown)}")
        values = dict(data)
        values["params"] = {str(k): int(v) for k, v in data.get("params", {}).items()}
        values["proper_roots"] = [dict(r) for r in data.get("proper_roots", [])]
        values["harmonic_roots"] = [dict(r) for r in data.get("harmonic_roots", [])]
        return cls(**values)

    def to_dict(self) -> Dict:
        return asdict(self)

    @property
    def deviates(self) -> bool:
        return self.expected is not None and self.expected != self.category

    def category_cell(self) -> str:
        cell = f"({self.category})"
        if self.deviates:
            cell += f" [table: ({self.expected})]"
        return cell

    def list_cell(self) -> str:
        if self.theorem_list is None:
            return ""
        return f"{self.theorem_list} {self.label}" if self.label else str(self.theorem_list)


def rows_from_results(results: Sequence[ClassificationResult],
                      catalog: Optional[TriadCatalog] = None) -> List[ReportRow]:
    catalog = catalog or load_catalog()
    rows = []
    for result in results:
        entry = catalog.get(result.family)
        rows.append(ReportRow(
            family=result.family,
            groups=entry.groups,
            triad_type=entry.triad_type,
            kind=entry.kind,
            rank=entry.rank,
            params=dict(result.params),
            multiplicities=entry.multiplicity_tuple(result.params),
            edge=result.edge,
            edge_index=result.edge_index,
            action=result.action,
            category=result.category,
            expected=result.expected,
            codim=result.codim,
            proper_roots=[_root_entry(r) for r in result.proper_roots],
            harmonic_roots=[_root_entry(r) for r in result.harmonic_roots],
            polynomial=result.proper_poly,
            theorem_list=result.theorem_list,
            label=result.label,
            source=entry.source,
            note=result.note,
        ))
    return rows


def _triad_header(rows: Sequence[ReportRow]) -> str:
    kinds = {row.kind for row in rows}
    if kinds == {"isotropy"}:
        return "(G, K₁)"
    if kinds == {"hermann"}:
        return "(G, K₁, K₂)"
    return "(G, K₁[, K₂])"


def _markdown(rows: Sequence[ReportRow], title: str, details: bool) -> str:
    with_list = any(row.theorem_list is not None for row in rows)
    header = [_triad_header(rows), "multiplicities", "Δ", "category", "codim"] + (["list"] if with_list else [])
    lines = [f"# {title}", "", "| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    for row in rows:
        cells = [row.groups, row.multiplicities, row.edge, row.category_cell(), row.codim or ""]
        if with_list:
            cells.append(row.list_cell())
        lines.append("| " + " | ".join(cells) + " |")
    if details:
        lines += ["", "## Proper biharmonic orbits", ""]
        for row in rows:
            found = "; ".join(describe_root(r) for r in row.proper_roots) or "none"
            lines.append(f"- {row.groups} {row.edge}: {found}")
            if row.polynomial:
                lines.append(f"  - criterion: {row.polynomial}")
            if row.note:
                lines.append(f"  - note: {row.note}")
    return "\n".join(lines) + "\n"


def _dataframe(rows: Sequence[ReportRow]) -> pd.DataFrame:
    data = []
    for row in rows:
        data.append({
            "family": row.family,
            "groups": row.groups,
            "type": row.triad_type,
            "params": ",".join(f"{k}={v}" for k, v in row.params.items()),
            "multiplicities": row.multiplicities,
            "edge": row.edge,
            "action": row.action,
            "category": row.category,
            "expected": row.expected or "",
            "codim": row.codim or "",
            "proper_roots": "; ".join(describe_root(r) for r in row.proper_roots),
            "list": row.list_cell(),
        })
    return pd.DataFrame(data)


def emit_report(rows: Sequence[ReportRow], fmt: str = "md", suite: Optional[str] = None,
                details: bool = False) -> str:
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")
    if fmt == "json":
        return json.dumps([row.to_dict() for row in rows], indent=2, ensure_ascii=False) + "\n"
    if fmt == "csv":
        return _dataframe(rows).to_csv(index=False)
    if suite is not None:
        title = SUITE_TITLES[suite]
    else:
        actions = sorted({row.action for row in rows})
        title = f"Classification ({', '.join(actions)} action)"
    return _markdown(rows, title, details)


def parse_report(text: str) -> List[ReportRow]:
    """Rows of a json report"""
    data = json.loads(text)
    if not isinstance(data, list):
        raise CatalogError("json report must be an array of rows")
    return [ReportRow.from_dict(item) for item in data]


def suite_rows(suite: str, catalog: Optional[TriadCatalog] = None,
               max_workers: Optional[int] = None) -> List[ReportRow]:
    catalog = catalog or load_catalog()
    return rows_from_results(classify_suite(suite, catalog, max_workers), catalog)


def parse_params(text: str) -> Dict[str, int]:
    """'a=1,b=3' -> {'a': 1, 'b': 3}"""
    params: Dict[str, int] = {}
    for item in filter(None, (part.strip() for part in text.split(","))):
        name, sep, value = item.partition("=")
        if not sep or not name.strip():
            raise argparse.ArgumentTypeError(f"expected k=v pairs, got {item!r}")
        try:
            params[name.strip()] = int(value)
        except ValueError:
            raise argparse.ArgumentTypeError(f"parameter {name.strip()} must be an integer, got {value!r}")
    return params


def _write(text: str, output: Optional[Path]) -> None:
    if output is None:
        sys.stdout.write(text)
        return
    output.parent.mkdir(parents=True, exist_ok=True)
    with open(output, "w", encoding="utf-8") as f:
        f.write(text)
    logger.info(f"Wrote {output}")


def _default_action(rank: int) -> str:
    return "group" if rank == 1 else "hermann"


def cmd_classify(args, catalog: TriadCatalog) -> int:
    entry = catalog.get(args.triad)
    action = args.action or _default_action(entry.rank)
    if args.edge:
        triad = entry.instantiate(args.params)
        results = [classify_family(triad, find_edge(triad, args.edge), action, entry)]
    else:
        results = classify_entry(entry, action, args.params)
    rows = rows_from_results(results, catalog)
    _write(emit_report(rows, args.format, details=True), args.output)
    return EXIT_OK


def _suites(name: str) -> List[str]:
    return list(SUITE_ORDER) if name == "all" else [name]


def cmd_report(args, catalog: TriadCatalog) -> int:
    documents = []
    all_rows: List[ReportRow] = []
    for suite in _suites(args.suite):
        rows = suite_rows(suite, catalog, args.workers)
        all_rows.extend(rows)
        if args.format == "md":
            documents.append(emit_report(rows, "md", suite))
    text = "\n".join(documents) if args.format == "md" else emit_report(all_rows, args.format)
    _write(text, args.output)
    deviations = [row for row in all_rows if row.deviates]
    for row in deviations:
        logger.warning(f"{row.family} {row.edge}: ({row.category}) where the table has ({row.expected})")
    return EXIT_OK


def cmd_verify(args, catalog: TriadCatalog) -> int:
    from config import config
    from numeric_oracle import cross_check_all

    profile = config.numeric_profile(args.grid_n)
    results: List[ClassificationResult] = []
    for suite in _suites(args.suite):
        results.extend(classify_suite(suite, catalog, args.workers))
    reports = cross_check_all(results, profile, catalog, args.workers)

    failures = [r for r in reports if not r.match]
    for report in failures:
        print(report.describe())
    worst = max((r.max_delta for r in reports), default=0.0)
    print(f"Cross-checked {len(reports)} edges: {len(reports) - len(failures)} match, "
          f"{len(failures)} mismatch, max |Δψ| = {worst:.3g}")
    if args.output:
        args.output.parent.mkdir(parents=True, exist_ok=True)
        with open(args.output, "w", encoding="utf-8") as f:
            json.dump([r.to_dict() for r in reports], f, indent=2, default=str, ensure_ascii=False)
    if failures:
        logger.error(f"{len(failures)} edges disagree between the exact and numeric paths")
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_catalog_list(args, catalog: TriadCatalog) -> int:
    entries = catalog.enumerate_families(rank=args.rank, kind=args.kind)
    df = pd.DataFrame([
        {"type": e.triad_type, "kind": e.kind, "name": e.name, "groups": e.groups, "source": e.source}
        for e in entries
    ])
    print(df.to_string(index=False) if not df.empty else "no entries")
    return EXIT_OK


def cmd_catalog_validate(args, catalog: TriadCatalog) -> int:
    failed = 0
    for entry in catalog:
        problems = validate(entry.instantiate())
        if problems:
            failed += 1
            print(f"❌ {entry.name}")
            for problem in problems:
                print(f"   {problem}")
        elif args.verbose:
            print(f"✅ {entry.name}")
    print(f"Validated {len(catalog)} entries from {catalog.source}: {failed} with problems")
    return EXIT_DATA if failed else EXIT_OK


def cmd_catalog_show(args, catalog: TriadCatalog) -> int:
    entry = catalog.get(args.name)
    triad = entry.instantiate(args.params)
    cell = build_cell(triad)
    print(f"{entry.groups}  [{entry.triad_type}, {entry.kind}, rank {entry.rank}]")
    if entry.source:
        print(f"source: {entry.source}")
    print(f"parameters: {triad.params or 'none'}; multiplicities {entry.multiplicity_tuple(triad.params)}")
    for root in triad.sigma_plus:
        print(f"  Σ⁺ {triad.multiplicity_label(root, 'sigma')}")
    for root in triad.w_plus:
        print(f"  W⁺ {triad.multiplicity_label(root, 'w')}")
    print(f"simple roots: {[triad.root_name(r) for r in cell.simple]}, top root: {triad.root_name(cell.top)}")
    for stratum in edges(triad):
        edge = parametrize_edge(triad, stratum)
        angles = ", ".join(f"{triad.root_name(r)}: {a}" for r, a in edge.angles.items())
        print(f"edge {stratum.index} {stratum.label}: ψ/π ∈ {edge.psi_domain}, c ∈ {edge.c_domain}")
        print(f"    {angles}")
    for vertex in vertices(triad):
        print(f"vertex {vertex}")
    return EXIT_OK


def cmd_threshold(args, catalog: TriadCatalog) -> int:
    entry = catalog.get(args.triad)
    report = threshold_scan(entry, args.param, args.lo, args.hi, args.action, args.edge)
    if args.format == "json":
        data = asdict(report)
        data["regimes"] = report.regimes
        print(json.dumps(data, indent=2, default=str, ensure_ascii=False))
    else:
        print(report.describe())
    return EXIT_OK


def cmd_bounds(args, catalog: TriadCatalog) -> int:
    entry = catalog.get(args.triad)
    print(discriminant_bounds(entry, args.action, args.edge).describe())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description='Biharmonic orbit classification over symmetric triads')
    parser.add_argument('--catalog', type=Path, help='Catalog JSON (overrides TRIAD_CATALOG_PATH)')
    parser.add_argument('--verbose', action='store_true', help='Verbose logging')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('classify', help='Classify the edges of one catalog family')
    p.add_argument('--triad', required=True, help='Catalog name, e.g. "SU(3),SO(3)"')
    p.add_argument('--params', type=parse_params, default=None, help='Parameters as k=v,...')
    p.add_argument('--edge', help='Edge index or Δ label such as "a1,delta"')
    p.add_argument('--action', choices=['hermann', 'group'])
    p.add_argument('--format', choices=FORMATS, default='md')
    p.add_argument('--output', type=Path)
    p.set_defaults(handler=cmd_classify)

    p = sub.add_parser('report', help='Reproduce a classification table')
    p.add_argument('--suite', choices=list(SUITE_ORDER) + ['all'], default='all')
    p.add_argument('--format', choices=FORMATS, default='md')
    p.add_argument('--output', type=Path)
    p.add_argument('--workers', type=int, default=None, help='Parallel families')
    p.set_defaults(handler=cmd_report)

    p = sub.add_parser('verify', help='Cross-check exact results with the numeric oracle')
    p.add_argument('--suite', choices=list(SUITE_ORDER) + ['all'], default='all')
    p.add_argument('--grid-n', type=int, default=None)
    p.add_argument('--workers', type=int, default=None)
    p.add_argument('--output', type=Path, help='Write the per-edge reports as JSON')
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser('catalog', help='Inspect the triad catalog')
    catalog_sub = p.add_subparsers(dest='catalog_command', required=True)
    q = catalog_sub.add_parser('list')
    q.add_argument('--rank', type=int)
    q.add_argument('--kind', choices=['isotropy', 'hermann'])
    q.set_defaults(handler=cmd_catalog_list)
    q = catalog_sub.add_parser('validate')
    q.set_defaults(handler=cmd_catalog_validate)
    q = catalog_sub.add_parser('show')
    q.add_argument('name')
    q.add_argument('--params', type=parse_params, default=None)
    q.set_defaults(handler=cmd_catalog_show)

    p = sub.add_parser('threshold', help='Scan one parameter for category changes')
    p.add_argument('--triad', required=True)
    p.add_argument('--param', required=True)
    p.add_argument('--lo', type=int)
    p.add_argument('--hi', type=int)
    p.add_argument('--action', choices=['hermann', 'group'], default='group')
    p.add_argument('--edge', default='1')
    p.add_argument('--format', choices=['text', 'json'], default='text')
    p.set_defaults(handler=cmd_threshold)

    p = sub.add_parser('bounds', help='Exact multiplicity-ratio bounds for a two-parameter type')
    p.add_argument('--triad', required=True, help='Any catalog family of the type')
    p.add_argument('--action', choices=['hermann', 'group'], default='group')
    p.add_argument('--edge', default='1')
    p.set_defaults(handler=cmd_bounds)
    return parser


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    """Parse argv, dispatch, and map failures to exit codes"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE

    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)

    try:
        catalog = load_catalog(args.catalog)
        return args.handler(args, catalog)
    except TriadError as e:
        logger.error(f"{type(e).__name__}: {e}")
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_DATA
    except (OSError, json.JSONDecodeError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_DATA


def main():
    from config import config

    logging.basicConfig(
        level=getattr(logging, config.log_level, logging.INFO),
        format='%(asctime)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
