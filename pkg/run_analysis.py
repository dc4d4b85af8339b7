#!/usr/bin/env python3
"""
Quick start script for the biharmonic orbit classifier
Checks the setup, writes every suite report and runs the numeric cross-check
"""

import logging
import sys
from datetime import datetime
from pathlib import Path

REQUIRED_FILES = [
    'cli_report.py',
    'config.py',
    'requirements.txt',
]


def check_environment():
    """Check if environment is properly set up"""
    here = Path(__file__).resolve().parent
    missing_files = [f for f in REQUIRED_FILES if not (here / f).exists()]
    if missing_files:
        print(f"❌ Missing required files: {missing_files}")
        return False

    try:
        import numpy  # noqa: F401
        import pandas  # noqa: F401
        import scipy  # noqa: F401
        import sympy  # noqa: F401
    except ImportError as e:
        print(f"❌ Missing dependency: {e.name}")
        print("Run: pip install -r requirements.txt")
        return False

    if sys.prefix == sys.base_prefix:
        print("⚠️ Virtual environment not activated")
    return True


def check_catalog():
    """Load and validate the configured catalog"""
    from config import config
    from triad_catalog import CatalogError, load_catalog, validate

    try:
        catalog = load_catalog()
    except CatalogError as e:
        print(f"❌ Catalog error: {e}")
        return None

    problems = {entry.name: validate(entry.instantiate()) for entry in catalog}
    broken = {name: p for name, p in problems.items() if p}
    if broken:
        for name, found in broken.items():
            print(f"❌ {name}: {found[0]}")
        return None

    origin = "custom" if config.is_custom_catalog() else "packaged"
    print(f"✅ {len(catalog)} catalog entries ({origin}: {catalog.source})")
    return catalog


def main():
    """Main execution with setup checks"""
    from config import config

    logging.basicConfig(level=getattr(logging, config.log_level, logging.INFO),
                        format='%(asctime)s - %(levelname)s - %(message)s')

    print("🔺 Symmetric Triad Biharmonic Classifier")
    print("=" * 40)

    if not check_environment():
        sys.exit(1)

    catalog = check_catalog()
    if catalog is None:
        sys.exit(3)

    from cli_report import SUITE_ORDER, emit_report, suite_rows
    from numeric_oracle import cross_check_all
    from classifier import classify_suite

    timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
    output_dir = Path(config.output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)

    print("\n🚀 Classifying every suite...")
    try:
        deviations = 0
        for suite in SUITE_ORDER:
            rows = suite_rows(suite, catalog)
            for fmt in ("md", "json", "csv"):
                path = output_dir / f"{suite}_{timestamp}.{fmt}"
                with open(path, "w", encoding="utf-8") as f:
                    f.write(emit_report(rows, fmt, suite))
            counts = {c: sum(1 for r in rows if r.category == c) for c in ("i", "ii", "iii")}
            suite_dev = [r for r in rows if r.deviates]
            deviations += len(suite_dev)
            print(f"  {suite}: {len(rows)} edges, (i) {counts['i']}, (ii) {counts['ii']}, (iii) {counts['iii']}")
            for row in suite_dev:
                print(f"    ⚠️ {row.family} {row.edge}: ({row.category}) vs table ({row.expected})")

        print("\n🔍 Numeric cross-check...")
        results = [r for suite in SUITE_ORDER for r in classify_suite(suite, catalog)]
        reports = cross_check_all(results, config.numeric_profile(), catalog)
        failures = [r for r in reports if not r.match]
        worst = max((r.max_delta for r in reports), default=0.0)
        for report in failures:
            print(report.describe())

        print("\n" + "=" * 40)
        print(f"📄 Reports written to {output_dir}/")
        print(f"📐 Table deviations: {deviations}")
        if failures:
            print(f"❌ {len(failures)} of {len(reports)} edges disagree with the numeric oracle")
            sys.exit(2)
        print(f"✅ All {len(reports)} edges agree with the numeric oracle (max |Δψ| = {worst:.3g})")
    except KeyboardInterrupt:
        print("\n\n⏹️ Analysis interrupted by user")
    except Exception as e:
        print(f"\n❌ Error during analysis: {e}")
        print("Check logs for details")
        sys.exit(3)


if __name__ == "__main__":
    main()
