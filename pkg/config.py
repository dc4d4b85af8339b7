#!/usr/bin/env python3
"""
Configuration for the Symmetric Triad Classifier
Catalog location, numeric oracle defaults and run settings
"""

import logging
import os
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

logger = logging.getLogger(__name__)

PACKAGE_DIR = Path(__file__).resolve().parent
DEFAULT_CATALOG = PACKAGE_DIR / "data" / "triad_catalog.json"


class TriadConfig:
    """Settings read from the environment (and a local .env file)"""

    def __init__(self):
        load_dotenv()

        self.catalog_path = self._get_catalog_path()

        # Numeric oracle profile
        self.grid_n = self._get_int("TRIAD_GRID_N", 20000)
        self.bisect_tol = self._get_float("TRIAD_BISECT_TOL", 1e-12)
        self.boundary_margin = self._get_float("TRIAD_BOUNDARY_MARGIN", 1e-6)

        # Classification run settings
        self.max_workers = self._get_int("TRIAD_MAX_WORKERS", 1)
        self.scan_min = self._get_int("TRIAD_SCAN_MIN", 2)
        self.scan_max = self._get_int("TRIAD_SCAN_MAX", 100)

        self.log_level = os.getenv("TRIAD_LOG_LEVEL", "INFO").upper()
        self.output_dir = Path(os.getenv("TRIAD_OUTPUT_DIR", "reports"))

    def _get_catalog_path(self) -> Path:
        """Catalog file: environment override first, then the packaged catalog"""
        override = os.getenv("TRIAD_CATALOG_PATH")
        if override:
            return Path(override)
        return DEFAULT_CATALOG

    @staticmethod
    def _get_int(name: str, default: int) -> int:
        raw = os.getenv(name)
        if raw is None:
            return default
        try:
            return int(raw)
        except ValueError:
            logger.warning(f"Ignoring malformed {name}={raw!r}, using {default}")
            return default

    @staticmethod
    def _get_float(name: str, default: float) -> float:
        raw = os.getenv(name)
        if raw is None:
            return default
        try:
            return float(raw)
        except ValueError:
            logger.warning(f"Ignoring malformed {name}={raw!r}, using {default}")
            return default

    def is_custom_catalog(self) -> bool:
        """True when TRIAD_CATALOG_PATH points somewhere other than the packaged file"""
        return self.catalog_path.resolve() != DEFAULT_CATALOG

    def numeric_profile(self, grid_n: Optional[int] = None):
        """NumericProfile built from these settings"""
        from numeric_oracle import NumericProfile

        return NumericProfile(
            grid_n=grid_n or self.grid_n,
            bisect_tol=self.bisect_tol,
            boundary_margin=self.boundary_margin,
        )


# Global config instance
config = TriadConfig()
