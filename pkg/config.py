"""Configuration management for quantum tree spectra."""

import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

_PACKAGE_DIR = Path(__file__).resolve().parent


def _env_bool(name: str, default: str) -> bool:
    return os.environ.get(name, default).strip().lower() in ("1", "true", "yes", "on")


@dataclass
class Config:
    """Application configuration."""

    # Logging
    log_level: str = os.environ.get("LOG_LEVEL", "INFO")
    log_format: str = os.environ.get("LOG_FORMAT", "%(asctime)s - %(name)s - %(levelname)s - %(message)s")
    log_file: Optional[str] = os.environ.get("LOG_FILE")

    # File Storage
    dictionary_path: str = os.environ.get("QTREE_DICTIONARY_PATH", "shape_dictionary.json")
    published_catalog_path: str = os.environ.get(
        "QTREE_PUBLISHED_CATALOG", str(_PACKAGE_DIR / "fixtures" / "published_catalog.json")
    )

    # Problem defaults
    edge_length: float = float(os.environ.get("QTREE_EDGE_LENGTH", "1.0"))
    x_max: float = float(os.environ.get("QTREE_X_MAX", repr(6 * math.pi)))

    # Numeric root finding
    scan_steps_per_pi: int = int(os.environ.get("QTREE_SCAN_STEPS_PER_PI", "1000"))
    bisection_tol: float = float(os.environ.get("QTREE_BISECTION_TOL", "1e-10"))
    max_bisections: int = int(os.environ.get("QTREE_MAX_BISECTIONS", "200"))
    circle_samples: int = int(os.environ.get("QTREE_CIRCLE_SAMPLES", "64"))

    # Matching tolerances
    cluster_tol: float = float(os.environ.get("QTREE_CLUSTER_TOL", "1e-6"))
    match_tol: float = float(os.environ.get("QTREE_MATCH_TOL", "1e-9"))

    # Enumeration and batch work
    max_enum_p: int = int(os.environ.get("QTREE_MAX_ENUM_P", "16"))
    dictionary_max_p: int = int(os.environ.get("QTREE_DICTIONARY_MAX_P", "9"))
    max_workers: int = int(os.environ.get("QTREE_MAX_WORKERS", "1"))
    verify_charpoly: bool = _env_bool("QTREE_VERIFY_CHARPOLY", "false")

    @property
    def scan_step(self) -> float:
        """Grid step of the determinant scan, in units of x = sqrt(lambda) * l."""
        return math.pi / self.scan_steps_per_pi

    @property
    def circle_radius(self) -> float:
        """Radius of the complex circle used to count root multiplicities."""
        return self.scan_step / 2

    def validate(self) -> None:
        """Validate configuration."""
        if self.edge_length <= 0:
            raise ValueError("QTREE_EDGE_LENGTH must be positive")

        if self.x_max <= 0:
            raise ValueError("QTREE_X_MAX must be positive")

        if self.scan_steps_per_pi < 10:
            raise ValueError("QTREE_SCAN_STEPS_PER_PI must be at least 10")

        if self.bisection_tol <= 0 or self.cluster_tol <= 0 or self.match_tol <= 0:
            raise ValueError("Tolerances must be positive")

        if self.max_bisections <= 0:
            raise ValueError("QTREE_MAX_BISECTIONS must be positive")

        if self.circle_samples < 16:
            raise ValueError("QTREE_CIRCLE_SAMPLES must be at least 16")

        if self.max_enum_p < 1:
            raise ValueError("QTREE_MAX_ENUM_P must be at least 1")

        if self.dictionary_max_p < 3:
            raise ValueError("QTREE_DICTIONARY_MAX_P must be at least 3")

        if self.max_workers < 1:
            raise ValueError("QTREE_MAX_WORKERS must be at least 1")


# Global configuration instance
config = Config()

# Validate configuration on import
try:
    config.validate()
except ValueError as e:
    print(f"Configuration error: {e}", file=sys.stderr)
    print("Please check your environment variables or .env file", file=sys.stderr)
    sys.exit(2)
