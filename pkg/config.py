"""
config.py: single source of truth for shared constants across all modules.
"""
from __future__ import annotations

import os
from pathlib import Path

# Bundled catalogs
BUNDLED_CATALOG_DIR: Path = Path(__file__).parent / "catalogs"
HYPERGEO_CATALOG  = BUNDLED_CATALOG_DIR / "hypergeo.yaml"
FANO4_CATALOG     = BUNDLED_CATALOG_DIR / "fano4.yaml"
COVERS_CATALOG    = BUNDLED_CATALOG_DIR / "covers.yaml"
PATHOLOGY_CATALOG = BUNDLED_CATALOG_DIR / "pathology.yaml"

# Report store
DB_PATH: Path = Path("cy3check.db")


def _positive_int_env(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{name}={raw!r} is not an integer") from None
    if value < 1:
        raise ValueError(f"{name} must be a positive integer, got {value}")
    return value


# Wall enumeration: maximal |ch0| of a destabiliser candidate
WALL_SEARCH_CAP: int = _positive_int_env("CY3CHECK_CAP", 12)

# epsilon_for_surface rounds an irrational delta cap down onto this grid,
# refining it tenfold up to DELTA_RESOLUTION_MAX when the first grid gives 0
DELTA_RESOLUTION: int     = 100
DELTA_RESOLUTION_MAX: int = 10_000

# Decimal digits when rendering surds
DISPLAY_DIGITS: int = 12

# Grid oracle for the convex-path optimiser
GRID_N: int = 400
GRID_N_THREE_SEGMENT: int = 30

# Sampled audit of the ch2 inequality chain
AUDIT_SAMPLES: int   = 10_000
AUDIT_SEED: int      = 20240601
AUDIT_RANK_MAX: int  = 200
AUDIT_DENOM_MAX: int = 24
AUDIT_CHUNK: int     = 1_000

# Logging (stderr)
LOG_FORMAT  = "%(asctime)s  %(levelname)-8s  %(message)s"
LOG_DATEFMT = "%H:%M:%S"
