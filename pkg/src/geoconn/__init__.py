"""Fully dynamic connectivity over 2D geometric intersection graphs.

Constant-time pairwise connectivity queries and global component counts
over axis-aligned segments, arbitrary line segments, and disks, maintained
through phases of lazy insertions with equivalence classes of components.
"""

from .engine import Engine, EngineConfig
from .errors import GeoConnError
from .geometry import AxisSegment, Disk, GeomObject, LineSegment, intersects
from .oracle import oracle_classes, oracle_components, oracle_signature
from .separator import find_disk_separator

__version__ = "0.1.0"

__all__ = [
    "Engine",
    "EngineConfig",
    "GeoConnError",
    "GeomObject",
    "AxisSegment",
    "LineSegment",
    "Disk",
    "intersects",
    "oracle_components",
    "oracle_signature",
    "oracle_classes",
    "find_disk_separator",
    "__version__",
]
