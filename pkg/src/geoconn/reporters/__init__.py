"""Component (non-)intersection reporting.

A reporter holds the components of one equivalence class and answers, for
a query object s, two lazy streams: the components intersecting s and the
components not intersecting s. The two streams are disjoint and jointly
exhaustive over the live components, and each supports insertion and
removal of whole components. A `work_counter` instruments every backend
so output-sensitivity and laziness are testable.
"""

from .axis import AxisReporter
from .membership import DiskReporter, SegmentReporter


def build_axis_reporter(components):
    """Reporter over axis-aligned segment components (validated input)."""
    return AxisReporter(components)


def build_disk_reporter(components):
    """Reporter over disk components; one additively weighted nearest
    decision per component per query."""
    return DiskReporter(components)


def build_segment_reporter(components):
    """Reporter over line-segment components; bounding-box pruned
    membership search per component per query."""
    return SegmentReporter(components)


REPORTER_FACTORIES = {
    "axis": build_axis_reporter,
    "disk": build_disk_reporter,
    "segment": build_segment_reporter,
}
