"""Exception types shared across the package."""


class GeoConnError(Exception):
    """Base class for all geoconn errors."""


class FamilyMismatchError(GeoConnError):
    """Two objects from different shape families were combined."""


class GeneralPositionError(GeoConnError):
    """Axis-aligned input contains collinear parallel segments with
    overlapping ranges, which the axis machinery rejects at ingest."""


class MalformedGraphError(GeoConnError):
    """An edge references an undeclared vertex."""


class MissingComponentError(GeoConnError, KeyError):
    """A component id is not present in the addressed structure."""


class UnknownObjectError(GeoConnError, KeyError):
    """An object id is dead or was never inserted."""


class InstanceTooSmallError(GeoConnError):
    """The operation needs a larger input to be meaningful."""


class InvariantViolationError(GeoConnError):
    """A runtime self-check (verification hook) failed."""


class WorkloadError(GeoConnError):
    """A workload file or workload parameter set is malformed."""
