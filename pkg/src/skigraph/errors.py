"""Exception types shared across the package."""

from __future__ import annotations


class SkigraphError(Exception):
    """Base class for all domain errors raised by this package."""


class OutOfBoundsError(SkigraphError):
    """A point lies outside the elevation grid."""


class AllNoDataError(SkigraphError):
    """All grid cells surrounding a sample point carry the nodata sentinel."""


class DegenerateGeometryError(SkigraphError):
    """A polyline has no usable length."""


class NotApplicableError(SkigraphError):
    """The requested computation is undefined for this edge class."""


class MissingAttributeError(SkigraphError):
    """A cost evaluation needs attributes that are absent.

    ``attributes`` lists the unresolvable attribute names.
    """

    def __init__(self, attributes: list[str]):
        super().__init__(f"unresolvable attributes: {', '.join(attributes)}")
        self.attributes = attributes


class PreferenceError(SkigraphError):
    """A preference definition violates its contract."""

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field


class UnknownNodeError(SkigraphError):
    """A node id does not exist in the graph."""


class UnknownEdgeError(SkigraphError):
    """An edge id does not exist in the graph."""


class UnreachableError(SkigraphError):
    """No directed path connects the requested nodes."""


class UnreachableFavoriteError(SkigraphError):
    """A favorite edge cannot be chained between start and end."""

    def __init__(self, edge_id: str):
        super().__init__(f"favorite not reachable in any start-to-end chain: {edge_id}")
        self.edge_id = edge_id


class InfeasibleDurationError(SkigraphError):
    """Even the bare start-to-end route exceeds the duration budget."""


class EmptyPlanError(SkigraphError):
    """A round trip without favorites has nothing to plan."""


class NoMatchError(SkigraphError):
    """A ride could not be matched to the network."""


class NoDataError(SkigraphError):
    """No measured sample exists to interpolate from."""


class EmptyRegionError(SkigraphError):
    """No points fall inside the requested bounding box."""


class BundleError(SkigraphError):
    """Base class for resort bundle load failures."""


class ChecksumMismatchError(BundleError):
    pass


class VersionMismatchError(BundleError):
    pass


class BundleParseError(BundleError):
    """Bundle file is unreadable; carries a best-effort location."""

    def __init__(self, message: str, location: str = ""):
        super().__init__(f"{message} ({location})" if location else message)
        self.location = location
