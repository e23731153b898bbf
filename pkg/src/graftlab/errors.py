"""Exception types shared across the package."""


class GraftLabError(ValueError):
    """Base class for all domain errors raised by this package."""


class NonHyperbolicError(GraftLabError):
    """A 2x2 matrix expected to be hyperbolic (|trace| > 2) is not."""


class ProjectionUndefinedError(GraftLabError):
    """Orthogonal projection of an ideal point onto its own axis endpoint."""


class InvalidSurfaceError(GraftLabError):
    """Pants decomposition or Fenchel-Nielsen data is inconsistent."""


class InvalidItineraryError(GraftLabError):
    """A curve itinerary does not close up or references bad gluing data."""


class TwistingUndefinedError(GraftLabError):
    """Twisting number requested for a pair of disjoint curves."""


class ThinRegimeError(GraftLabError):
    """A thin-regime precondition (length below the configured cap) failed."""


class SegmentDecompositionError(GraftLabError):
    """Horizontal-arc decomposition of a twist budget is invalid (t0 >= c*t)."""


class IncomparableThinRegimesError(GraftLabError):
    """Product-region images with different thin sets cannot be compared."""
