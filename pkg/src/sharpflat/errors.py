"""Exception taxonomy.

Domain rejections (NotDisjoint, NotLoxodromic, ...) all derive from
SharpFlatError so the CLI can map them to exit code 2, distinct from usage
errors (exit 1).
"""


class SharpFlatError(Exception):
    """Base class for all domain errors raised by this package."""


# word / multicurve layer

class UnknownSymbol(SharpFlatError):
    """A letter outside the surface generator alphabet."""


class WordTooLong(SharpFlatError):
    """Input word exceeds the configured length cap."""


class NotDisjoint(SharpFlatError):
    """Two curve classes have positive geometric intersection number."""


class NotSimple(SharpFlatError):
    """A curve class has positive self-intersection."""


class SurfaceMismatch(SharpFlatError):
    """Operands live on different surfaces."""


class SharedParallelComponent(SharpFlatError):
    """The two multicurves share a parallel component."""


# hyperbolic layer

class GenusTooSmall(SharpFlatError):
    """Genus < 2 has no hyperbolic polygon model here."""


class NoAxis(SharpFlatError):
    """Parabolic or elliptic matrix has no axis."""


class DegenerateCrossing(SharpFlatError):
    """Two crossings coincide within tolerance, or a near-tangency."""


class EnumerationBudgetExceeded(SharpFlatError):
    """Translate enumeration hit its tile budget before completing."""


# Kleinian layer

class DegenerateTraces(SharpFlatError):
    """Trace parameters where the group construction degenerates."""


class NotReduced(SharpFlatError):
    """Fraction p/q not in lowest terms."""


class EmptyGroup(SharpFlatError):
    """No generators supplied."""


class IsIdentity(SharpFlatError):
    """Fixed points of the identity are undefined."""


class Elementary(SharpFlatError):
    """The pair shares a fixed point; the inequality test is void."""


class NotLoxodromic(SharpFlatError):
    """Quotient torus requires a loxodromic element."""


class Degenerate(SharpFlatError):
    """Degenerate input to a numerical fit."""


class EmptySet(SharpFlatError):
    """Hausdorff distance of an empty sample."""


class DiscretenessUnknown(SharpFlatError):
    """A convergence experiment refused: terminal fails the trace scan."""


# raster / io / config layer

class ZeroResolution(SharpFlatError):
    """Raster width or height below 1."""


class IoFailure(SharpFlatError):
    """Write to the output stream failed."""


class ConfigError(SharpFlatError):
    """Malformed configuration file or unknown key."""
