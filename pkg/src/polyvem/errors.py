"""Exception hierarchy shared across the package."""


class PolyVemError(Exception):
    """Base class for all errors raised by polyvem."""


class GeometryError(PolyVemError):
    """A geometric quantity could not be computed (non-finite input, degenerate polygon)."""


class MeshValidationError(GeometryError):
    """A mesh failed structural or geometric validation; the message names the element."""


class MeshFormatError(PolyVemError):
    """A mesh file could not be parsed; the message carries the file position."""


class ElementAssemblyError(PolyVemError):
    """Local matrices could not be built for an element."""


class ForcingEvaluationError(ElementAssemblyError):
    """The forcing function returned a non-finite value."""


class SolverError(PolyVemError):
    """The condensed interior system could not be solved to tolerance."""


class AnalysisError(PolyVemError):
    """Error measurement or a convergence study was requested with unusable inputs."""
