"""Exception hierarchy for quantum tree spectra."""


class QuantumTreeError(Exception):
    """Base class for all errors raised by this package."""


class GraphValidationError(QuantumTreeError, ValueError):
    """Graph, tree or boundary data violates a structural requirement."""


class EdgeListParseError(GraphValidationError):
    """Edge-list text could not be parsed."""


class EmptyInteriorError(QuantumTreeError, ValueError):
    """Removing the Dirichlet pendants leaves no vertex."""


class ZeroPolynomialError(QuantumTreeError, ValueError):
    """The zero polynomial cannot be normalized."""


class InvalidRangeError(QuantumTreeError, ValueError):
    """A numeric argument lies outside its admissible range."""


class AmbiguousInputError(QuantumTreeError, ValueError):
    """Branch data is internally inconsistent."""


class ClusterAmbiguityError(QuantumTreeError, ValueError):
    """Eigenvalues cannot be split into asymptotic branches unambiguously."""


class DictionaryFormatError(QuantumTreeError, ValueError):
    """A persisted dictionary or fixture file does not follow its schema."""


class UsageError(QuantumTreeError, ValueError):
    """Command-line flags are invalid."""


class ConvergenceFailure(QuantumTreeError, RuntimeError):
    """A numeric refinement did not reach its tolerance."""


class OracleMismatchError(QuantumTreeError, RuntimeError):
    """Two independent exact computations disagree."""
