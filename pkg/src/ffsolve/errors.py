"""Exception types shared across the package."""


class FFSolveError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(FFSolveError):
    """Malformed Hamiltonian or graph file."""


class ModelError(FFSolveError):
    """Invalid model parameters (sizes, couplings)."""


class TermBudgetError(FFSolveError):
    """An operator-sum product exceeded the configured term cap."""


class DenseCapError(FFSolveError):
    """A dense-matrix realization was requested above the qubit cap."""


class SearchBudgetError(FFSolveError):
    """A structure search exhausted its node budget; the answer is undecided."""


class ComplexRootError(FFSolveError):
    """Fewer real roots than the polynomial degree were isolated.

    For claw-free frustration graphs this signals a conditioning failure;
    for general graphs it means the independence polynomial is not
    real-rooted and no free spectrum can be synthesized from it.
    """

    def __init__(self, found, expected):
        self.found = found
        self.expected = expected
        super().__init__(
            f"isolated {found} real roots, expected {expected}; "
            "polynomial may have complex roots or is ill-conditioned"
        )


class DegenerateModeError(FFSolveError):
    """Mode construction refused: the requested single-particle energy is repeated."""


class ConditioningError(FFSolveError):
    """A normalization factor came out non-positive; numerical conditioning failure."""


class NotSimplicialError(FFSolveError):
    """The supplied vertex set is not a simplicial clique of the frustration graph."""
