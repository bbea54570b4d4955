"""Exception and warning types shared across the package."""


class DomainError(ValueError):
    """Radius (or arc coordinate) outside the open domain of the deformation."""


class DegenerateCurvature(ValueError):
    """The flat limit lambda = 0 is rejected; the construction needs curvature."""


class SignMismatch(ValueError):
    """The sign of lambda is incompatible with the requested potential family."""


class InvalidOrder(ValueError):
    """Extension order m outside the supported range."""


class UnsupportedOrder(InvalidOrder):
    """The explicit step systems only cover m = 1 and m = 2."""


class NotConstrained(ValueError):
    """Potential coefficients are not in the reduced (compatible) QES form."""


class UnsupportedTerm(ValueError):
    """Superpotential term outside the closed-form integrable basis."""


class PoleAtNode(ZeroDivisionError):
    """The generating function vanishes at the evaluation point."""


class GridTooCoarse(RuntimeError):
    """Eigenvalue error estimate exceeds the requested tolerance."""


class NonNormalizable(ValueError):
    """The squared wavefunction integral does not converge."""


class TruncationWarning(UserWarning):
    """Non-negligible eigenvector mass near the grid cutoff."""
