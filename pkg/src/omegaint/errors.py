"""Exception types raised across the package."""


class OmegaError(Exception):
    """Base class for every error raised by omegaint."""


class ZeroPolynomial(OmegaError, ValueError):
    pass


class DegreeZero(OmegaError, ValueError):
    pass


class OrderOutOfRange(OmegaError, ValueError):
    pass


class InhomogeneousDegree(OmegaError, ValueError):
    pass


class ImageOutsideChart(OmegaError, ValueError):
    pass


class ConstantMap(OmegaError, ValueError):
    pass


class UnequalDegrees(OmegaError, ValueError):
    pass


class ImageInDivisor(OmegaError, ValueError):
    pass


class NotGlobalSection(OmegaError, ValueError):
    pass


class ZeroForm(OmegaError, ValueError):
    pass


class NotReduced(OmegaError, ValueError):
    pass


class SingularBasePoint(OmegaError, ValueError):
    pass


class PointNotOnCurve(OmegaError, ValueError):
    pass


class BranchNotRational(OmegaError, ValueError):
    pass


class PointOnDiscriminant(OmegaError, ValueError):
    pass


class ComponentNotIntegral(OmegaError, ValueError):
    pass


class HypothesisFailed(OmegaError, ValueError):
    pass


class ImageIsLine(OmegaError, ValueError):
    pass


class ImageInExceptional(OmegaError, ValueError):
    pass


class DegenerateFamily(OmegaError, ValueError):
    pass


class WitnessInvalid(OmegaError, ValueError):
    pass


class NotCampana(OmegaError, ValueError):
    pass


class BadConfig(OmegaError, ValueError):
    pass


class ScenarioError(OmegaError):
    """A scenario file could not be turned into checks.

    ``line`` and ``col`` are 1-based when known.
    """

    def __init__(self, message, line=None, col=None):
        self.message = message
        self.line = line
        self.col = col
        where = f"{line}:{col}: " if line is not None else ""
        super().__init__(where + message)


class ScenarioSyntaxError(ScenarioError):
    pass


class UnknownReference(ScenarioError):
    pass


class DuplicateName(ScenarioError):
    pass


class ExprSyntaxError(OmegaError, ValueError):
    """Malformed polynomial or HS expression text; ``pos`` is a 0-based offset."""

    def __init__(self, message, text, pos):
        self.text = text
        self.pos = pos
        super().__init__(f"{message} at offset {pos}: {text!r}")
