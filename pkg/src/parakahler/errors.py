"""Exception hierarchy shared across the toolkit."""


class ParakahlerError(Exception):
    """Base class for all library-specific errors."""


class NullValue(ParakahlerError):
    """Value lies on (or numerically at) the light cone; no polar form."""


class BoundaryPoint(ParakahlerError):
    """Finite-difference stencil would leave the grid."""


class DimensionMismatch(ParakahlerError):
    """Operands live in different D^n."""


class LagrangianViolation(ParakahlerError):
    """Symplectic form does not vanish on the given frame/tangents."""


class DegenerateMetric(ParakahlerError):
    """Induced metric (or a required pivot) is numerically degenerate."""


class NotJInvariant(ParakahlerError):
    """Subspace is not invariant under the para-complex structure."""


class OddDimension(ParakahlerError):
    """A para-adapted frame needs an even-dimensional span."""


class NotParaComplexStructure(ParakahlerError):
    """Tensor field fails J^2 = Id or the equal-rank condition."""


class NotNullCurve(ParakahlerError):
    """Curve tangent is not null where it must be."""


class DegeneratePairing(ParakahlerError):
    """Cross pairing of the two null factors vanishes somewhere."""


class NotParaHolomorphic(ParakahlerError):
    """Map fails the para-Cauchy-Riemann equations beyond tolerance."""


class InvalidRange(ParakahlerError):
    """Requested parameter range is outside the family's domain."""


class NonpositiveRadius(ParakahlerError):
    """Soliton state has r <= 0."""


class StepFailure(ParakahlerError):
    """Adaptive integrator underflowed its step size."""


class InvalidCase(ParakahlerError):
    """Operation undefined for this causal case / parameter sign."""


class IntegrandSingular(ParakahlerError):
    """Quadrature range crosses a turning point of the radicand."""


class ExpressionSyntaxError(ParakahlerError):
    """Expression text failed to parse.

    Carries the 0-based byte offset of the first offending position.
    """

    def __init__(self, message, offset):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class SpecValidationError(ParakahlerError):
    """Immersion-spec document failed schema validation."""
