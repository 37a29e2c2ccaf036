"""Exception types shared across the library."""


class HHLSimError(Exception):
    """Base class for every error raised by hhlsim."""


class DimensionMismatch(HHLSimError):
    """Operands have incompatible shapes."""


class NotHermitian(HHLSimError):
    """Matrix fails the Hermitian symmetry check."""


class NoConvergence(HHLSimError):
    """Iterative eigensolver did not reach its off-diagonal target."""


class Singular(HHLSimError):
    """Matrix is singular (or numerically indistinguishable from singular)."""


class ZeroVector(HHLSimError):
    """A vector that must be normalizable has (near-)zero norm."""


class NotUnitary(HHLSimError):
    """Gate matrix is not unitary within tolerance."""


class QubitIndexOutOfRange(HHLSimError):
    """Target or control qubit index is invalid for the register layout."""


class NotPowerOfTwo(HHLSimError):
    """Matrix dimension is not 2**n, so it cannot live on qubits."""


class ClockNotZero(HHLSimError):
    """Phase-estimation clock register was expected in |0...0> but is not."""


class ClockNotUncomputed(HHLSimError):
    """Solution readout requested before the clock register was uncomputed."""


class AcceptanceTooLow(HHLSimError):
    """Ancilla post-selection probability too small to sample from."""


class RotationOverflow(HHLSimError):
    """Eigenvalue-inversion rotation would need amplitude C/lambda > 1."""


class SpectrumOutOfRange(HHLSimError):
    """Some eigenvalue falls outside (0, 2*pi/t), so phases would wrap."""


class EmptyHistogram(HHLSimError):
    """Measurement histogram contains no accepted shots."""


class DegenerateScale(HHLSimError):
    """Post-processing scale factor is undefined because ||A x|| ~ 0."""


class MissingPrevious(HHLSimError):
    """Ratio-based shift requested without a previous correction vector."""


class Diverged(HHLSimError):
    """Refinement residual grew out of all proportion to its best value."""


class SpecParseError(HHLSimError):
    """Sweep specification file is malformed."""
