"""Exception hierarchy shared by every module."""


class PolyFourierError(Exception):
    """Base class for all errors raised by polyfourier."""


class InputError(PolyFourierError, ValueError):
    """Malformed or unsupported input data."""


class DegenerateInput(InputError):
    """Points or polytopes that are not full-dimensional."""


class NotPointed(InputError):
    """A cone that contains a line."""


class NearSingular(PolyFourierError, ArithmeticError):
    """A Brion-Barvinok denominator ``w . z`` is numerically zero.

    Carries the offending vertex, cone index and generator so callers can
    perturb the evaluation point.
    """

    def __init__(self, message, vertex=None, cone=None, generator=None, factor=None):
        super().__init__(message)
        self.vertex = vertex
        self.cone = cone
        self.generator = generator
        self.factor = factor


class OverflowGuard(PolyFourierError, OverflowError):
    """An exponent would leave the double-precision range."""


class ToleranceNotReached(PolyFourierError, ArithmeticError):
    """Adaptive quadrature exhausted its refinement budget."""


class PoleAtParameter(PolyFourierError, ArithmeticError):
    """A curve or coefficient is evaluated at (or next to) a pole."""


class InsufficientSamples(InputError):
    pass


class UnknownName(InputError):
    pass


class WrongCurveKind(InputError):
    pass


class UnsupportedCurveKind(InputError):
    pass


class NoUniqueDominant(PolyFourierError):
    """No single term has strictly maximal growth.

    Usually means two vertices share a projection onto the circle plane;
    rotate the region and retry.
    """


class AllPoles(PolyFourierError):
    """Every point of a scan grid was skipped."""


class IdenticallyZeroOnGrid(PolyFourierError):
    pass


class DirectionParallelToEdge(InputError):
    pass


class RangeExceeded(InputError):
    pass
