"""Exception hierarchy for logfan."""


class LogFanError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(LogFanError, ValueError):
    """Input data violates a structural invariant."""


class NotSharp(ValidationError):
    """The generated cone contains a line, so the monoid has nontrivial units."""


class NotStronglyConvex(ValidationError):
    """The rays span a cone that contains a line."""


class ZeroVector(ValidationError):
    """A subdivision center or ray was the zero vector."""


class NotInFan(ValidationError):
    """A lattice point does not lie in the named cone of the fan."""


class ZeroPolynomial(LogFanError, ValueError):
    """Seminorm evaluation on the zero polynomial."""


class SelfGluingError(ValidationError):
    """Two faces of one cone were identified; such data needs a ConeStack."""


class NotAMonoidHom(ValidationError):
    """A matrix does not send the source monoid into the target monoid."""
