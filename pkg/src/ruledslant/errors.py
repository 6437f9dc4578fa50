"""Exception hierarchy.

Input problems (unparseable expressions, unreadable files) derive from
:class:`InputError`; violated geometric hypotheses derive from
:class:`GeometryError`.  The CLI maps the first family to exit code 1 and the
second to exit code 2.
"""


class RuledSlantError(Exception):
    pass


class InputError(RuledSlantError):
    pass


class ExprError(InputError):
    pass


class ExprSyntaxError(ExprError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class ExprNameError(ExprSyntaxError):
    pass


class ExprArityError(ExprSyntaxError):
    pass


class SurfaceFileError(InputError):
    pass


class GeometryError(RuledSlantError):
    """A degenerate configuration or a violated hypothesis of a test."""


class ExprDomainError(ExprError, GeometryError):
    """Evaluation left the domain of a function (sqrt, log, division...)."""


class GridError(GeometryError):
    pass


class CylindricalError(GeometryError):
    pass


class SingularPointError(GeometryError):
    pass


class NonRegularCurveError(GeometryError):
    pass


class CurvatureVanishingError(GeometryError):
    def __init__(self, message: str, window=None):
        super().__init__(message)
        self.window = window


class FrameError(GeometryError):
    pass


class HypothesisError(GeometryError):
    pass


class DomainError(GeometryError):
    pass
