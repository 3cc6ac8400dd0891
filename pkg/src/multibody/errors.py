"""Exception hierarchy shared by every multibody package.

All domain errors derive from ``ValueError`` so callers that only care about
bad input can keep catching that.
"""


class MultibodyError(ValueError):
    """Base class for errors raised by multibody operations."""


class DimensionMismatchError(MultibodyError):
    pass


class EnumerationLimitError(MultibodyError):
    pass


class IndexSetError(MultibodyError):
    pass


class GadgetValidityError(MultibodyError):
    """A gadget parameter set violates one of its strict inequalities.

    ``inequality`` holds the failed inequality as text, e.g. ``"|J_N| < q_0"``.
    """

    def __init__(self, inequality: str, detail: str = ""):
        self.inequality = inequality
        msg = f"gadget validity violated: {inequality}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class PassivityError(MultibodyError):
    pass


class SingularMatrixError(MultibodyError):
    pass


class BistableCouplerError(MultibodyError):
    pass


class ConstraintStrengthError(MultibodyError):
    pass


class UsageError(MultibodyError):
    """Malformed command line or input document; ``field`` names the culprit."""

    def __init__(self, field: str, detail: str):
        self.field = field
        super().__init__(f"{field}: {detail}")


class ReportWriteError(MultibodyError):
    """An output file could not be written; ``path`` names it."""

    def __init__(self, path: str, detail: str):
        self.path = path
        super().__init__(f"cannot write {path}: {detail}")
