"""Exception hierarchy for the toolkit."""


class RadthermError(Exception):
    """Base class for all toolkit errors."""


class DomainError(RadthermError):
    """An argument lies outside its physical or numerical domain."""


class BracketError(RadthermError):
    """A measured signal falls outside the image of the solver bracket.

    In a correction context this usually means the assumed scene
    parameters are inconsistent with the measurement (e.g. an impossible
    emissivity in the operator mask).
    """


class ConvergenceError(RadthermError):
    """An iterative solver exhausted its iteration budget."""


class TrainingError(RadthermError):
    """Network training diverged (non-finite loss)."""


class ModelFileError(RadthermError):
    """A surrogate model file is malformed.

    Carries the byte offset at which parsing failed when known.
    """

    def __init__(self, message: str, offset: int | None = None):
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message)
        self.offset = offset


class FrameFileError(RadthermError):
    """A thermal frame file is malformed."""


class NotFoundError(RadthermError):
    """A requested camera, frame or mask does not exist."""
