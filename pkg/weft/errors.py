from typing import Optional


class WeftError(Exception):
    exit_code = 1


class GridError(WeftError, ValueError):
    exit_code = 2


class PreconditionError(WeftError, ValueError):
    exit_code = 2


class OrthogonalStatesError(PreconditionError):
    """Raised when a quotient by an overlap would blow up."""

    exit_code = 3

    def __init__(self, what: str, overlap: complex, tolerance: float):
        self.overlap = complex(overlap)
        self.tolerance = tolerance
        super().__init__(f"{what}: |overlap| = {abs(self.overlap):.3e} does not exceed tolerance {tolerance:.1e}")


class StateFileError(WeftError):
    exit_code = 1

    def __init__(self, message: str, field: Optional[str] = None, path: Optional[str] = None):
        self.field = field
        self.path = path
        location = f"{path}: " if path else ""
        where = f" (field '{field}')" if field else ""
        super().__init__(f"{location}{message}{where}")


class VerificationFailed(WeftError):
    exit_code = 4
