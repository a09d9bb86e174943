# errors.py
class AmencertError(Exception):
    """Error base; `exit_code` es el código de salida de la CLI."""

    exit_code = 1


class InputError(AmencertError, ValueError):
    exit_code = 2

    def __init__(self, message: str, pointer: str | None = None):
        self.pointer = pointer
        super().__init__(f"{message} (en {pointer})" if pointer else message)


class ResourceError(InputError):
    pass


class CapabilityError(InputError):
    pass


class UnsupportedMeasureError(InputError):
    pass


class NumericError(AmencertError, ArithmeticError):
    exit_code = 3

    def __init__(self, message: str, residual: float | None = None):
        self.residual = residual
        if residual is not None:
            message = f"{message} (residual={residual:.3e})"
        super().__init__(message)


class PolicyError(AmencertError):
    exit_code = 4
