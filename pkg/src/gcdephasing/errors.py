"""Exception hierarchy.

``ConfigError`` covers user input problems, ``NumericalError`` covers
everything that fails a physical or numerical check.  The CLI maps the two
families to different exit codes.
"""


class DephasingError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(DephasingError, ValueError):
    """Invalid run configuration (unknown key, bad value, bad combination)."""


class NumericalError(DephasingError):
    """A physical invariant or a numerical routine failed."""


class DimensionMismatch(NumericalError, ValueError):
    pass


class NotHermitian(NumericalError, ValueError):
    def __init__(self, violation, tol=None):
        self.violation = float(violation)
        msg = f"matrix is not Hermitian: max|m - m^H| = {self.violation:.3e}"
        if tol is not None:
            msg += f" > tol {tol:.1e}"
        super().__init__(msg)


class TraceNotOne(NumericalError, ValueError):
    def __init__(self, violation):
        self.violation = float(violation)
        super().__init__(f"trace deviates from 1 by {self.violation:.3e}")


class NotPSD(NumericalError, ValueError):
    def __init__(self, min_eigenvalue):
        self.violation = float(min_eigenvalue)
        super().__init__(f"matrix is not positive semidefinite: min eigenvalue {self.violation:.3e}")


class NotUnitary(NumericalError, ValueError):
    def __init__(self, violation):
        self.violation = float(violation)
        super().__init__(f"matrix is not unitary: max|U^H U - I| = {self.violation:.3e}")


class NotUnitVector(NumericalError, ValueError):
    def __init__(self, norm):
        self.norm = float(norm)
        super().__init__(f"orientation must be a unit vector, got norm {self.norm!r}")


class NegativeTime(NumericalError, ValueError):
    pass


class ConvergenceFailure(NumericalError, RuntimeError):
    pass


class ParamOutOfRange(DephasingError, ValueError):
    """A state-family parameter lies outside its admissible range."""

    def __init__(self, name, value, bound):
        self.name = name
        self.value = value
        self.bound = bound
        super().__init__(f"{name}={value!r} violates {bound}")


class UnknownKind(DephasingError, ValueError):
    pass


class InsufficientSamples(DephasingError, ValueError):
    pass


class NonUniformGrid(DephasingError, ValueError):
    pass
