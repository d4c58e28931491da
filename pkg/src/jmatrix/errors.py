"""Exception types raised across the package."""


class JMatrixError(Exception):
    """Base class for all package errors."""


class ParameterOutOfRange(JMatrixError, ValueError):
    def __init__(self, field: str, value, requirement: str = ""):
        self.field = field
        self.value = value
        msg = f"parameter {field}={value!r} out of range"
        if requirement:
            msg += f" (requires {requirement})"
        super().__init__(msg)


class NonpositiveBeta(JMatrixError, ValueError):
    def __init__(self, n: int, value: float):
        self.n = n
        self.value = value
        super().__init__(f"recurrence coefficient beta_{n}={value!r} is not positive")


class NonpositiveOffdiagonal(JMatrixError, ValueError):
    def __init__(self, n: int, value: float = 0.0):
        self.n = n
        self.value = value
        super().__init__(f"off-diagonal a_{n}={value!r} is not positive")


class ReducibleAt(NonpositiveOffdiagonal):
    """An off-diagonal entry vanishes exactly, so the matrix splits into blocks."""

    def __init__(self, n: int):
        super().__init__(n, 0.0)
        self.args = (f"operator is reducible: a_{n} = 0",)


class DenominatorVanishes(JMatrixError, ZeroDivisionError):
    def __init__(self, where):
        self.where = where
        super().__init__(f"divided-difference denominator vanishes at {where!r}")


class ZeroXi(JMatrixError, ValueError):
    def __init__(self):
        super().__init__("the scaling xi of a linear potential must be nonzero")


class NotBD(JMatrixError, ValueError):
    def __init__(self, n: int, reason: str):
        self.n = n
        super().__init__(f"no birth-death factorization: {reason} at n={n}")


class QuadratureOrderInsufficient(JMatrixError, RuntimeError):
    def __init__(self, order: int, discrepancy: float):
        self.order = order
        self.discrepancy = discrepancy
        super().__init__(
            f"quadrature of order {order} and its refinement disagree by {discrepancy:.3e}"
        )


class TailNotConverged(JMatrixError, RuntimeError):
    def __init__(self, what: str, last_term: float):
        self.last_term = last_term
        super().__init__(f"{what}: tail did not converge (last term {last_term:.3e})")


class OverflowHorizon(JMatrixError, OverflowError):
    """Plain recurrence evaluation would overflow; use the scaled evaluator."""

    def __init__(self, n: int):
        self.n = n
        super().__init__(f"polynomial values overflow at degree {n}; use eval_poly_scaled")
