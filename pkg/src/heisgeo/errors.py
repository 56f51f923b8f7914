"""Exception types shared across the package."""


class HeisgeoError(Exception):
    """Base class for all package-specific errors."""


class MalformedInput(HeisgeoError):
    """An input record is structurally invalid.  ``field`` points at the offender."""

    def __init__(self, message: str, field: str = ""):
        self.field = field
        super().__init__(message)


class DivisibilityError(HeisgeoError):
    """Lattice tuple violates the divisibility chain r_i | r_{i+1}."""

    def __init__(self, index: int, r_i: int, r_next: int):
        # `index` is the 1-based position of the left element of the failing pair.
        self.index = index
        super().__init__(f"r[{index}] = {r_i} does not divide r[{index + 1}] = {r_next}")


class NonPositiveEntry(HeisgeoError):
    """A lattice tuple entry is not a positive integer."""

    def __init__(self, index: int, value):
        self.index = index
        super().__init__(f"r[{index + 1}] = {value!r} is not a positive integer")


class DimensionMismatch(HeisgeoError):
    """Operands do not share the same Heisenberg index n."""


class SingularMatrix(HeisgeoError):
    """The horizontal block A_tilde is (numerically) singular."""


class RankDeficient(HeisgeoError):
    """A full-rank (Riemannian) quantity was requested at rho = 0."""


class RankError(HeisgeoError):
    """A corank-1 (rho = 0) quantity was requested at rho != 0."""


class ShootingFailure(HeisgeoError):
    """The boundary-value solver exhausted its budget.  Carries the best upper bound."""

    def __init__(self, message: str, best: float | None = None):
        self.best = best
        super().__init__(message)


class HypothesisViolated(HeisgeoError):
    """A stated precondition on norms/diameters fails; the message names which."""


class MixedDimension(HeisgeoError):
    """Sequence entries do not share the same Heisenberg index n."""


class TooFewEntries(HeisgeoError):
    """Sequence classification needs at least three entries."""
