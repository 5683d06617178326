"""Exception hierarchy shared by all modules."""


class EntanglementError(ValueError):
    """Base class for invalid inputs and numerical failures."""


class DimensionMismatch(EntanglementError):
    pass


class NotNormalized(EntanglementError):
    def __init__(self, deviation: float):
        super().__init__(f"state is not normalized: |sum |c|^2 - 1| = {deviation:.3e}")
        self.deviation = deviation


class BadPartyIndex(EntanglementError):
    pass


class NotUnitary(EntanglementError):
    pass


class UnknownName(EntanglementError):
    pass


class IncompatibleDims(EntanglementError):
    pass


class EmptyKeepSet(EntanglementError):
    pass


class NotHermitian(EntanglementError):
    pass


class NegativeRadicand(EntanglementError):
    pass


class OutOfRange(EntanglementError):
    pass


class NoConvergence(EntanglementError):
    pass


class NotQubits(EntanglementError):
    pass


class NotThreeQubits(NotQubits):
    pass


class BadDimension(EntanglementError):
    pass


class NotProbabilityVector(EntanglementError):
    pass


class InvalidAllocation(EntanglementError):
    pass


class BadGroup(EntanglementError):
    pass


class IncompatibleConstraintSet(EntanglementError):
    pass


class UnknownRegion(EntanglementError):
    pass


class StateFormatError(EntanglementError):
    pass
