"""Exception hierarchy.  Every error carries a machine-readable ``code``."""


class OrthorealError(Exception):
    code = "OrthorealError"

    def to_dict(self) -> dict:
        return {"error": self.code, "message": str(self)}


class ZeroInSquareClass(OrthorealError, ValueError):
    code = "ZeroInSquareClass"


class ZeroConstantTerm(OrthorealError, ValueError):
    code = "ZeroConstantTerm"


class NotIrreducible(OrthorealError, ValueError):
    code = "NotIrreducible"


class FieldMismatch(OrthorealError, ValueError):
    code = "FieldMismatch"


class CharTwoDiscriminant(OrthorealError, ValueError):
    code = "CharTwoDiscriminant"


class DegenerateForm(OrthorealError, ValueError):
    code = "DegenerateForm"


class DependentBasis(OrthorealError, ValueError):
    code = "DependentBasis"


class NotAnIsometry(OrthorealError, ValueError):
    code = "NotAnIsometry"


class SpinorNormCharTwo(OrthorealError, ValueError):
    code = "SpinorNormCharTwo"


class SpaceMismatch(OrthorealError, ValueError):
    code = "SpaceMismatch"


class GroupTooLarge(OrthorealError):
    code = "GroupTooLarge"

    def __init__(self, order: int, cap: int):
        super().__init__(f"group order {order} exceeds cap {cap}")
        self.order = order
        self.cap = cap

    def to_dict(self) -> dict:
        return {**super().to_dict(), "order": self.order, "cap": self.cap}


class SearchTooLarge(OrthorealError):
    code = "SearchTooLarge"

    def __init__(self, d: int, size: int, cap: int, estimate: int | None = None):
        est = size if estimate is None else estimate
        super().__init__(f"search over q^{d} = {size} candidates (estimated cost {est}) exceeds cap {cap}")
        self.d = d
        self.size = size
        self.cap = cap
        self.estimate = est

    def to_dict(self) -> dict:
        return {**super().to_dict(), "d": self.d, "q_pow_d": self.size, "estimate": self.estimate, "cap": self.cap}


class DecompositionFailure(OrthorealError, RuntimeError):
    code = "DecompositionFailure"


class WrongAmbient(OrthorealError, ValueError):
    code = "WrongAmbient"


class WrongFieldClass(OrthorealError, ValueError):
    code = "WrongFieldClass"


class EtaConstructionFailed(OrthorealError, RuntimeError):
    code = "EtaConstructionFailed"


class NotInvolutory(OrthorealError, ValueError):
    code = "NotInvolutory"
