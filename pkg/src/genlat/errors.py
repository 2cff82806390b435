"""Exception types shared across the package."""


class GenlatError(Exception):
    """Base class for all errors raised by this package."""


class InvalidOrder(GenlatError):
    """A relation fails reflexivity, antisymmetry or transitivity."""


class CycleDetected(GenlatError):
    """Cover input contains a directed cycle."""

    def __init__(self, cycle):
        self.cycle = tuple(cycle)
        super().__init__(f"cover relation contains a cycle: {' -> '.join(map(str, self.cycle))}")


class DuplicateCover(GenlatError):
    def __init__(self, pair):
        self.pair = pair
        super().__init__(f"duplicate cover pair {pair}")


class UndefinedEntry(GenlatError):
    """A partial table is undefined where a total one is required."""

    def __init__(self, a, b, op):
        self.a, self.b, self.op = a, b, op
        super().__init__(f"{op}({a},{b}) is undefined")


class LawViolation(GenlatError):
    """A lattice identity fails; carries the law name and witnesses."""

    def __init__(self, law, witnesses):
        self.law = law
        self.witnesses = tuple(witnesses)
        super().__init__(f"{law} fails at {self.witnesses}")


class NotInjective(GenlatError):
    pass


class NoOrderDeclared(GenlatError):
    """Ideal enumeration needs an underlying poset on the partial lattice."""


class NotExtendable(GenlatError):
    """The partial tables admit no compatible partial order."""


class WitnessMissing(GenlatError):
    def __init__(self, i):
        self.i = i
        super().__init__(f"no completion witness supplied for extension point {i}")


class AntisymmetryFailure(GenlatError):
    def __init__(self, cycle):
        self.cycle = tuple(cycle)
        super().__init__(
            "union order is not antisymmetric; witness cycle: "
            + " <= ".join(map(str, self.cycle))
        )


class VerificationFailure(GenlatError):
    """A construction whose correctness the theory guarantees failed its
    post-check; this always indicates an implementation bug and is never
    silently swallowed."""


class NotASublattice(GenlatError):
    pass


class ConstantsClash(GenlatError):
    pass


class NotAnInterval(GenlatError):
    pass


class BoundTooLarge(GenlatError):
    pass


class BoundMismatch(GenlatError):
    pass


class CarrierOutOfRange(GenlatError):
    pass


class MonotonicityViolation(GenlatError):
    def __init__(self, args_low, args_high):
        self.args_low, self.args_high = args_low, args_high
        super().__init__(f"table not monotone between {args_low} and {args_high}")


class StagesExhausted(GenlatError):
    """A search ran out of built stages; `progress` holds the partial result."""

    def __init__(self, message, progress=None):
        self.progress = progress
        super().__init__(message)


class WrongVariety(GenlatError):
    pass


class ValidationError(GenlatError):
    """An archive or lattice file failed re-validation on load."""

    def __init__(self, message, stage=None):
        self.stage = stage
        super().__init__(message if stage is None else f"stage {stage}: {message}")
