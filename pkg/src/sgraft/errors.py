"""Exception types raised by sgraft operations."""


class SgraftError(Exception):
    """Base class for all library errors."""


class UnknownVertexError(SgraftError, KeyError):
    def __str__(self):
        return f"unknown vertex {self.args[0]!r}"


class MalformedMorphismError(SgraftError):
    pass


class WrongProductionError(SgraftError):
    pass


class NotNonterminalError(SgraftError):
    pass


class ReplayError(SgraftError):
    def __init__(self, step: int, message: str):
        super().__init__(f"step {step}: {message}")
        self.step = step


class NonGrowingCycleError(SgraftError):
    def __init__(self, cycles):
        super().__init__(f"grammar has non-growing derivation cycles: {cycles}")
        self.cycles = cycles


class ClassificationError(SgraftError):
    pass


class IncompleteDecodingError(SgraftError):
    pass


class MalformedInputError(SgraftError):
    pass


class GluingError(SgraftError):
    """A DPO rewrite is undefined at the given matching."""

    def __init__(self, violations):
        super().__init__("; ".join(violations))
        self.violations = list(violations)


class MalformedSubstitutionError(SgraftError):
    pass


class InstantiationError(SgraftError):
    pass


class SynthesisError(SgraftError):
    pass


class IncompatibleRuleError(SgraftError):
    pass


class CoherenceError(SgraftError):
    pass


class ParseError(SgraftError):
    def __init__(self, message: str, line: int = 0, column: int = 0, source: str = "<text>"):
        super().__init__(f"{source}:{line}:{column}: {message}")
        self.line = line
        self.column = column
