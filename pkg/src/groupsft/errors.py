"""Exception hierarchy shared by every module of the package."""


class GroupSftError(Exception):
    """Base class; the CLI maps it to exit code 1."""

    stage: str | None = None


class WordSyntaxError(GroupSftError, ValueError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


class MissingRule(GroupSftError, KeyError):
    def __init__(self, generator: str):
        super().__init__(f"no substitution rule for generator {generator!r}")
        self.generator = generator

    def __str__(self) -> str:
        return self.args[0]


class UnknownGenerator(GroupSftError, ValueError):
    def __init__(self, generator: str):
        super().__init__(f"generator {generator!r} is not in the alphabet")
        self.generator = generator


class InapplicableStep(GroupSftError):
    pass


class PreconditionViolated(GroupSftError, ValueError):
    pass


class GeneratorAbsentFromRelator(PreconditionViolated):
    pass


class BudgetExceeded(GroupSftError):
    def __init__(self, budget: int, message: str = ""):
        super().__init__(message or f"budget of {budget} exhausted")
        self.budget = budget


class ModelFailure(GroupSftError):
    pass


class SmallCancellationViolated(ModelFailure):
    def __init__(self, piece, bound: float):
        super().__init__(f"piece {piece} has length {len(piece)} >= {bound:g}")
        self.piece = piece


class PatternError(GroupSftError, ValueError):
    pass


class DuplicateSupportPoint(PatternError):
    pass


class SupportOutsideSubgroup(PatternError):
    pass


class AlphabetMismatch(GroupSftError, ValueError):
    pass


class DecompositionFailure(GroupSftError):
    pass


class PropagationContradiction(GroupSftError):
    def __init__(self, message: str, path):
        super().__init__(message)
        self.path = path
