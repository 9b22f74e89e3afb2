"""Errors raised by the lab library. Claim failures are reported, never raised."""


class GhzLabError(Exception):
    """Base class for every lab error."""


class DimensionMismatchError(GhzLabError):
    pass


class SizeLimitError(GhzLabError):
    """An enumeration or search would exceed its configured cap."""

    def __init__(self, what, count, cap, hint=''):
        self.what = what
        self.count = count
        self.cap = cap
        message = f"{what}: {count} exceeds cap {cap}"
        if hint:
            message = f"{message} ({hint})"
        super().__init__(message)


class ShiftError(GhzLabError):
    pass


class NoNonzeroCharacterError(GhzLabError):
    pass


class IncompleteStrategyError(GhzLabError):
    def __init__(self, player, question):
        self.player = player
        self.question = question
        super().__init__(f"strategy of player {player} has no answer for question {question}")


class EmptyEventError(GhzLabError):
    pass


class InvalidSplitError(GhzLabError):
    pass


class DomainError(GhzLabError):
    pass


class EmbeddingUndefinedError(GhzLabError):
    pass


class EmptyBowTieSetError(GhzLabError):
    pass
