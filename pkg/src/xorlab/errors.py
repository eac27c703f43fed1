"""Exception types shared across the library.

The CLI maps these onto distinct exit codes, so keep the hierarchy flat.
"""


class XorlabError(Exception):
    """Base class for all library errors."""


class SizeLimitError(XorlabError):
    """An input exceeds the configured desk-scale size guard."""


class RandomizedFailureError(XorlabError):
    """A randomized procedure exhausted its retry budget."""


class ContractError(XorlabError):
    """A precondition was violated (invalid cover, mismatched shapes, ...)."""


class StructuralError(XorlabError):
    """A tree or protocol object is malformed."""


class TimeoutSignal(XorlabError):
    """A bounded search ran out of its time budget (distinct from size limits)."""
