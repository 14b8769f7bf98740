"""Exception hierarchy shared across the engine.

Exit-code mapping used by the CLI: validation problems exit 2,
numerical failures exit 3.
"""


class PVisRecError(Exception):
    """Base class for all engine errors."""


class CorpusParseError(PVisRecError):
    """Corpus file is malformed (bad JSON, missing keys, wrong types)."""


class ValidationError(PVisRecError):
    """Inputs violate a documented invariant (dangling ids, bad enums, ...)."""


class NumericsError(PVisRecError):
    """A numerical routine failed (singular solve, NaN divergence, ...)."""


class RankDeficiencyError(NumericsError):
    """A meta-embedding has (near-)zero singular values; reduce the rank."""


class LeakageError(PVisRecError):
    """A held-out item reached a training structure; the split is corrupt."""
