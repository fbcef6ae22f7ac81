"""Exception types shared across the toolkit."""


class DimensionMismatchError(ValueError):
    """Shapes or register dimensions are inconsistent."""


class DomainError(ValueError):
    """Input violates a mathematical precondition (non-hermitian, non-state, ...)."""


class InvalidModelError(ValueError):
    """A model fails its numerical validity checks beyond tolerance."""


class InconsistentChannelError(RuntimeError):
    """A channel produced data incompatible with any valid model."""


class PipelineInconsistencyError(RuntimeError):
    """Two routes through the pipeline disagree beyond the allowed tolerance."""
