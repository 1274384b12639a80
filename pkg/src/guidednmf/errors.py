"""Exception types raised across the package."""


class GuidedNMFError(Exception):
    """Base class for every error raised by this package."""


class ShapeError(GuidedNMFError, ValueError):
    pass


class ConfigError(GuidedNMFError, ValueError):
    pass


class InputError(GuidedNMFError, ValueError):
    pass


class PipelineError(GuidedNMFError, ValueError):
    pass


class EvaluationError(GuidedNMFError, ValueError):
    pass
