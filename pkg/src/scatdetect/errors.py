"""Exception types shared across the package."""


class InputError(ValueError):
    """Unusable user input: missing file, malformed CSV, bad config value."""


class PipelineError(RuntimeError):
    """Failure while running an otherwise well-configured pipeline."""
