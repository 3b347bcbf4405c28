class DesignError(ValueError):
    """A filter could not be designed (singular or ill-conditioned system, bad basis)."""

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics
