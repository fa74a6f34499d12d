"""Exception types shared across the toolkit."""


class DomainError(ValueError):
    """An operation was applied outside its mathematical domain."""


class ResourceLimitError(RuntimeError):
    """An enumeration or solve would exceed its configured guard.

    Guards are explicit: nothing is silently truncated.  ``count`` holds
    the size that tripped the guard when it is known.
    """

    def __init__(self, message, count=None):
        super().__init__(message)
        self.count = count
