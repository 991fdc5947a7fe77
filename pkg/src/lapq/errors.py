"""Exception types shared by the queues and structures."""


class EmptyQueueError(IndexError):
    """Raised by find-min / extract-min on an empty structure."""


class NotFoundError(KeyError):
    """Raised when a key, item or (item, key) pair is not stored."""


class MissingPredictionError(KeyError):
    """A dirty comparison was requested for an element the oracle does not cover."""
