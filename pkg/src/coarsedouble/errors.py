"""Shared exception types."""


class DomainError(ValueError):
    """An argument lies outside the operation's domain (wrong space, empty set, ...)."""


class IncompleteEnumeration(DomainError):
    """A custom space cannot certify that a ball enumeration is complete."""


class SearchInconclusive(Exception):
    """A bounded search exhausted its window without certifying an answer.

    Carries the radius that was searched and, when known, the radius that
    would be required to settle the question.
    """

    def __init__(self, message, window_radius=None, required_radius=None):
        super().__init__(message)
        self.window_radius = window_radius
        self.required_radius = required_radius
