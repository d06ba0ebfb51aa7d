"""Shared error base.

Every typed domain rejection in the library derives from DomainError, so the
CLI can distinguish "the mathematics said no" (exit 1) from malformed input
(exit 2) without enumerating exception classes.
"""


class DomainError(Exception):
    pass
