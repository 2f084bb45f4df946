"""
errors.py - Exception hierarchy shared by the kvforge engine and CLI.

Every error derives from KVForgeError and from ValueError, so callers can
catch either the package base class or the builtin.
"""


class KVForgeError(ValueError):
    """Base class for every error raised by kvforge."""


class ConfigMismatchError(KVForgeError):
    """Operands carry different generator counts or truncation degrees."""


class DegreeRangeError(KVForgeError):
    """A requested degree lies outside 1..N."""


class ScalarPartError(KVForgeError):
    """exp/log/Dynkin preconditions on the scalar part are violated."""


class NotLieElementError(KVForgeError):
    """An associative series is not in the image of the free Lie algebra."""


class MalformedInputError(KVForgeError):
    """A payload, descriptor, permutation or label set cannot be used."""


class PreconditionError(KVForgeError):
    """A membership precondition of an operation does not hold."""


class InfeasibleSystemError(KVForgeError):
    """A degree-by-degree linear system has no solution."""


class DufloExtractionError(KVForgeError):
    """A Jacobian is not in the image of the Duflo combination."""


class SettingsError(KVForgeError):
    """An environment setting has an unusable value."""
