# logic/errors.py
from __future__ import annotations


class QnetError(ValueError):
    """Base class for every error raised by the logic package."""


# --- formula engine / oracle ---------------------------------------------------
class UnknownQubit(QnetError):
    pass


class TerminatedQubit(QnetError):
    pass


class SelfTarget(QnetError):
    pass


class FormulaMismatch(QnetError):
    pass


class IndexOutOfRange(QnetError):
    pass


class LengthMismatch(QnetError):
    pass


class OracleMismatch(QnetError):
    """Symbolic and tableau layers disagree on a measurement or a final state."""


# --- network model --------------------------------------------------------------
class InvalidK(QnetError):
    pass


class InvalidPartition(QnetError):
    pass


# --- protocol engine ------------------------------------------------------------
class CapacityExceeded(QnetError):
    pass


class KindViolation(QnetError):
    """A qubit was put on a classical link."""


class MissingLink(QnetError):
    pass


class TerminationInvalid(QnetError):
    pass


class NoBellPair(QnetError):
    pass


class InvalidArgs(QnetError):
    pass


# --- decomposition / cli --------------------------------------------------------
class NotValidated(QnetError):
    pass


class BadConfig(QnetError):
    pass


class FileError(QnetError):
    pass
