"""Exception hierarchy shared by every pspan module."""


class PSpanError(Exception):
    """Base class for all library errors."""


class MalformedNet(PSpanError):
    pass


class UnknownNode(PSpanError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class SizeGuardExceeded(PSpanError):
    pass


class NotPure(PSpanError):
    pass


class NoEvents(PSpanError):
    pass


class InvalidTagging(PSpanError):
    pass


class Disconnected(PSpanError):
    pass


class NoEdges(PSpanError):
    pass


class MalformedCode(PSpanError):
    pass


class EmptyInput(PSpanError):
    pass


class ConfigInvalid(PSpanError):
    pass


class NoConditions(PSpanError):
    pass


class InvalidInhibitor(PSpanError):
    pass


class MissingAnnotation(PSpanError):
    pass
