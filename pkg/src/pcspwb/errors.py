"""Exception types shared across the package."""


class WorkbenchError(Exception):
    """Base class for all errors raised by pcspwb."""


class StructureError(WorkbenchError):
    def __init__(self, message, report=()):
        super().__init__(message)
        self.report = list(report)


class ArityMismatch(StructureError, ValueError):
    pass


class ElementOutOfDomain(StructureError, ValueError):
    pass


class SignatureMismatch(WorkbenchError, ValueError):
    pass


class DomainMismatch(WorkbenchError, ValueError):
    pass


class UnknownName(WorkbenchError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


class ResourceLimitExceeded(WorkbenchError):
    pass


class LimitExceeded(WorkbenchError):
    """Search stopped at the node limit before reaching a verdict."""

    def __init__(self, nodes):
        super().__init__(f"node limit exceeded after {nodes} nodes")
        self.nodes = nodes


class NotAHomomorphism(WorkbenchError, ValueError):
    pass


class ParseError(WorkbenchError, ValueError):
    def __init__(self, message, line=None, column=None):
        loc = ""
        if line is not None:
            loc = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(loc + message)
        self.line = line
        self.column = column
