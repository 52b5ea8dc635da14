"""Exception hierarchy shared by all modules."""


class DualPowerError(Exception):
    pass


class InputError(DualPowerError, ValueError):
    """Bad input: malformed document, violated invariant, out-of-range id."""


class ParseError(InputError):
    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path


class GenerationError(DualPowerError):
    pass


class ContractError(DualPowerError):
    """A documented precondition of an algorithm does not hold."""


class OracleTimeout(DualPowerError):
    pass


class AuditError(DualPowerError):
    pass


class WitnessError(DualPowerError):
    """A claimed second cycle fails validation."""


class SweepTimeout(OracleTimeout):
    """The conjecture sweep ran out of time; ``report`` holds what was done."""

    def __init__(self, message, report):
        super().__init__(message)
        self.report = report
