class PsBeattyError(Exception):
    """
    Base class of every error raised by psbeatty.

    The command line maps all of these to exit code 2.
    """
    pass


class InvariantViolation(PsBeattyError):
    """
    A check which must never fail did fail.

    Raised by the harnesses when two independent computations disagree or a
    contract inequality is violated.
    """
    pass
