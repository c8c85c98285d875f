"""Exception hierarchy for deltabox.

Every error raised by the library derives from DeltaBoxError so callers can
catch the whole family at once.  The CLI maps these onto exit codes: domain
and classification errors (DomainError, NotInK, InK, GridMismatch) exit with
code 3, numerical failures (SingularPoint, BracketError, ConvergenceError,
overflow) with code 4.
"""


class DeltaBoxError(Exception):
    """Base class for all deltabox errors."""


class DomainError(DeltaBoxError):
    """An argument lies outside the physical or mathematical domain."""


class SingularPoint(DeltaBoxError):
    """Evaluation was requested at (or within guard radius of) a pole."""


class BracketError(DeltaBoxError):
    """A root bracket is degenerate or does not enclose a sign change."""


class NotInK(DeltaBoxError):
    """The requested wave number is not a shared lattice point."""


class InK(DeltaBoxError):
    """The requested lattice point is a shared point, not a one-sided one."""


class GridMismatch(DeltaBoxError):
    """The interaction point does not land on a finite-difference grid node."""


class ConvergenceError(DeltaBoxError):
    """An iterative solver exceeded its iteration budget."""
