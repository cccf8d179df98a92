"""Exception types shared across the package."""


class RsRegimesError(Exception):
    """Base class for all package-specific failures."""


class DomainError(RsRegimesError):
    """A cumulant generating function was evaluated outside its finiteness domain."""


class RangeError(RsRegimesError):
    """A requested target lies outside the attainable range of the transform."""


class ConvergenceError(RsRegimesError):
    """An iterative solver exhausted its iteration budget without converging."""


class DegenerateError(RsRegimesError):
    """An allocation or plan is undefined because a variance is zero."""


class BudgetExceeded(RsRegimesError):
    """A sequential rule hit its sampling cap before the stopping criterion fired."""


class ConfigError(RsRegimesError):
    """A configuration file or request is malformed or inconsistent."""
