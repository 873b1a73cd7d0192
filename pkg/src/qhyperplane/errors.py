"""Exception types raised across the package."""


class DescriptorError(ValueError):
    """Operands live in different rings (dimensions, variables or truncation)."""


class NonInvertibleError(ZeroDivisionError):
    pass


class SeriesDomainError(ValueError):
    """A series operation was called outside its domain (e.g. log of a non-unit)."""


class NormalizationError(ValueError):
    pass


class DegenerateParameterError(ValueError):
    """The numeric torus parameters make a weight or a substitution point collide."""


class DegreeBoundError(ValueError):
    pass


class ConsistencyError(RuntimeError):
    """An internal consistency check of a pipeline failed."""


class ConfigError(ValueError):
    pass
