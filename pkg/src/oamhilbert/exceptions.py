"""Exception hierarchy shared by every module of the package."""


class OAMError(Exception):
    """Base class for all errors raised by oamhilbert."""


class DimensionError(OAMError, ValueError):
    """Fields or arrays live on incompatible grids."""


class ParameterError(OAMError, ValueError):
    """A physical or numerical parameter is out of its valid range."""


class DegenerateInputError(OAMError, ValueError):
    """The requested quantity is undefined for the given input (e.g. a zero field)."""


class DataError(OAMError, ValueError):
    """Input data is malformed (NaN samples, corrupt files, ...)."""


class AliasingError(DataError):
    """A simulated field wrapped around the periodic grid boundary."""


class FieldFormatError(DataError):
    """Base class for field-file parse errors."""


class FieldMagicError(FieldFormatError):
    pass


class FieldVersionError(FieldFormatError):
    pass


class FieldTruncatedError(FieldFormatError):
    pass


class ConfigError(DataError):
    """A run configuration document failed validation."""
