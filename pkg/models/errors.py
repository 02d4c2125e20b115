"""
Exception hierarchy for stmod.

Every error is also a ValueError so callers that only catch the builtin
keep working.
"""


class StmodError(ValueError):
    """Base class for all stmod errors"""


class FieldError(StmodError):
    """Bad modulus or mismatched primes"""


class GroupError(StmodError):
    """Invalid group table, expression or subgroup"""


class ModuleError(StmodError):
    """Invalid module data or incompatible modules"""


class NotEquivariantError(ModuleError):
    """A matrix does not commute with the group action"""


class ExactnessError(ModuleError):
    """A sequence of maps is not short exact"""


class WordError(StmodError):
    """Invalid word, band descriptor or admissibility violation"""


class CertificationError(StmodError):
    """A required certificate (indecomposability, ghostness, ...) is missing"""


class ConfigError(StmodError):
    """Config parse error carrying a position"""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        location = ''
        if line is not None:
            location = f"line {line}"
            if column is not None:
                location += f", column {column}"
            location += ': '
        super().__init__(f"{location}{message}")
