"""Typed errors raised across the package.

Every error carries a short machine-readable ``code`` so the command line
front end can emit ``{"error": code, "message": ...}`` on stderr.
"""


class ClusterGameError(Exception):
    code = "error"

    def to_dict(self):
        return {"error": self.code, "message": str(self)}


class DimensionError(ClusterGameError, ValueError):
    code = "dimension"


class UnsupportedSizeError(ClusterGameError, ValueError):
    code = "unsupported-size"


class EnumerationLimitError(ClusterGameError, ValueError):
    code = "enumeration-limit"


class InvalidObservableError(ClusterGameError, ValueError):
    code = "invalid-observable"


class GateError(ClusterGameError, ValueError):
    code = "gate"


class OptimizerError(ClusterGameError, ValueError):
    code = "optimizer"


class InvalidTermError(ClusterGameError, ValueError):
    code = "invalid-term"


class IncompleteInputError(ClusterGameError, KeyError):
    code = "incomplete-input"

    def __str__(self):
        # KeyError repr-quotes its message otherwise
        return str(self.args[0]) if self.args else ""


class AssignmentError(ClusterGameError, KeyError):
    code = "assignment"

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class CalibrationDesignError(ClusterGameError, ValueError):
    code = "calibration-design"


class EmptyInputError(ClusterGameError, ValueError):
    code = "empty-input"


class NotInvertibleError(ClusterGameError, ValueError):
    code = "not-invertible"


class FormatError(ClusterGameError, ValueError):
    """Malformed input file or text form."""

    code = "format"


class ConfigError(ClusterGameError, ValueError):
    code = "config"
