"""Exception hierarchy shared by every module."""


class NoetherLabError(Exception):
    """Base class for all errors raised by noether_lab."""


class DimensionMismatch(NoetherLabError, ValueError):
    pass


class NonFinite(NoetherLabError, ValueError):
    pass


class PrecheckFailed(NoetherLabError):
    """An input that must be conserved (or a solution) is not."""


class GeneratorMismatch(NoetherLabError):
    """A charge does not generate the transformation it was built from."""


class NotSeparable(NoetherLabError):
    pass


class NoConvergence(NoetherLabError, RuntimeError):
    pass


class BadFrequency(NoetherLabError, ValueError):
    pass


class ZeroModeUnsupported(NoetherLabError, ValueError):
    pass


class BadDimension(NoetherLabError, ValueError):
    pass


class CutoffTooSmall(NoetherLabError, ValueError):
    pass


class ZeroForce(NoetherLabError, ValueError):
    pass


class OffGrid(NoetherLabError, ValueError):
    pass


class GridMismatch(NoetherLabError, ValueError):
    pass


class IncommensurateShift(NoetherLabError, ValueError):
    pass


class NotNormalizable(NoetherLabError, ValueError):
    pass


class ConfigError(NoetherLabError, ValueError):
    """Base for run-configuration problems (CLI exit code 2)."""


class ParseError(ConfigError):
    pass


class UnknownKey(ConfigError):
    def __init__(self, key, suggestion=None, where="config"):
        self.key = key
        self.suggestion = suggestion
        msg = f"unknown key {key!r} in {where}"
        if suggestion:
            msg += f" (did you mean {suggestion!r}?)"
        super().__init__(msg)


class BadValue(ConfigError):
    pass
