"""Exception types shared across the library."""


class GlitchSimError(Exception):
    """Base class for all library-specific errors."""


class EmptySplit(GlitchSimError):
    """split_fault was called with an empty widths list."""


class EmptyChain(GlitchSimError):
    """simulate_chain was called with zero enabled fault units."""


class BadChainLength(GlitchSimError):
    """Requested enabled-unit count is outside [0, len(units)]."""


class OverlapError(GlitchSimError):
    """Absolute fault windows overlap or are out of order."""


class NotFound(GlitchSimError):
    """Exhaustive search exhausted its budget without a success."""

    def __init__(self, trials_used: int):
        super().__init__(f"no successful combination within {trials_used} trials")
        self.trials_used = trials_used


class IncompleteSweep(GlitchSimError):
    """Sweeping ran out of passes before locating every fault target."""

    def __init__(self, missing, trials_used: int):
        missing = tuple(missing)
        super().__init__(f"sweep exhausted its pass budget; missing targets: {missing}")
        self.missing = missing
        self.trials_used = trials_used


class NoIntegratedSuccess(GlitchSimError):
    """Integration found no combination that satisfies the success function."""

    def __init__(self, trials_used: int):
        super().__init__(f"no integrated combination succeeded in {trials_used} trials")
        self.trials_used = trials_used


class TransferInvalid(GlitchSimError):
    """Parameter transfer between scenarios with mismatched target layout."""


class ConfigError(GlitchSimError):
    """Campaign or CLI configuration is malformed."""
