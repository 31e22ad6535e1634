"""Exception types shared across the package."""


class FitvalError(Exception):
    """Base class for all package-specific errors."""


class InvalidParametersError(FitvalError, ValueError):
    """A parameter violates a model precondition (e.g. sigma <= 0, C < F)."""


class SubsidyExceedsCostError(FitvalError):
    """The guaranteed subsidy leg alone is worth more than the investment cost.

    Investment is then optimal at any positive price; there is no finite
    trigger to solve for.
    """


class NoRootError(FitvalError):
    """No branch equation changes sign inside its own region."""


class MultipleRootsError(FitvalError):
    """More than one region-consistent trigger candidate was found.

    Uniqueness of the trigger is not guaranteed analytically, so ambiguous
    solves are reported rather than silently resolved.
    """

    def __init__(self, candidates):
        self.candidates = list(candidates)
        super().__init__(
            "multiple region-consistent roots: "
            + ", ".join(f"{c:.6g}" for c in self.candidates)
        )


class ConfigError(FitvalError):
    """Scenario file could not be parsed or violates an invariant."""
