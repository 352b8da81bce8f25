"""Exception taxonomy shared by all modules.

Every error carries an ``exit_status`` so the command line surface can map
failures onto a stable set of process exit codes:

    1  validation errors (bad input, bad config, domain violations)
    2  numerical errors (degeneracies, strong mixing, integrator trouble)
    3  capacity errors (problem size over the dense-matrix budget)
"""


class SimulationError(Exception):
    """Base class for all errors raised by this package."""

    exit_status = 1


class ValidationError(SimulationError):
    """Invalid input: wrong dimensions, out-of-range values, domain violations."""

    exit_status = 1


class ConfigError(ValidationError):
    """Malformed or inconsistent run configuration text."""


class InsufficientDataError(ValidationError):
    """Not enough usable points for a requested fit."""


class NumericalError(SimulationError):
    """A numerical procedure failed or its preconditions do not hold."""

    exit_status = 2


class DegeneracyError(NumericalError):
    """An energy denominator or level gap is degenerate within tolerance."""


class StrongMixingError(NumericalError):
    """No eigenstate retains majority overlap with the requested anchor."""


class IntegrationError(NumericalError):
    """Step-size instability detected during time integration."""


class CapacityError(SimulationError):
    """Problem size exceeds the configured dense-matrix or path budget."""

    exit_status = 3
