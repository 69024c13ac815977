"""Variable Planck's constant field model: profiles, calibration, dynamics and cosmology."""

from . import calibration, constants, coupled, cosmo, dynamics, errors, galaxy, orbits, profiles
from .errors import ConfigError, DomainError, VarHbarError

__version__ = "0.1.0"

__all__ = [
    "calibration", "constants", "coupled", "cosmo", "dynamics", "errors", "galaxy", "orbits", "profiles",
    "ConfigError", "DomainError", "VarHbarError", "__version__",
]
