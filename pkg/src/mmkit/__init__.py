"""Spectral, isoperimetric, separation, concentration, and transport
quantities on finite weighted metric-measure spaces, with an inequality
verification harness and CLI."""

from .errors import (
    CapExceededError,
    DisconnectedSpaceError,
    FormatError,
    InvalidArgumentError,
    InvariantViolationError,
    MMKitError,
)
from .space import (
    MMSpace,
    Subset,
    SubsetFamily,
    gen_cycle,
    gen_dumbbell,
    gen_gauss_interval,
    load_space,
    neighborhood,
    restrict,
    save_space,
)

__all__ = [
    "CapExceededError",
    "DisconnectedSpaceError",
    "FormatError",
    "InvalidArgumentError",
    "InvariantViolationError",
    "MMKitError",
    "MMSpace",
    "Subset",
    "SubsetFamily",
    "gen_cycle",
    "gen_dumbbell",
    "gen_gauss_interval",
    "load_space",
    "neighborhood",
    "restrict",
    "save_space",
]

__version__ = "0.1.0"
