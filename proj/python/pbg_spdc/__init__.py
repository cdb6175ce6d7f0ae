"""Photon-pair generation in layered nonlinear structures."""

from ._pbg_spdc import (
    ConfigError,
    Error,
    IoError,
    NumericalError,
    Pump,
    Stack,
    __version__,
    band_edge_resonance,
    cw_pump,
    efficiency,
    flux,
    gaussian_pump,
    hom,
    jsa,
    load_stack,
    read_jsa,
    run_cli,
    spectrum,
    transmission,
)

CHANNELS = ("FF", "FB", "BF", "BB")

__all__ = [
    "CHANNELS",
    "ConfigError",
    "Error",
    "IoError",
    "NumericalError",
    "Pump",
    "Stack",
    "__version__",
    "band_edge_resonance",
    "cw_pump",
    "efficiency",
    "flux",
    "gaussian_pump",
    "hom",
    "jsa",
    "load_stack",
    "read_jsa",
    "run_cli",
    "spectrum",
    "transmission",
]
