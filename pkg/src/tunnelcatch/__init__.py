"""Semiclassical tunnel catch toolkit for a smooth well next to a square probing well.

The probing well is tuned until one of its levels matches the physical state,
at which point the state tunnels across completely.  Scanning the probing-well
width or depth for these resonances reveals the physical energy.
"""

from . import dynamics, eigensolve, model, scanner, semiclassic, squarewell
from ._kernels import BACKEND
from .errors import InputError, NotFoundError, NumericalError, TunnelCatchError
from .experiment import Experiment
from .model import DoubleWellSpec, PhysicalWellSpec, SquareWellSpec

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "DoubleWellSpec",
    "Experiment",
    "InputError",
    "NotFoundError",
    "NumericalError",
    "PhysicalWellSpec",
    "SquareWellSpec",
    "TunnelCatchError",
    "dynamics",
    "eigensolve",
    "model",
    "scanner",
    "semiclassic",
    "squarewell",
]
