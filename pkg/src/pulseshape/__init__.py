"""Pulse shaping and approximate eigenstructure for doubly dispersive channels."""
from ._kernels import BACKEND
from .gabor import Lattice, NotAFrame, PulsePair, make_gaussian, make_lattice, tighten
from .tfcore import TFCell, cross_ambiguity, symplectic_dft, tf_shift
from .wssus import ChannelRealization, ScatteringMass, make_brick_scattering

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ChannelRealization",
    "Lattice",
    "NotAFrame",
    "PulsePair",
    "ScatteringMass",
    "TFCell",
    "cross_ambiguity",
    "make_brick_scattering",
    "make_gaussian",
    "make_lattice",
    "symplectic_dft",
    "tf_shift",
    "tighten",
]
