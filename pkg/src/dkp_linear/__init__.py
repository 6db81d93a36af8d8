"""Quasi-exact bound states of the DKP equation with a scalar linear potential."""
from .spectrum import ModelParams, Parity, QuasiExactState, energy, make_state, zeta_roots

__version__ = "0.1.0"
__all__ = ["ModelParams", "Parity", "QuasiExactState", "energy", "make_state", "zeta_roots"]
