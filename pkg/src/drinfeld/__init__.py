"""
Exact arithmetic for rank-two Drinfeld modules over the degree-two-infinity line.

Layers, bottom-up: ff (finite fields), skew (twisted polynomials), params
(the fixed arithmetic context), modules (normalized and minimal models),
recursion (isogeny chains), printed (statement displays), tower (reduced
tower, genus and Ihara analytics).
"""

from src.drinfeld.errors import TowerError
from src.drinfeld.modules import Model, build_minimal, build_normalized, verify_module
from src.drinfeld.params import Mode, TowerParams, build_params
from src.drinfeld.tower import enumerate_tower, genus, ihara_table, supersingular_j_set

__all__ = [
    "Mode",
    "Model",
    "TowerError",
    "TowerParams",
    "build_minimal",
    "build_normalized",
    "build_params",
    "enumerate_tower",
    "genus",
    "ihara_table",
    "supersingular_j_set",
    "verify_module",
]
