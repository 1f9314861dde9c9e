"""Exact symbolic computation for quantized enveloping algebras of finite
type at desk scale: weight modules, universal R-matrices, the quantized
flag coordinate ring with its Ore localizations, and q-differential
operators."""

from .cartan import CartanDatum, CharacterPoly, kostant_dim, preset, \
    verma_character, weyl_character
from .coordring import CoordElement, CoordRing, LocalizedElement
from .enveloping import UAlgebra, UElement
from .rmatrix import DrinfeldPairing, r_operator
from .scalars import QScalar, exp_t_coefficient, quantum_factorial, \
    quantum_integer
from .weightmod import WeightModule, restricted_dual, simple, tensor, verma

__all__ = [
    "CartanDatum", "CharacterPoly", "CoordElement", "CoordRing",
    "DrinfeldPairing", "LocalizedElement", "QScalar", "UAlgebra",
    "UElement", "WeightModule", "exp_t_coefficient", "kostant_dim",
    "preset", "quantum_factorial", "quantum_integer", "r_operator",
    "restricted_dual", "simple", "tensor", "verma", "verma_character",
    "weyl_character",
]

__version__ = "0.1.0"
