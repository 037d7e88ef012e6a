from unitutte_core.algebra.monoid import Axis, MonoidElem, MonoidSig, Rule
from unitutte_core.algebra.numtheory import (
    IntMatrix,
    SmithForm,
    factorize,
    p_part,
    quotient_invariants,
    smith_normal_form,
)
from unitutte_core.algebra.poly import IMAG, MRPoly, render_coeff, unify_rings

__all__ = [
    "Axis",
    "IMAG",
    "IntMatrix",
    "MRPoly",
    "MonoidElem",
    "MonoidSig",
    "Rule",
    "SmithForm",
    "factorize",
    "p_part",
    "quotient_invariants",
    "render_coeff",
    "smith_normal_form",
    "unify_rings",
]
