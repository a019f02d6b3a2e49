"""Exact masses, xi-classification and Pi-adic lifting for supersingular abelian surfaces."""
from .exact_arith import bernoulli, zeta_negative
from .finite_field import FFElem, FieldCtx, make_field
from .lifting import LiftObstruction, lift_sl2
from .mass import census, hecke_orbit_size, mass_lambda_x, mass_superspecial, mass_superspecial_fkernel
from .padic import make_unram
from .quaternion import QuatMat, make_quat
from .xi import Case, XiPoint, classify

__all__ = [
    "Case", "FFElem", "FieldCtx", "LiftObstruction", "QuatMat", "XiPoint", "bernoulli", "census",
    "classify", "hecke_orbit_size", "lift_sl2", "make_field", "make_quat", "make_unram", "mass_lambda_x",
    "mass_superspecial", "mass_superspecial_fkernel", "zeta_negative",
]
__version__ = "0.1.0"
