"""Exact virtual characteristic numbers of virtually smooth spaces."""
from .chow import ChowClass, ChowModel, Generator, IntegralFunctional, integrate
from .elliptic import EllResult, ecal_ch, ell_vir, jacobi_shift_check, theta_series
from .genera import (
    VirtualSpace,
    chern_number,
    chi_minus_y,
    chi_vir,
    chi_y_class,
    euler_signature,
    virtual_canonical_c1,
    virtual_tangent,
)
from .ktheory import Bundle, GenusSeries, KClass, genus_class, todd
from .localization import (
    EpsWindow,
    EquivariantBundle,
    FixedComponent,
    euler_additivity,
    localized_chi,
    localized_chi_y,
    localized_elliptic,
)

__all__ = [
    "Bundle", "ChowClass", "ChowModel", "EllResult", "EpsWindow", "EquivariantBundle",
    "FixedComponent", "Generator", "GenusSeries", "IntegralFunctional", "KClass", "VirtualSpace",
    "chern_number", "chi_minus_y", "chi_vir", "chi_y_class", "ecal_ch", "ell_vir",
    "euler_additivity", "euler_signature", "genus_class", "integrate", "jacobi_shift_check",
    "localized_chi", "localized_chi_y", "localized_elliptic", "theta_series", "todd",
    "virtual_canonical_c1", "virtual_tangent",
]
__version__ = "0.1.0"
