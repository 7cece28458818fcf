"""Shearlet frame, anisotropic sequence spaces and restricted nonlinear approximation.

Coefficient sequences are dicts mapping index text to complex values, e.g.
``{"S 1 2 -1 3 0": 0.5, "C 0 0": 1.0}`` (cone, scale, shear, translate; or a coarse translate).
"""

from ._anisoframe import (
    CapacityError,
    FormatError,
    InvalidIndex,
    ParameterError,
    ShearletSystem,
    Unsupported,
    approx_space_norm,
    band_limit,
    besov_norm,
    cartoon_image,
    decay_curves,
    democracy_ratio,
    identical_space_constant,
    interp_norm_besov,
    lemma31_constant,
    lorentz_norm,
    random_band_limited,
    sigma_curve,
    sigma_exact,
    tl_norm,
)

__all__ = [
    "CapacityError",
    "FormatError",
    "InvalidIndex",
    "ParameterError",
    "ShearletSystem",
    "Unsupported",
    "approx_space_norm",
    "band_limit",
    "besov_norm",
    "cartoon_image",
    "decay_curves",
    "democracy_ratio",
    "identical_space_constant",
    "interp_norm_besov",
    "lemma31_constant",
    "lorentz_norm",
    "random_band_limited",
    "sigma_curve",
    "sigma_exact",
    "tl_norm",
]
