"""Spectra, continued fractions and three-term recurrences of Jacobi matrices."""

from ._core import (
    Error,
    InputFileError,
    InsufficientResolution,
    InvalidInput,
    NumericalFailure,
    Sequence,
    SFraction,
    UnsupportedRange,
    bessel_j,
    bessel_zero,
    blumenthal_limits,
    cf_limit,
    check_contraction,
    classify,
    eigen_tridiag,
    eval_polys,
    family,
    family_info,
    family_names,
    j_convergent,
    krein_decay,
    mass,
    poincare_roots,
    ratio,
    rogers_ramanujan_sfraction,
    s_convergent,
    spectrum,
    truncate,
    zero_gap,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
