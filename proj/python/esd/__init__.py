"""Elastic shape distance and registration between curves in R^d."""

try:
    from ._esd import (
        Curve,
        EsdError,
        RegistrationResult,
        compute_esd,
        fit_rigid_motion,
        ku_rotation,
        load_curve,
        normalize,
        polyline_length,
        resample,
        reverse_direction,
        srvf,
    )
except ImportError:  # extension built outside the package (plain CMake build)
    from _esd import (
        Curve,
        EsdError,
        RegistrationResult,
        compute_esd,
        fit_rigid_motion,
        ku_rotation,
        load_curve,
        normalize,
        polyline_length,
        resample,
        reverse_direction,
        srvf,
    )

__all__ = [
    "Curve",
    "EsdError",
    "RegistrationResult",
    "compute_esd",
    "fit_rigid_motion",
    "ku_rotation",
    "load_curve",
    "normalize",
    "polyline_length",
    "resample",
    "reverse_direction",
    "srvf",
]
