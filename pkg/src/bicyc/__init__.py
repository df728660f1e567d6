"""Hamilton cycles in bicirculant graphs B(m; R, S, T)."""
from .core import (
    BicirculantError,
    BicirculantParams,
    CycleCertificate,
    U,
    V,
    Vertex,
    gp,
    make_params,
    neighbors,
    render_params,
    sym,
    verify_certificate,
)
from .dispatcher import classify, sweep, theorem13_applicable
from .grammar import parse_params

__all__ = [
    "BicirculantError", "BicirculantParams", "CycleCertificate", "U", "V", "Vertex", "gp",
    "make_params", "neighbors", "render_params", "sym", "verify_certificate", "classify", "sweep",
    "theorem13_applicable", "parse_params",
]
