"""Drift-Laplacian spectra of rigid gradient Ricci solitons."""

from importlib import resources

from .errors import IncompleteSpectrumError, ValidationError
from .factors import (
    FactorSpectrum,
    hyperbolic_bottom,
    load_factor_spectrum,
    sphere_spectrum,
    trivial_factor,
)
from .kernels import BACKEND
from .rigid import SolitonModel, first_lines, rigid_spectrum, second_eigenvalue_case
from .spectra import DiscreteSpectrum, ScalarValue, SpectralLine, minkowski_sum

__version__ = "0.1.0"


def bundled_spectrum(name: str = "bolza") -> FactorSpectrum:
    """A factor spectrum shipped with the package (``bolza``)."""
    path = resources.files(__name__) / "data" / f"{name}.json"
    return load_factor_spectrum(path.read_text(encoding="utf-8"))


__all__ = [
    "BACKEND",
    "DiscreteSpectrum",
    "FactorSpectrum",
    "IncompleteSpectrumError",
    "ScalarValue",
    "SolitonModel",
    "SpectralLine",
    "ValidationError",
    "bundled_spectrum",
    "first_lines",
    "hyperbolic_bottom",
    "load_factor_spectrum",
    "minkowski_sum",
    "rigid_spectrum",
    "second_eigenvalue_case",
    "sphere_spectrum",
    "trivial_factor",
]
