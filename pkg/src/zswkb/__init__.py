"""Semiclassical scattering data for the Zakharov-Shabat operator.

Computes WKB eigenvalues by multi-barrier Bohr-Sommerfeld quantization,
norming-constant signs, the limiting eigenvalue density and the reflection
coefficient, and validates them against a direct numerical spectrum and
Jost-solution integration.
"""

from .potential import (
    PotentialSpec,
    EnergyDecomposition,
    make_potential,
    load_potential,
    eval_with_derivatives,
    decompose,
    validate_assumptions,
)

__version__ = "0.1.0"
