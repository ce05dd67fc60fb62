"""Exact verification engine and spectral laboratory for a quantum model
with reflection symmetries on the two-sphere.

Every operator becomes an exact rational matrix on a truncated polynomial
space; algebraic identities, spectra, and degeneracies are certified with
zero tolerance, while the closed-form eigenfunctions are evaluated in
floating point and cross-checked against the exact eigenspaces.
"""

from .bases import BasisRangeError, FullPoly3, Poly1, SphereQuotient
from .closedform import (
    QuadratureGrid,
    SphereState,
    admissible_states,
    azimuthal_wave,
    cross_family_gram,
    eigenvector_match,
    gram_defect,
    gram_matrix,
    jacobi_exact,
    polar_wave,
    sphere_wave,
    wavefunction_suite,
)
from .laurent import (
    LaurentPoly3,
    ModelParams,
    NonRegularError,
    format_rational,
    parse_rational,
)
from .linop import (
    LinOp,
    annihilator_product,
    anticommutator,
    build_matrix,
    commutator,
    kernel_basis,
    rank_exact,
)
from .parser import ParseError, parse
from .plane import (
    PlaneModel,
    contracted_energy,
    contraction_deviation,
    contraction_suite,
    limit_energy,
    plane_suite,
    rotation_suite,
)
from .racah import LadderModel, differential_suite, ladder_suite
from .reporting import CheckResult, Recorder, VerificationReport
from .sphere import (
    ParameterCollisionError,
    SymmetryCatalog,
    energy,
    invariance_suite,
    separation_certificate,
    spectrum_certificate,
    symmetry_expr,
    symmetry_text,
)

__all__ = [
    "BasisRangeError",
    "FullPoly3",
    "Poly1",
    "SphereQuotient",
    "QuadratureGrid",
    "SphereState",
    "admissible_states",
    "azimuthal_wave",
    "cross_family_gram",
    "eigenvector_match",
    "gram_defect",
    "gram_matrix",
    "jacobi_exact",
    "polar_wave",
    "sphere_wave",
    "wavefunction_suite",
    "LaurentPoly3",
    "ModelParams",
    "NonRegularError",
    "format_rational",
    "parse_rational",
    "LinOp",
    "annihilator_product",
    "anticommutator",
    "build_matrix",
    "commutator",
    "kernel_basis",
    "rank_exact",
    "ParseError",
    "parse",
    "PlaneModel",
    "contracted_energy",
    "contraction_deviation",
    "contraction_suite",
    "limit_energy",
    "plane_suite",
    "rotation_suite",
    "LadderModel",
    "differential_suite",
    "ladder_suite",
    "CheckResult",
    "Recorder",
    "VerificationReport",
    "ParameterCollisionError",
    "SymmetryCatalog",
    "energy",
    "invariance_suite",
    "separation_certificate",
    "spectrum_certificate",
    "symmetry_expr",
    "symmetry_text",
]
