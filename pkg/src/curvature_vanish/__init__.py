"""Vanishing of L^2 harmonic p-forms on symmetric spaces of noncompact type.

Exact restricted-root data, chamber optimization of the eigen-sum gap, the
pinching and root-triple criteria, and a matrix Lie algebra oracle.
"""

__version__ = "0.1.0"

from .catalog import Catalog, SpaceDescriptor, enumerate_catalog, load_catalog_override, lookup
from .curvature import curvature_spectrum, hessian_spectrum, laplacian, pinching
from .errors import (
    CrossCheckError,
    DataError,
    IdentityViolation,
    ParameterError,
    PreconditionError,
    SpaceLookupError,
    VanishError,
)
from .rootkit import RestrictedRootSystem, build_root_system, root_system
from .vanishing import (
    VanishingCertificate,
    check,
    check_eigen_sum,
    check_pinching,
    check_root_triple,
    max_vanishing_degree,
    verify_proof_chain,
)

__all__ = [
    "Catalog",
    "CrossCheckError",
    "DataError",
    "IdentityViolation",
    "ParameterError",
    "PreconditionError",
    "RestrictedRootSystem",
    "SpaceDescriptor",
    "SpaceLookupError",
    "VanishError",
    "VanishingCertificate",
    "build_root_system",
    "check",
    "check_eigen_sum",
    "check_pinching",
    "check_root_triple",
    "curvature_spectrum",
    "enumerate_catalog",
    "hessian_spectrum",
    "laplacian",
    "load_catalog_override",
    "lookup",
    "max_vanishing_degree",
    "pinching",
    "root_system",
    "verify_proof_chain",
]
