"""Curvature-transformation spectra, distance Hessian, Ricci constant and pinching.

For a unit direction ``h`` in the flat, the curvature transformation
``X -> R(X,h)h = -ad(h)^2 X`` on the tangent space has eigenvalue
``-lambda(h)^2`` with multiplicity ``m_lambda`` for each positive restricted
root, and ``0`` on the rest of the flat (``rank - 1`` directions orthogonal to
``h``).  Along the geodesic ``exp(t h)`` the distance Hessian at radius ``r``
has eigenvalues ``v coth(v r)`` for each root value ``v = |lambda(h)|``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .catalog import SpaceDescriptor
from .errors import ParameterError

SERIES_SWITCHOVER = 1e-4


@dataclass(frozen=True)
class CurvatureSpectrum:
    """``entries`` are ``(value, multiplicity)`` pairs, one per positive root.

    Structural flat directions appear as a single trailing entry for the
    curvature-operator and Hessian kinds.
    """

    entries: tuple[tuple[float, int], ...]
    direction: tuple[float, ...]
    kind: str  # "curvature_operator" | "hessian_of_distance" | "root_values"
    radius: float | None = None

    @property
    def total_multiplicity(self) -> int:
        return sum(m for _, m in self.entries)

    def expanded(self) -> list[float]:
        """Values repeated by multiplicity, sorted descending."""
        return sorted((v for v, m in self.entries for _ in range(m)), reverse=True)

    def trace(self) -> float:
        return math.fsum(v * m for v, m in self.entries)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "direction": list(self.direction),
            "radius": self.radius,
            "entries": [[v, m] for v, m in self.entries],
        }


@dataclass(frozen=True)
class PinchingReport:
    A: Fraction  # max |lambda|^2: minus the sectional-curvature lower bound
    B: Fraction  # Ricci bound magnitude, 1/2 under Killing normalization
    ratio: Fraction
    max_p_by_pinching: int

    def to_dict(self) -> dict:
        return {
            "A": float(self.A),
            "B": float(self.B),
            "ratio": float(self.ratio),
            "A_exact": str(self.A),
            "ratio_exact": str(self.ratio),
            "max_p_by_pinching": self.max_p_by_pinching,
        }


def unit_direction(space: SpaceDescriptor, h: Sequence[float], normalize: bool = True) -> np.ndarray:
    h = np.asarray(h, dtype=float)
    if h.shape != (space.rank,):
        raise ParameterError(f"direction must have {space.rank} coordinates, got shape {h.shape}")
    norm = float(np.linalg.norm(h))
    if norm == 0.0 or not math.isfinite(norm):
        raise ParameterError("direction must be a nonzero finite vector")
    if normalize and abs(norm - 1.0) > 1e-12:
        warnings.warn(f"direction has norm {norm:.6g}; normalizing", stacklevel=3)
        h = h / norm
    return h


def root_values(space: SpaceDescriptor, h: Sequence[float]) -> CurvatureSpectrum:
    h = unit_direction(space, h)
    vals = np.abs(space.system.root_matrix @ h)
    entries = tuple((float(v), int(m)) for v, m in zip(vals, space.system.multiplicities))
    return CurvatureSpectrum(entries, tuple(map(float, h)), "root_values")


def _flat_entry(space: SpaceDescriptor, value: float) -> tuple[tuple[float, int], ...]:
    return ((value, space.rank - 1),) if space.rank > 1 else ()


def curvature_spectrum(space: SpaceDescriptor, h: Sequence[float]) -> CurvatureSpectrum:
    rv = root_values(space, h)
    entries = tuple((-(v * v), m) for v, m in rv.entries) + _flat_entry(space, 0.0)
    return CurvatureSpectrum(entries, rv.direction, "curvature_operator")


def lambda_coth_series(v: float, r: float) -> float:
    """Three-term expansion of ``v coth(v r)`` about ``v = 0``."""
    return 1.0 / r + v * v * r / 3.0 - v**4 * r**3 / 45.0


def lambda_coth(v: float, r: float) -> float:
    """``v coth(v r)`` with the removable singularity at ``v = 0`` filled by ``1/r``."""
    if r <= 0:
        raise ParameterError("radius must be positive")
    v = abs(v)
    if v * r < SERIES_SWITCHOVER:
        return lambda_coth_series(v, r)
    return v / math.tanh(v * r)


def lambda_coth_array(v: np.ndarray, r: float) -> np.ndarray:
    """Vectorized :func:`lambda_coth` with the same branch rule."""
    v = np.abs(np.asarray(v, dtype=float))
    x = v * r
    small = x < SERIES_SWITCHOVER
    safe = np.where(small, 1.0, x)
    direct = v / np.tanh(safe)
    series = 1.0 / r + v * v * r / 3.0 - v**4 * r**3 / 45.0
    return np.where(small, series, direct)


def hessian_spectrum(space: SpaceDescriptor, h: Sequence[float], radius: float) -> CurvatureSpectrum:
    if not radius > 0 or not math.isfinite(radius):
        raise ParameterError("radius must be positive")
    rv = root_values(space, h)
    entries = tuple((lambda_coth(v, radius), m) for v, m in rv.entries)
    entries += _flat_entry(space, 1.0 / radius)
    return CurvatureSpectrum(entries, rv.direction, "hessian_of_distance", radius=float(radius))


def asymptotic_hessian_spectrum(space: SpaceDescriptor, h: Sequence[float]) -> CurvatureSpectrum:
    """The ``r -> infinity`` limit: ``|lambda(h)|`` per root and ``0`` on the flat."""
    rv = root_values(space, h)
    return CurvatureSpectrum(rv.entries + _flat_entry(space, 0.0), rv.direction, "hessian_of_distance", radius=math.inf)


def laplacian(space: SpaceDescriptor, h: Sequence[float], radius: float) -> float:
    """Laplacian of the distance function at ``exp(radius h)``."""
    return hessian_spectrum(space, h, radius).trace()


def ricci_radial(space: SpaceDescriptor, h: Sequence[float], normalize: bool = True) -> float:
    """``Ric(h, h) = -sum m_lambda lambda(h)^2``; ``-1/2`` for every unit ``h``."""
    h = unit_direction(space, h, normalize=normalize)
    vals = space.system.root_matrix @ h
    return -math.fsum(float(m) * v * v for v, m in zip(vals, space.system.multiplicities))


def pinching(space: SpaceDescriptor) -> PinchingReport:
    s = space.system
    A = max(s.norm_sq(r) for r in s.positive_roots)
    # the Ricci magnitude follows from the exact normalization, not assumed
    B = sum((m * s.norm_sq(r) for r, m in zip(s.positive_roots, s.multiplicities)), Fraction(0)) / s.rank
    ratio = B / A
    p = 0
    while (p + 1) * (p + 2) <= ratio:
        p += 1
    return PinchingReport(A=A, B=B, ratio=ratio, max_p_by_pinching=p)
